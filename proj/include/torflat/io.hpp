#pragma once

#include "torflat/verify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

/// JSON documents, schema "v1". Rationals are "p/q" strings, K-elements are
/// power-basis coefficient lists interpreted in the nearest enclosing "field"
/// descriptor (Q when absent), polynomials are sparse lists of
/// {"mono": [exponents], "coeff": K-element}. Readers also accept a
/// polynomial written as an expression string. Malformed input raises
/// SchemaError.
namespace torflat::io {

using nlohmann::json;

inline constexpr const char* kVersion = "v1";

json to_json(const Rational& q);
Rational rational_from_json(const json& j);

json field_to_json(const FieldPtr& f);
FieldPtr field_from_json(const json& j);

json elem_to_json(const NFElem& x);
NFElem elem_from_json(const json& j, const FieldPtr& field);

json poly_to_json(const Poly& p);
/// `names` is used for expression strings.
Poly poly_from_json(const json& j, int nvars, const FieldPtr& field, const std::vector<std::string>& names = {});

json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const json& j);

/// Complex mode stores a C-basis of vectors in K^m, real mode a basis in K^n.
json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const json& j, const FieldPtr& context = nullptr);

/// Branch object; per-coordinate truncations are kept in "truncations".
json branch_to_json(const PuiseuxBranch& b);
PuiseuxBranch branch_from_json(const json& j, const FieldPtr& context = nullptr, std::uint64_t seed = 1);

struct BranchBundle {
    std::vector<std::string> variables;
    Poly curve;
    Rational order;
    std::vector<PuiseuxBranch> branches;
};
json bundle_to_json(const BranchBundle& b);
BranchBundle bundle_from_json(const json& j, std::uint64_t seed = 1);

json flat_to_json(const AsymptoticFlat& f);
AsymptoticFlat flat_from_json(const json& j, const FieldPtr& context = nullptr, std::uint64_t seed = 1);

/// Input of the closure and attraction jobs.
struct BranchFamily {
    std::string name;
    std::vector<PuiseuxBranch> branches;
};
struct ClosureInput {
    std::vector<std::string> variables;
    std::vector<Poly> variety;
    Lattice lattice;
    ScalarMode mode = ScalarMode::Complex;
    int dim_x = 1;
    std::vector<BranchFamily> families;
};
json closure_input_to_json(const ClosureInput& in);
ClosureInput closure_input_from_json(const json& j, std::uint64_t seed = 1);
std::vector<FlatFamily> flat_families(const ClosureInput& in);

struct ClosureDocument {
    ClosureDescription description;
    ClauseReport clauses;
    std::vector<Subtorus> tori;
};
json closure_to_json(const ClosureDocument& d);
ClosureDocument closure_from_json(const json& j, std::uint64_t seed = 1);

json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const json& j);

json error_to_json(const std::string& code, const std::string& message, int exit_code);

/// Canonical text of a document (sorted keys, two-space indent, newline).
std::string dump(const json& j);

ScalarMode mode_from_json(const json& j);

} // namespace torflat::io
