#pragma once

#include "torflat/asymptotics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torflat {

/// Flats sharing one parameter system; one parametric branch family.
struct FlatFamily {
    std::string name;
    std::vector<AsymptoticFlat> members;

    int ambient() const;
    ScalarMode mode() const;
    ParamPtr params() const;
    /// Largest member dimension.
    int k() const;
};

/// Points c_A (one per member), polynomial in the family parameters.
struct TranslateSet {
    ParamPtr params;
    std::vector<std::vector<Poly>> points;

    bool parameter_free() const;
    /// Same points up to order, equal on the parameter domain.
    bool same_as(const TranslateSet& o) const;
    std::string str() const;
};

struct SpanResult {
    Subspace span;
    /// Sampled rank matched the rank of the monomial coefficient vectors.
    bool certified = false;
};

/// Linear span of the directions of all members.
SpanResult family_span(const FlatFamily& family);

/// Projections of the member base points onto the orthogonal complement of V.
TranslateSet translate_set(const FlatFamily& family, const Subspace& v);

struct ClosureComponent {
    std::string family;
    TranslateSet c;
    Subspace v;
    Subspace v_lambda;
    bool maximal = false;
    bool span_certified = false;
};

struct ClosureDescription {
    std::vector<std::string> variables;
    std::vector<Poly> variety;
    Lattice lattice;
    ScalarMode mode = ScalarMode::Complex;
    std::vector<ClosureComponent> components;
    std::vector<std::string> notes;
};

/// Components (C_i, V_i, V_i^Lambda) for the unbounded families; flats of
/// dimension 0 belong to X itself and are skipped.
ClosureDescription assemble_closure(const std::vector<FlatFamily>& families, const Lattice& lattice,
                                    const std::vector<Poly>& variety = {},
                                    const std::vector<std::string>& variables = {});

struct ClauseEntry {
    int component = 0;
    int dim_c = 0;
    bool dim_ok = false;   // dim C_i < dim X
    bool maximal = false;
    bool finite = false;   // C_i has dimension 0
    bool finite_ok = true; // finite whenever maximal
};

struct ClauseReport {
    int dim_x = 0;
    std::vector<ClauseEntry> entries;
    bool all_ok() const;
};

/// Dimension of a translate set: rank of the parametrization restricted to
/// the tangent space of the parameter domain, max over the samples.
int translate_set_dim(const TranslateSet& c);

ClauseReport clause_checks(const ClosureDescription& desc, int dim_x);

struct Subtorus {
    int component = 0;
    /// Real dimension of the subtorus.
    int dim = 0;
    /// Saturated integer basis (rows) of V^Lambda in lattice coordinates.
    IntMat lattice_basis;
    TranslateSet c;
};

/// Subtori pi(V_i^Lambda) in lattice coordinates.
std::vector<Subtorus> torus_description(const ClosureDescription& desc);
Subtorus subtorus_of(const Subspace& v_lambda, const Lattice& lattice);

} // namespace torflat
