#pragma once

#include "torflat/linalg.hpp"
#include "torflat/puiseux.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torflat {

/// Affine flat a_0 + span{a_q : q < 0} attached to a branch. Base and
/// direction generators are polynomial in the branch parameters; `at` gives
/// the exact flat over K at a parameter point.
struct AsymptoticFlat {
    ScalarMode mode = ScalarMode::Complex;
    ParamPtr params;
    std::vector<Poly> base;
    std::vector<Rational> exponents; // principal exponents, ascending
    std::vector<std::vector<Poly>> dirs;
    /// Real dimension of the direction, max over the parameter samples.
    int dim = 0;
    PuiseuxBranch source;

    /// Number of branch coordinates.
    int size() const { return static_cast<int>(base.size()); }
    /// Dimension of the realified ambient space of the flats.
    int ambient() const { return mode == ScalarMode::Complex ? 2 * size() : size(); }
    bool parametric() const { return params && params->size() > 0; }
    /// Parameter points used for rank and containment checks ({} when exact).
    std::vector<std::vector<NFElem>> sample_points() const;
    Flat at(const std::vector<NFElem>& point) const;
    /// The flat itself for parameter-free branches.
    Flat exact() const;
    std::string str() const;
};

/// Branch with every coefficient evaluated at a parameter point.
PuiseuxBranch specialize(const PuiseuxBranch& b, const std::vector<NFElem>& point);

/// Coordinates of a branch need a known constant term and a certified
/// leading coefficient in their principal part.
AsymptoticFlat flat_of_branch(const PuiseuxBranch& alpha, ScalarMode mode);

/// No coordinate has a negative exponent. Unbounded coordinates must have a
/// certified leading coefficient.
bool is_bounded(const PuiseuxBranch& alpha);

/// True if every linear condition cutting out the flat holds along the
/// branch up to positive valuation (parameter-free branches). Complex-mode
/// flats must be i-invariant.
bool branch_near_flat(const PuiseuxBranch& alpha, const Flat& flat);

/// Functional vanishing on a sub-family of the principal vectors whose value
/// along the branch has negative valuation.
struct MinimalityWitness {
    Vec functional;
    Rational valuation;
};
/// Witness that the branch is not close to a_0 + span{a_q : q in subset};
/// nullopt when the subset already spans the whole direction.
std::optional<MinimalityWitness> minimality_witness(const AsymptoticFlat& flat, const std::vector<int>& subset,
                                                    const std::vector<NFElem>& point = {});

struct FlatDecomposition {
    Subspace complement;
    PuiseuxBranch projected;
    AsymptoticFlat projected_flat;
};
/// Splits the flat as H plus the flat of the projection of the branch onto
/// the orthogonal complement of H; throws NotContained unless H lies in the
/// direction, and checks the reassembly at every parameter sample.
FlatDecomposition flat_decompose(const PuiseuxBranch& alpha, const Subspace& h);

enum class StabAnswer { Yes, No, Unknown };
std::string to_string(StabAnswer a);

struct StabResult {
    StabAnswer answer = StabAnswer::Unknown;
    /// Yes: branch on X with witness - (v + alpha) of positive valuation.
    std::optional<PuiseuxBranch> witness;
    /// No: equation whose value keeps exponent `exponent` with coefficient
    /// `coefficient` for every positive-valuation perturbation.
    int equation = -1;
    Rational exponent;
    Poly coefficient;
    std::string reason;
};

/// Semi-decision for whether v + alpha lies within positive valuation of a
/// branch on X, up to `order`.
StabResult mu_stab_member(const Vec& v, const PuiseuxBranch& alpha, const std::vector<Poly>& system,
                          const Rational& order, int max_steps = 64);

} // namespace torflat
