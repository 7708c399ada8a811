#pragma once

#include "torflat/polynomial.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace torflat {

/// Named parameters t_1..t_k ranging over the complex points of the variety
/// cut out by polynomial constraints over K.
///
/// Zero testing is by evaluation at a fixed set of sample points on the
/// constraint variety. A polynomial of total degree D that does not vanish
/// identically on an irreducible component of the domain vanishes at a random
/// point of it with probability at most D/B (B the sampling height), so the
/// chance of a false "zero" over S independent samples is at most (D/B)^S.
class ParameterSystem {
  public:
    static constexpr int kDefaultSamples = 24;

    /// Builds the system and draws its sample points. Throws
    /// EmptyParameterDomain when the sampler cannot find a point and
    /// SamplerFailure when it cannot reach the requested sample count.
    ParameterSystem(std::vector<std::string> names, std::vector<Poly> constraints, std::uint64_t seed = 1,
                    int samples = kDefaultSamples);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<Poly>& constraints() const { return constraints_; }
    const std::vector<std::vector<NFElem>>& samples() const { return samples_; }

    /// True if p vanishes at every sample point.
    bool is_zero(const Poly& p) const;
    bool equal(const Poly& a, const Poly& b) const { return is_zero(a - b); }
    /// True if p is certified nonzero on the whole domain: a nonzero constant,
    /// or a monomial whose variables each have an inverse constraint v*w - 1
    /// (times a nonzero constant).
    bool is_unit(const Poly& p) const;
    /// Polynomial inverse of a unit modulo the constraints.
    std::optional<Poly> inverse_if_unit(const Poly& p) const;
    /// Cancels v*w pairs for every inverse constraint v*w - 1; the result
    /// agrees with p on the domain.
    Poly simplify(const Poly& p) const;
    /// Index of the parameter inverse to `var`, if an inverse constraint exists.
    std::optional<int> inverse_of(int var) const;

    /// Parameters assigned freely by the sampler; the others were solved for.
    const std::vector<int>& chart() const { return chart_; }
    /// Point of the domain with the given chart values, solving the remaining
    /// parameters from the constraints; nullopt if that fails.
    std::optional<std::vector<NFElem>> complete(const std::vector<NFElem>& chart_values) const;

    bool same_as(const ParameterSystem& o) const;
    std::string describe() const;

  private:
    std::vector<std::string> names_;
    std::vector<Poly> constraints_;
    std::vector<std::pair<int, int>> inverse_pairs_;
    std::vector<std::vector<NFElem>> samples_;
    std::vector<int> chart_;
};

using ParamPtr = std::shared_ptr<const ParameterSystem>;

/// Shared empty parameter system.
ParamPtr no_parameters();

/// The system shared by a and b: equal systems, or the non-empty one when the
/// other is empty. Otherwise ParameterMismatch.
ParamPtr common_parameters(const ParamPtr& a, const ParamPtr& b);

} // namespace torflat
