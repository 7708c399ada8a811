#pragma once

#include "torflat/params.hpp"
#include "torflat/polynomial.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace torflat {

/// Truncated Puiseux series sum_k c_k z^(k/e) with coefficients polynomial in
/// the parameters of a ParameterSystem. Terms with exponent above the
/// truncation order are unknown; nullopt truncation means the series is exact.
/// Stored coefficients are never zero on the parameter domain (sampled).
class Series {
  public:
    explicit Series(ParamPtr params = nullptr, int ramification = 1);
    static Series constant(const Poly& c, ParamPtr params = nullptr);
    static Series constant(const NFElem& c, ParamPtr params = nullptr);
    /// c z^q, exact.
    static Series monomial(const Rational& q, const Poly& c, ParamPtr params = nullptr);
    static Series monomial(const Rational& q, const NFElem& c, ParamPtr params = nullptr);
    /// Terms keyed by e * exponent.
    static Series from_terms(ParamPtr params, int ramification, std::map<long, Poly> terms,
                             std::optional<Rational> truncation);

    const ParamPtr& params() const { return params_; }
    int ramification() const { return e_; }
    const std::map<long, Poly>& terms() const { return terms_; }
    const std::optional<Rational>& truncation() const { return trunc_; }
    bool is_exact() const { return !trunc_.has_value(); }
    Rational exponent(long key) const { return make_rational(key, e_); }
    /// Coefficient of z^q (zero if absent; TruncationTooLow if unknown).
    Poly coefficient(const Rational& q) const;

    /// Same series with ramification a multiple of the current one.
    Series with_ramification(int e) const;
    Series with_params(const ParamPtr& params) const;
    /// Forgets all terms above q.
    Series truncated(const Rational& q) const;

    Series operator-() const;
    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    Series scaled(const Poly& c) const;
    Series pow(unsigned k) const;
    /// Exactly equal terms and truncation (after common ramification).
    friend bool operator==(const Series& a, const Series& b);

    /// Certified lower bound for the valuation: least stored exponent, else
    /// the truncation order, else nullopt (exact zero).
    std::optional<Rational> valuation_bound() const;
    bool is_exact_zero() const { return terms_.empty() && !trunc_; }

    /// Least exponent. Throws ParameterDependentLeadingTerm when the leading
    /// coefficient is not certified nonzero on the whole domain, and
    /// UncertifiableZero when no term is known but the series is truncated.
    /// nullopt means +infinity.
    std::optional<Rational> valuation() const;
    /// Coefficient of z^0. Requires no negative exponents (NegativeValuation).
    Poly standard_part() const;
    /// True if there are no negative exponents (bounded for every parameter).
    bool is_bounded() const;

    /// Exact value at z = w^e for rational w != 0 and a parameter point.
    NFElem eval(const Rational& w, const std::vector<NFElem>& param_point) const;

    std::string str() const;

  private:
    void prune();

    ParamPtr params_;
    int e_ = 1;
    std::map<long, Poly> terms_;
    std::optional<Rational> trunc_;
};

/// Lifts a polynomial in zero variables to `nvars` variables.
Poly lift_constant_poly(const Poly& p, int nvars);

/// Common ramification and parameters for a set of series.
std::vector<Series> unify(const std::vector<Series>& s);

/// Branch of a curve or family: a vector of series in a common parameter z.
struct PuiseuxBranch {
    std::vector<Series> coords;
    ParamPtr params;
    /// Number of conjugate roots this expansion stands for when different
    /// roots agree up to the truncation order.
    int multiplicity = 1;

    PuiseuxBranch() = default;
    PuiseuxBranch(std::vector<Series> coords, ParamPtr params = nullptr, int multiplicity = 1);

    int size() const { return static_cast<int>(coords.size()); }
    int ramification() const;
    /// Least truncation over the coordinates (nullopt when all are exact).
    std::optional<Rational> truncation() const;
    std::vector<NFElem> eval(const Rational& w, const std::vector<NFElem>& param_point) const;
    std::string str() const;
};

/// f(args) for a polynomial f over K in args.size() variables.
Series eval_poly(const Poly& f, const std::vector<Series>& args, const ParamPtr& params = nullptr);

/// Residual valuation of a polynomial along a branch.
struct ResidualBound {
    enum class Kind { Exact, AtLeast, Infinite };
    Kind kind = Kind::Infinite;
    /// Exact: the valuation (for generic parameters). AtLeast: the valuation
    /// is strictly greater than this truncation order.
    Rational value;

    /// Residual certified to exceed order q.
    bool accepted(const Rational& q) const;
    std::string str() const;
};

ResidualBound residual_of(const Series& s);
std::vector<ResidualBound> residual_valuation(const std::vector<Poly>& system, const PuiseuxBranch& branch);
bool on_variety(const std::vector<Poly>& system, const PuiseuxBranch& branch, const Rational& order);

/// Branches at infinity of the plane curve f(x, y) = 0, each certified to
/// have residual valuation above `order`: the expansions (z^-1, y(z)) over
/// x = infinity, and (x(z), z^-1) with x bounded over y = infinity. Every
/// conjugate root is returned separately; coefficients outside K live in
/// generated extensions of Q of degree <= 4.
std::vector<PuiseuxBranch> newton_puiseux_at_infinity(const Poly& f, const Rational& order, std::uint64_t seed = 1);

/// f(x0, y) is squarefree in y and f(x, y0) squarefree in x for random x0, y0.
bool is_squarefree_bivariate(const Poly& f, std::uint64_t seed = 1);

} // namespace torflat
