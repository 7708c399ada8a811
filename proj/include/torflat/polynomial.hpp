#pragma once

#include "torflat/numberfield.hpp"

#include <map>
#include <string>
#include <vector>

namespace torflat {

using Monomial = std::vector<int>;

/// Sparse multivariate polynomial over a number field, in a fixed number of
/// variables. Zero coefficients are never stored.
class Poly {
  public:
    explicit Poly(int nvars = 0) : nvars_(nvars) {}
    static Poly constant(int nvars, const NFElem& c);
    static Poly variable(int nvars, int index);
    static Poly monomial(const Monomial& m, const NFElem& c);

    int nvars() const { return nvars_; }
    const std::map<Monomial, NFElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Coefficient of the constant monomial.
    NFElem constant_term() const;
    NFElem coeff(const Monomial& m) const;
    int degree(int var) const;
    int total_degree() const;
    /// Field generated by the coefficients (Q if there are none).
    FieldPtr field() const;

    void add_term(const Monomial& m, const NFElem& c);

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const NFElem& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend Poly operator*(Poly a, const NFElem& c) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(unsigned e) const;
    NFElem eval(const std::vector<NFElem>& point) const;
    Poly derivative(int var) const;
    /// Substitutes value for variable var (variable count unchanged).
    Poly substitute(int var, const NFElem& value) const;
    /// Coefficients in powers of variable var: result[k] multiplies var^k.
    std::vector<Poly> coefficients_in(int var) const;

    std::string str(const std::vector<std::string>& names) const;

  private:
    int nvars_;
    std::map<Monomial, NFElem> terms_;
};

/// Parses expressions such as "x*(1-y*z)-1" or "t^2 - 3/2*i*u". Identifiers
/// are taken from `vars`; "i" denotes the imaginary unit of `field` and
/// "theta" its generator, unless shadowed by a variable of the same name.
Poly parse_poly(const std::string& text, const std::vector<std::string>& vars, const FieldPtr& field);

/// Dense univariate polynomial with coefficients in K, constant first.
using KPoly = std::vector<NFElem>;

void kpoly_trim(KPoly& p);
void kpoly_divmod(const KPoly& a, const KPoly& b, KPoly& q, KPoly& r);
KPoly kpoly_gcd(KPoly a, KPoly b);
KPoly kpoly_derivative(const KPoly& a);
bool kpoly_squarefree(const KPoly& a);

} // namespace torflat
