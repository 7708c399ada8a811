#pragma once

#include "torflat/interval.hpp"
#include "torflat/rational.hpp"

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace torflat {

using Complex = std::complex<double>;
using ComplexLD = std::complex<long double>;

/// Dense univariate polynomial over Q, constant coefficient first, trimmed.
struct QPoly {
    std::vector<Rational> c;

    QPoly() = default;
    explicit QPoly(std::vector<Rational> coeffs);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Rational& lead() const { return c.back(); }
    Rational coeff(int i) const { return i < static_cast<int>(c.size()) ? c[i] : Rational(0); }
    void trim();

    Rational eval(const Rational& x) const;
    ComplexInterval eval(const ComplexInterval& x) const;
    QPoly derivative() const;
    QPoly monic() const;

    friend QPoly operator+(const QPoly& a, const QPoly& b);
    friend QPoly operator-(const QPoly& a, const QPoly& b);
    friend QPoly operator*(const QPoly& a, const QPoly& b);
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }
    static void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
    static QPoly gcd(QPoly a, QPoly b);
};

/// Exact complex rational, used for Newton polishing of approximate roots.
struct ComplexRational {
    Rational re, im;
    ComplexRational() = default;
    ComplexRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    Rational norm_sq() const { return re * re + im * im; }
    ComplexRational round(long bits) const;
    Complex to_complex() const { return {re.get_d(), im.get_d()}; }
    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b);
};

/// Approximate roots of a polynomial with complex coefficients (constant
/// first) by Durand-Kerner iteration.
std::vector<ComplexLD> approximate_roots(const std::vector<ComplexLD>& coeffs);

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

/// K = Q[theta]/(p) with a designated complex embedding theta -> root of p.
///
/// The designated root is isolated by a disc certified to contain exactly one
/// root of p (all d roots get pairwise disjoint discs of radius d|p/p'|).
/// Values are immutable after construction.
class NumberField {
  public:
    /// p must be monic of degree 1..4; irreducibility is checked.
    static FieldPtr create(const QPoly& min_poly, Complex root_hint);
    /// The field Q, presented as Q[theta]/(theta).
    static FieldPtr rationals();
    /// Q(i) with theta -> +i.
    static FieldPtr gaussian();

    int degree() const { return min_poly_.degree(); }
    const QPoly& min_poly() const { return min_poly_; }
    bool is_real() const { return is_real_; }
    bool is_rational() const { return degree() == 1; }
    /// Position of the designated root in the canonical root ordering.
    int root_index() const { return root_index_; }
    const ComplexRational& root_center() const { return centers_[root_index_]; }
    Complex root_approx() const { return centers_[root_index_].to_complex(); }
    /// Approximations of all d roots: embedding k sends theta to root k.
    std::vector<Complex> embeddings() const;
    /// Isolating box of the designated root (never changes).
    ComplexInterval isolating_box() const;
    /// Box of width <= 2^-bits around the designated root, contained in every
    /// box returned for fewer bits.
    ComplexInterval root_box(long bits) const;

    /// Power-basis coordinates of sigma(theta) for every automorphism sigma
    /// (identity first).
    const std::vector<std::vector<Rational>>& automorphisms() const { return automorphisms_; }
    bool is_galois() const { return static_cast<int>(automorphisms_.size()) == degree(); }
    /// Index into automorphisms() of complex conjugation, if K is closed under it.
    std::optional<int> conjugation() const { return conjugation_; }
    /// Power-basis coordinates of a square root of -1 in K, if any.
    const std::optional<std::vector<Rational>>& imaginary_unit() const { return imaginary_unit_; }

    bool same_as(const NumberField& other) const {
        return this == &other || (min_poly_ == other.min_poly_ && root_index_ == other.root_index_);
    }
    std::string describe() const;

  private:
    NumberField() = default;

    QPoly min_poly_;
    std::vector<ComplexRational> centers_;
    std::vector<Rational> radii_; // certified upper bounds, disjoint discs
    int root_index_ = 0;
    bool is_real_ = false;
    std::vector<std::vector<Rational>> automorphisms_;
    std::optional<int> conjugation_;
    std::optional<std::vector<Rational>> imaginary_unit_;
};

bool same_field(const FieldPtr& a, const FieldPtr& b);

/// Element of a number field in power-basis coordinates. Elements of Q (any
/// degree-1 field) promote silently into any other field; mixing two
/// different non-trivial fields is an error.
class NFElem {
  public:
    NFElem();
    NFElem(long v);
    NFElem(const Rational& v);
    NFElem(FieldPtr field, std::vector<Rational> coeffs);
    static NFElem generator(const FieldPtr& field);

    const FieldPtr& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_one() const;
    /// True if the element lies in Q (only the constant coordinate is nonzero).
    bool is_rational() const;
    Rational rational_value() const; // requires is_rational()

    NFElem operator-() const;
    NFElem& operator+=(const NFElem& o);
    NFElem& operator-=(const NFElem& o);
    NFElem& operator*=(const NFElem& o);
    NFElem& operator/=(const NFElem& o);
    friend NFElem operator+(NFElem a, const NFElem& b) { return a += b; }
    friend NFElem operator-(NFElem a, const NFElem& b) { return a -= b; }
    friend NFElem operator*(NFElem a, const NFElem& b) { return a *= b; }
    friend NFElem operator/(NFElem a, const NFElem& b) { return a /= b; }
    friend bool operator==(const NFElem& a, const NFElem& b);
    friend bool operator!=(const NFElem& a, const NFElem& b) { return !(a == b); }
    /// Total order on coordinates (for use as map keys; not a field order).
    friend bool coeff_less(const NFElem& a, const NFElem& b);

    NFElem inverse() const;
    NFElem pow(unsigned long e) const;
    /// Same value viewed in field `target` (promotion from Q only).
    NFElem lift_to(const FieldPtr& target) const;
    NFElem apply_automorphism(int index) const;
    /// Complex conjugate under the designated embedding.
    NFElem conj() const;

    /// Certified box of width <= 2^(1-precision) around the embedded value.
    ComplexInterval embed(long precision) const;
    Complex approx() const;
    /// Value under embedding `k` (see NumberField::embeddings()).
    ComplexLD approx_embedding(int k) const;

    std::string str() const;

  private:
    FieldPtr field_;
    std::vector<Rational> c_;
};

/// Field containing both operands (the non-rational one), or FieldMismatch.
FieldPtr common_field(const FieldPtr& a, const FieldPtr& b);

/// Splits v = sum_j v_j theta^j componentwise and returns v_0..v_{d-1}.
std::vector<std::vector<Rational>> rational_coefficient_vectors(const std::vector<NFElem>& v);

/// Real and imaginary parts as elements of the same field. Requires K real, or
/// K closed under conjugation and containing i.
std::pair<NFElem, NFElem> real_imag_parts(const NFElem& a);

/// Roots (with multiplicity) lying in K of a polynomial with K coefficients
/// (constant first). Roots outside K are not returned.
std::vector<std::pair<NFElem, int>> roots_in_field(const std::vector<NFElem>& poly, const FieldPtr& field);

/// Irreducible factors over Q (each of degree <= 4) of a rational polynomial
/// with no rational roots. Returns nullopt if some factor has degree > 4.
std::optional<std::vector<QPoly>> small_irreducible_factors(const QPoly& p);

} // namespace torflat
