#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace torflat {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p", or a finite decimal such as "-1.25" exactly.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" form (always with a denominator, e.g. "3/1").
std::string format_rational(const Rational& q);

Rational rational_floor(const Rational& q);
Integer floor_int(const Rational& q);
Integer ceil_int(const Rational& q);

/// Best dyadic approximation with `bits` fractional bits, rounded down or up.
Rational round_down(const Rational& q, long bits);
Rational round_up(const Rational& q, long bits);

/// Rational upper/lower bound for sqrt(q), q >= 0, within 2^-bits.
Rational sqrt_upper(const Rational& q, long bits);
Rational sqrt_lower(const Rational& q, long bits);

/// Continued-fraction reconstruction: the simplest rational within `tol` of x.
Rational rational_reconstruct(const Rational& x, const Rational& tol);

Rational rational_from_double(double x);

/// num/den in canonical form.
inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Single seeded generator shared by every randomized step of a run.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0x7f4a7c15u) : engine_(seed) {}

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }
    double uniform_real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    /// Random rational p/q with |p| <= num_bound and 1 <= q <= den_bound.
    Rational uniform_rational(std::int64_t num_bound, std::int64_t den_bound) {
        Rational r(Integer(static_cast<long>(uniform_int(-num_bound, num_bound))),
                   Integer(static_cast<long>(uniform_int(1, den_bound))));
        r.canonicalize();
        return r;
    }
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

} // namespace torflat
