#pragma once

#include "torflat/rational.hpp"

#include <algorithm>
#include <string>

namespace torflat {

/// Closed real interval with exact rational endpoints. Arithmetic is exact, so
/// enclosures are certified without rounding-mode tricks; `round_out` keeps
/// endpoint sizes bounded.
struct Interval {
    Rational lo, hi;

    Interval() = default;
    Interval(const Rational& point) : lo(point), hi(point) {}
    Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool is_point() const { return lo == hi; }
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
    /// Largest absolute value over the interval.
    Rational mag() const { return std::max(abs(lo), abs(hi)); }
    /// Smallest absolute value over the interval.
    Rational mig() const {
        if (contains_zero())
            return 0;
        return std::min(abs(lo), abs(hi));
    }

    Interval round_out(long bits) const { return {round_down(lo, bits), round_up(hi, bits)}; }

    friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
    friend Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
    }
    /// Requires 0 not in b.
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval sqr() const {
        if (contains_zero())
            return {0, std::max(lo * lo, hi * hi)};
        Rational a = lo * lo, b = hi * hi;
        return {std::min(a, b), std::max(a, b)};
    }

    static Interval hull(const Interval& a, const Interval& b) {
        return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    }
    /// Intersection; caller guarantees overlap.
    static Interval meet(const Interval& a, const Interval& b) {
        return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    }

    double lower_double() const;
    double upper_double() const;
    std::string str() const;
};

/// Rectangular complex interval (box).
struct ComplexInterval {
    Interval re, im;

    ComplexInterval() = default;
    ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
    explicit ComplexInterval(const Rational& r) : re(r), im(Rational(0)) {}

    Rational width() const { return std::max(re.width(), im.width()); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool is_real() const { return im.is_point() && im.lo == 0; }
    ComplexInterval round_out(long bits) const { return {re.round_out(bits), im.round_out(bits)}; }
    /// Enclosure of |z|^2.
    Interval norm_sq() const { return re.sqr() + im.sqr(); }

    friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    /// Requires 0 not in b.
    friend ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b);

    static ComplexInterval hull(const ComplexInterval& a, const ComplexInterval& b) {
        return {Interval::hull(a.re, b.re), Interval::hull(a.im, b.im)};
    }
    static bool overlaps(const ComplexInterval& a, const ComplexInterval& b) {
        return a.re.lo <= b.re.hi && b.re.lo <= a.re.hi && a.im.lo <= b.im.hi && b.im.lo <= a.im.hi;
    }
    static ComplexInterval meet(const ComplexInterval& a, const ComplexInterval& b) {
        return {Interval::meet(a.re, b.re), Interval::meet(a.im, b.im)};
    }
    bool subset_of(const ComplexInterval& o) const {
        return o.re.lo <= re.lo && re.hi <= o.re.hi && o.im.lo <= im.lo && im.hi <= o.im.hi;
    }
    std::string str() const;
};

} // namespace torflat
