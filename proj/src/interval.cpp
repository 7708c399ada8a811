#include "torflat/interval.hpp"

#include "torflat/errors.hpp"

#include <cmath>
#include <sstream>

namespace torflat {

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero())
        fail(ErrorCode::DivisionByZero, "interval division by an interval containing 0");
    Interval inv{1 / b.hi, 1 / b.lo};
    return a * inv;
}

ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
    Interval den = b.norm_sq();
    if (den.contains_zero())
        fail(ErrorCode::DivisionByZero, "complex interval division by a box containing 0");
    ComplexInterval conj{b.re, -b.im};
    ComplexInterval num = a * conj;
    return {num.re / den, num.im / den};
}

double Interval::lower_double() const {
    double d = lo.get_d();
    if (Rational(d) > lo)
        d = std::nextafter(d, -INFINITY);
    return d;
}

double Interval::upper_double() const {
    double d = hi.get_d();
    if (Rational(d) < hi)
        d = std::nextafter(d, INFINITY);
    return d;
}

std::string Interval::str() const {
    std::ostringstream os;
    os.precision(17);
    os << "[" << lo.get_d() << ", " << hi.get_d() << "]";
    return os.str();
}

std::string ComplexInterval::str() const { return re.str() + " + i" + im.str(); }

} // namespace torflat
