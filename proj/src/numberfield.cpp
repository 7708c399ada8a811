#include "torflat/numberfield.hpp"

#include "torflat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace torflat {

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

void QPoly::trim() {
    while (!c.empty() && c.back() == 0)
        c.pop_back();
}

Rational QPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

ComplexInterval QPoly::eval(const ComplexInterval& x) const {
    ComplexInterval acc{Interval(Rational(0)), Interval(Rational(0))};
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + ComplexInterval(*it);
    return acc;
}

QPoly QPoly::derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c.size(); ++i)
        d.push_back(c[i] * static_cast<long>(i));
    return QPoly(std::move(d));
}

QPoly QPoly::monic() const {
    if (is_zero())
        return *this;
    QPoly r = *this;
    Rational l = lead();
    for (auto& x : r.c)
        x /= l;
    return r;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return QPoly(std::move(r));
}

QPoly operator-(const QPoly& a, const QPoly& b) {
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
    return QPoly(std::move(r));
}

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<Rational> r(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r[i + j] += a.c[i] * b.c[j];
    return QPoly(std::move(r));
}

void QPoly::divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    if (b.is_zero())
        fail(ErrorCode::DivisionByZero, "polynomial division by zero");
    r = a;
    std::vector<Rational> qc(std::max(0, a.degree() - b.degree() + 1));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int shift = r.degree() - b.degree();
        Rational f = r.lead() / b.lead();
        qc[shift] = f;
        for (int i = 0; i <= b.degree(); ++i)
            r.c[i + shift] -= f * b.c[i];
        r.trim();
    }
    q = QPoly(std::move(qc));
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// ---------------------------------------------------------------- complex helpers

ComplexRational ComplexRational::round(long bits) const {
    Rational r = re, i = im;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    Rational rr(floor_int(r * scale + Rational(1, 2)), scale);
    Rational ii(floor_int(i * scale + Rational(1, 2)), scale);
    rr.canonicalize();
    ii.canonicalize();
    return {rr, ii};
}

ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    Rational den = b.norm_sq();
    if (den == 0)
        fail(ErrorCode::DivisionByZero, "complex division by zero");
    ComplexRational num = a * ComplexRational(b.re, -b.im);
    return {num.re / den, num.im / den};
}

namespace {

ComplexRational eval_exact(const QPoly& p, const ComplexRational& z) {
    ComplexRational acc(0, 0);
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it)
        acc = acc * z + ComplexRational(*it, 0);
    return acc;
}

ComplexLD eval_ld(const std::vector<ComplexLD>& c, ComplexLD z) {
    ComplexLD acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

ComplexRational from_ld(ComplexLD z) {
    Rational re, im;
    mpq_set_d(re.get_mpq_t(), static_cast<double>(z.real()));
    mpq_set_d(im.get_mpq_t(), static_cast<double>(z.imag()));
    // Recover the bits of long double beyond double.
    long double rr = z.real() - static_cast<long double>(static_cast<double>(z.real()));
    long double ri = z.imag() - static_cast<long double>(static_cast<double>(z.imag()));
    Rational cr, ci;
    mpq_set_d(cr.get_mpq_t(), static_cast<double>(rr));
    mpq_set_d(ci.get_mpq_t(), static_cast<double>(ri));
    return {re + cr, im + ci};
}

/// Newton steps in exact complex rationals with dyadic rounding.
ComplexRational newton_polish(const QPoly& p, ComplexRational z, long bits, int max_steps = 80) {
    QPoly dp = p.derivative();
    Rational tiny;
    {
        Integer s;
        mpz_ui_pow_ui(s.get_mpz_t(), 2, static_cast<unsigned long>(2 * bits));
        tiny = Rational(1) / Rational(s);
    }
    for (int i = 0; i < max_steps; ++i) {
        ComplexRational f = eval_exact(p, z);
        ComplexRational df = eval_exact(dp, z);
        if (df.norm_sq() == 0)
            break;
        ComplexRational step = f / df;
        z = (z - step).round(bits + 8);
        if (step.norm_sq() < tiny)
            break;
    }
    return z;
}

/// Upper bound on the radius d|p(z)/p'(z)| of a disc around z containing a root.
std::optional<Rational> root_radius_upper(const QPoly& p, const ComplexRational& z, long bits) {
    ComplexRational f = eval_exact(p, z);
    ComplexRational df = eval_exact(p.derivative(), z);
    Rational den = df.norm_sq();
    if (den == 0)
        return std::nullopt;
    Rational d = p.degree();
    Rational r2 = d * d * f.norm_sq() / den;
    return sqrt_upper(r2, bits);
}

bool discs_disjoint(const ComplexRational& a, const Rational& ra, const ComplexRational& b, const Rational& rb) {
    ComplexRational diff = a - b;
    Rational s = ra + rb;
    return diff.norm_sq() > s * s;
}

/// |a - b| + r <= R, tested with exact squared comparisons.
bool disc_inside(const ComplexRational& a, const Rational& r, const ComplexRational& b, const Rational& R) {
    if (r > R)
        return false;
    Rational gap = R - r;
    return (a - b).norm_sq() <= gap * gap;
}

ComplexInterval disc_box(const ComplexRational& c, const Rational& r) {
    return {Interval(c.re - r, c.re + r), Interval(c.im - r, c.im + r)};
}

std::vector<ComplexLD> to_ld(const QPoly& p) {
    std::vector<ComplexLD> r;
    for (const auto& x : p.c)
        r.emplace_back(static_cast<long double>(x.get_d()));
    return r;
}

} // namespace

std::vector<ComplexLD> approximate_roots(const std::vector<ComplexLD>& coeffs_in) {
    std::vector<ComplexLD> c = coeffs_in;
    while (!c.empty() && std::abs(c.back()) == 0.0L)
        c.pop_back();
    int n = static_cast<int>(c.size()) - 1;
    if (n <= 0)
        return {};
    ComplexLD lead = c.back();
    for (auto& x : c)
        x /= lead;
    if (n == 1)
        return {-c[0]};
    long double bound = 1;
    for (int i = 0; i < n; ++i)
        bound = std::max(bound, 1 + std::abs(c[i]));
    std::vector<ComplexLD> z(n);
    ComplexLD seed(0.4L, 0.9L);
    for (int i = 0; i < n; ++i)
        z[i] = std::pow(seed, i) * (bound * 0.5L);
    for (int iter = 0; iter < 2000; ++iter) {
        long double change = 0;
        for (int i = 0; i < n; ++i) {
            ComplexLD den = 1;
            for (int j = 0; j < n; ++j)
                if (j != i)
                    den *= (z[i] - z[j]);
            if (std::abs(den) == 0.0L)
                den = 1e-30L;
            ComplexLD step = eval_ld(c, z[i]) / den;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-19L)
            break;
    }
    // A few plain Newton steps sharpen simple roots.
    std::vector<ComplexLD> dc;
    for (int i = 1; i <= n; ++i)
        dc.push_back(c[i] * static_cast<long double>(i));
    for (auto& r : z) {
        for (int k = 0; k < 4; ++k) {
            ComplexLD d = eval_ld(dc, r);
            if (std::abs(d) == 0.0L)
                break;
            r -= eval_ld(c, r) / d;
        }
    }
    return z;
}

// ---------------------------------------------------------------- factorization over Q

namespace {

std::vector<Integer> integer_candidates(long double x) {
    std::vector<Integer> out;
    if (!std::isfinite(static_cast<double>(x)) || std::fabs(static_cast<double>(x)) > 1e15)
        return out;
    long long f = static_cast<long long>(std::floor(x));
    for (long long k = f - 1; k <= f + 2; ++k)
        if (std::fabs(static_cast<double>(k - x)) < 0.75)
            out.emplace_back(static_cast<long>(k));
    return out;
}

/// Exact monic factor of q over Z from a subset of approximate roots, if any.
std::optional<QPoly> factor_from_roots(const QPoly& q, const std::vector<ComplexLD>& roots) {
    std::vector<ComplexLD> prod{1.0L};
    for (const auto& r : roots) {
        std::vector<ComplexLD> next(prod.size() + 1, 0.0L);
        for (std::size_t i = 0; i < prod.size(); ++i) {
            next[i + 1] += prod[i];
            next[i] -= prod[i] * r;
        }
        prod = std::move(next);
    }
    // Coefficients of a monic integer factor are integers; try the nearest
    // candidates and keep the first exact divisor.
    std::vector<std::vector<Integer>> cands;
    for (std::size_t i = 0; i + 1 < prod.size(); ++i) {
        if (std::fabs(static_cast<double>(prod[i].imag())) > 0.25)
            return std::nullopt;
        auto c = integer_candidates(prod[i].real());
        if (c.empty())
            return std::nullopt;
        cands.push_back(std::move(c));
    }
    std::vector<std::size_t> idx(cands.size(), 0);
    while (true) {
        std::vector<Rational> coeffs;
        for (std::size_t i = 0; i < cands.size(); ++i)
            coeffs.emplace_back(cands[i][idx[i]]);
        coeffs.emplace_back(1);
        QPoly h(coeffs);
        QPoly quo, rem;
        QPoly::divmod(q, h, quo, rem);
        if (rem.is_zero())
            return h;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == cands[k].size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size())
            return std::nullopt;
    }
}

} // namespace

std::optional<std::vector<QPoly>> small_irreducible_factors(const QPoly& p_in) {
    if (p_in.degree() < 1)
        return std::vector<QPoly>{};
    QPoly p = p_in.monic();
    QPoly g = QPoly::gcd(p, p.derivative());
    if (g.degree() > 0) {
        QPoly q, r;
        QPoly::divmod(p, g, q, r);
        p = q.monic();
    }
    int n = p.degree();
    // q(y) = D^n p(y/D) is monic with integer coefficients.
    Integer D = 1;
    for (const auto& x : p.c)
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Rational> qc(n + 1);
    Rational Dp = 1;
    for (int i = n; i >= 0; --i) {
        qc[i] = p.c[i] * Dp;
        Dp *= Rational(D);
    }
    QPoly q(qc);
    std::vector<QPoly> factors;
    std::vector<ComplexLD> roots = approximate_roots(to_ld(q));
    while (q.degree() > 0) {
        int m = q.degree();
        if (m == 1) {
            factors.push_back(q);
            break;
        }
        bool found = false;
        for (int k = 1; k <= m / 2 && !found; ++k) {
            std::vector<int> sel(k);
            std::iota(sel.begin(), sel.end(), 0);
            while (true) {
                std::vector<ComplexLD> sub;
                for (int s : sel)
                    sub.push_back(roots[s]);
                if (auto h = factor_from_roots(q, sub)) {
                    factors.push_back(*h);
                    QPoly quo, rem;
                    QPoly::divmod(q, *h, quo, rem);
                    q = quo;
                    std::vector<ComplexLD> rest;
                    for (int i = 0; i < m; ++i)
                        if (std::find(sel.begin(), sel.end(), i) == sel.end())
                            rest.push_back(roots[i]);
                    roots = std::move(rest);
                    found = true;
                    break;
                }
                int pos = k - 1;
                while (pos >= 0 && sel[pos] == m - k + pos)
                    --pos;
                if (pos < 0)
                    break;
                ++sel[pos];
                for (int j = pos + 1; j < k; ++j)
                    sel[j] = sel[j - 1] + 1;
            }
        }
        if (!found) {
            factors.push_back(q);
            break;
        }
    }
    std::vector<QPoly> out;
    for (const auto& h : factors) {
        if (h.degree() > 4)
            return std::nullopt;
        // Undo the scaling: h(D x) / D^deg h.
        std::vector<Rational> c(h.c.size());
        Rational Dk = 1;
        for (std::size_t i = 0; i < h.c.size(); ++i) {
            c[i] = h.c[i] * Dk;
            Dk *= Rational(D);
        }
        out.push_back(QPoly(c).monic());
    }
    return out;
}

// ---------------------------------------------------------------- NumberField

bool same_field(const FieldPtr& a, const FieldPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return a->same_as(*b);
}

FieldPtr NumberField::rationals() {
    static const FieldPtr q = NumberField::create(QPoly({Rational(0), Rational(1)}), Complex(0, 0));
    return q;
}

FieldPtr NumberField::gaussian() {
    static const FieldPtr gi = NumberField::create(QPoly({Rational(1), Rational(0), Rational(1)}), Complex(0, 1));
    return gi;
}

FieldPtr NumberField::create(const QPoly& min_poly, Complex root_hint) {
    if (min_poly.degree() < 1 || min_poly.degree() > 4)
        fail(ErrorCode::UnsupportedDegree, "minimal polynomial degree must be between 1 and 4");
    if (min_poly.lead() != 1)
        fail(ErrorCode::PreconditionFailed, "minimal polynomial must be monic");
    std::shared_ptr<NumberField> k(new NumberField());
    k->min_poly_ = min_poly;
    const int d = min_poly.degree();
    if (d == 1) {
        k->centers_ = {ComplexRational(-min_poly.c[0], 0)};
        k->radii_ = {Rational(0)};
        k->root_index_ = 0;
        k->is_real_ = true;
        k->automorphisms_ = {{-min_poly.c[0]}};
        k->conjugation_ = 0;
        return k;
    }
    auto factors = small_irreducible_factors(min_poly);
    if (!factors || factors->size() != 1 || (*factors)[0].degree() != d)
        fail(ErrorCode::ReducibleMinimalPolynomial, "minimal polynomial is not irreducible over Q");

    std::vector<ComplexLD> approx = approximate_roots(to_ld(min_poly));
    std::sort(approx.begin(), approx.end(), [](const ComplexLD& a, const ComplexLD& b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    bool certified = false;
    for (long bits = 64; bits <= 1024 && !certified; bits *= 2) {
        std::vector<ComplexRational> centers;
        std::vector<Rational> radii;
        bool ok = true;
        for (const auto& a : approx) {
            ComplexRational z = newton_polish(min_poly, from_ld(a), bits);
            auto r = root_radius_upper(min_poly, z, bits + 16);
            if (!r) {
                ok = false;
                break;
            }
            centers.push_back(z);
            radii.push_back(*r);
        }
        for (int i = 0; ok && i < d; ++i)
            for (int j = i + 1; ok && j < d; ++j)
                ok = discs_disjoint(centers[i], radii[i], centers[j], radii[j]);
        if (!ok)
            continue;
        // Real roots: recenter on the real axis and re-certify.
        for (int i = 0; i < d; ++i) {
            ComplexRational xr = newton_polish(min_poly, ComplexRational(centers[i].re, 0), bits);
            auto r = root_radius_upper(min_poly, xr, bits + 16);
            if (!r)
                continue;
            bool iso = true;
            for (int j = 0; j < d && iso; ++j)
                if (j != i)
                    iso = discs_disjoint(xr, *r, centers[j], radii[j]);
            if (iso && xr.im == 0) {
                centers[i] = xr;
                radii[i] = *r;
            }
        }
        k->centers_ = std::move(centers);
        k->radii_ = std::move(radii);
        certified = true;
    }
    if (!certified)
        fail(ErrorCode::ReducibleMinimalPolynomial, "could not isolate the roots of the minimal polynomial");

    double best = INFINITY;
    for (int i = 0; i < d; ++i) {
        double dist = std::abs(k->centers_[i].to_complex() - root_hint);
        if (dist < best) {
            best = dist;
            k->root_index_ = i;
        }
    }
    if (!std::isfinite(best))
        fail(ErrorCode::BadRootHint, "root hint is not finite");
    const auto& c = k->centers_[k->root_index_];
    k->is_real_ = c.im == 0;

    // Automorphisms are the roots of p lying in K.
    std::vector<NFElem> pk;
    for (const auto& x : min_poly.c)
        pk.emplace_back(x);
    auto roots = roots_in_field(pk, k);
    NFElem theta = NFElem::generator(k);
    k->automorphisms_.push_back(theta.coeffs());
    for (const auto& [r, mult] : roots)
        if (r != theta)
            k->automorphisms_.push_back(r.coeffs());
    if (k->is_real_) {
        k->conjugation_ = 0;
    } else {
        Complex target = std::conj(k->root_approx());
        for (std::size_t i = 0; i < k->automorphisms_.size(); ++i) {
            NFElem img(k, k->automorphisms_[i]);
            if (std::abs(img.approx() - target) < 1e-6 * (1 + std::abs(target))) {
                k->conjugation_ = static_cast<int>(i);
                break;
            }
        }
    }
    std::vector<NFElem> x2p1{NFElem(1), NFElem(0), NFElem(1)};
    for (const auto& [r, mult] : roots_in_field(x2p1, k))
        if (r.approx().imag() > 0)
            k->imaginary_unit_ = r.coeffs();
    return k;
}

std::vector<Complex> NumberField::embeddings() const {
    std::vector<Complex> out;
    for (const auto& c : centers_)
        out.push_back(c.to_complex());
    return out;
}

ComplexInterval NumberField::isolating_box() const {
    return disc_box(centers_[root_index_], radii_[root_index_]);
}

ComplexInterval NumberField::root_box(long bits) const {
    const auto& c0 = centers_[root_index_];
    const auto& R = radii_[root_index_];
    ComplexInterval box = disc_box(c0, R);
    if (R == 0)
        return box;
    Rational target;
    {
        Integer s;
        mpz_ui_pow_ui(s.get_mpz_t(), 2, static_cast<unsigned long>(std::max(1L, bits)));
        target = Rational(1) / Rational(s);
    }
    ComplexRational z = c0;
    for (long b = 32;; b *= 2) {
        z = newton_polish(min_poly_, z, b + 16);
        if (is_real_)
            z.im = 0;
        if (auto r = root_radius_upper(min_poly_, z, b + 24); r && disc_inside(z, *r, c0, R)) {
            ComplexInterval next = disc_box(z, *r).round_out(b + 24);
            if (is_real_)
                next.im = Interval(Rational(0));
            box = ComplexInterval::meet(box, next);
        }
        if ((b >= bits && box.width() <= target) || b > 8 * bits + 4096)
            break;
    }
    return box;
}

std::string NumberField::describe() const {
    std::ostringstream os;
    os << "Q[t]/(";
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& a = min_poly_.c[i];
        if (a == 0)
            continue;
        if (!first)
            os << (a > 0 ? " + " : " - ");
        else if (a < 0)
            os << "-";
        Rational m = abs(a);
        if (m != 1 || i == 0)
            os << m.get_str();
        if (i > 0)
            os << "t" << (i > 1 ? "^" + std::to_string(i) : "");
        first = false;
    }
    Complex r = root_approx();
    os << "), t ~ " << r.real() << (r.imag() >= 0 ? "+" : "") << r.imag() << "i";
    return os.str();
}

// ---------------------------------------------------------------- NFElem

FieldPtr common_field(const FieldPtr& a, const FieldPtr& b) {
    if (same_field(a, b))
        return a;
    if (a->is_rational())
        return b;
    if (b->is_rational())
        return a;
    fail(ErrorCode::FieldMismatch, "elements of different number fields: " + a->describe() + " vs " + b->describe());
}

NFElem::NFElem() : field_(NumberField::rationals()), c_{Rational(0)} {}
NFElem::NFElem(long v) : field_(NumberField::rationals()), c_{Rational(v)} {}
NFElem::NFElem(const Rational& v) : field_(NumberField::rationals()), c_{v} {}

NFElem::NFElem(FieldPtr field, std::vector<Rational> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    const auto d = static_cast<std::size_t>(field_->degree());
    if (c_.size() > d) {
        // Reduce modulo the minimal polynomial.
        QPoly q, r;
        QPoly::divmod(QPoly(c_), field_->min_poly(), q, r);
        c_ = r.c;
    }
    c_.resize(d);
}

NFElem NFElem::generator(const FieldPtr& field) {
    if (field->degree() == 1)
        return NFElem(field, {-field->min_poly().c[0]});
    std::vector<Rational> c(field->degree());
    c[1] = 1;
    return NFElem(field, c);
}

bool NFElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x == 0; });
}

bool NFElem::is_one() const { return is_rational() && c_[0] == 1; }

bool NFElem::is_rational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& x) { return x == 0; });
}

Rational NFElem::rational_value() const {
    if (!is_rational())
        fail(ErrorCode::PreconditionFailed, "element is not rational");
    return c_[0];
}

NFElem NFElem::lift_to(const FieldPtr& target) const {
    if (same_field(field_, target))
        return *this;
    if (!is_rational())
        fail(ErrorCode::FieldMismatch, "cannot move a non-rational element into another field");
    std::vector<Rational> c(target->degree());
    c[0] = c_[0];
    return NFElem(target, std::move(c));
}

NFElem NFElem::operator-() const {
    NFElem r = *this;
    for (auto& x : r.c_)
        x = -x;
    return r;
}

NFElem& NFElem::operator+=(const NFElem& o) {
    FieldPtr f = common_field(field_, o.field_);
    NFElem a = lift_to(f), b = o.lift_to(f);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        a.c_[i] += b.c_[i];
    *this = std::move(a);
    return *this;
}

NFElem& NFElem::operator-=(const NFElem& o) { return *this += -o; }

NFElem& NFElem::operator*=(const NFElem& o) {
    FieldPtr f = common_field(field_, o.field_);
    if (f->degree() == 1) {
        NFElem a = lift_to(f);
        a.c_[0] *= o.c_[0];
        *this = std::move(a);
        return *this;
    }
    if (o.is_rational()) {
        NFElem a = lift_to(f);
        for (auto& x : a.c_)
            x *= o.c_[0];
        *this = std::move(a);
        return *this;
    }
    if (is_rational()) {
        NFElem b = o.lift_to(f);
        Rational s = c_[0];
        for (auto& x : b.c_)
            x *= s;
        *this = std::move(b);
        return *this;
    }
    QPoly prod = QPoly(c_) * QPoly(o.c_);
    *this = NFElem(f, prod.c);
    return *this;
}

NFElem NFElem::inverse() const {
    if (is_zero())
        fail(ErrorCode::DivisionByZero, "division by zero in number field");
    if (is_rational())
        return NFElem(field_, {1 / c_[0]}).lift_to(field_);
    // Extended Euclid: s*a + t*p = 1.
    QPoly a(c_), p = field_->min_poly();
    QPoly r0 = p, r1 = a, s0, s1({Rational(1)});
    while (!r1.is_zero()) {
        QPoly q, r;
        QPoly::divmod(r0, r1, q, r);
        QPoly s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    // r0 is a nonzero constant since p is irreducible.
    Rational g = r0.c[0];
    std::vector<Rational> c = s0.c;
    for (auto& x : c)
        x /= g;
    return NFElem(field_, c);
}

NFElem& NFElem::operator/=(const NFElem& o) { return *this *= o.inverse(); }

NFElem NFElem::pow(unsigned long e) const {
    NFElem result = NFElem(1).lift_to(field_), base = *this;
    while (e) {
        if (e & 1)
            result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

bool operator==(const NFElem& a, const NFElem& b) {
    if (same_field(a.field_, b.field_))
        return a.c_ == b.c_;
    if (a.field_->is_rational() || b.field_->is_rational())
        return a.is_rational() && b.is_rational() && a.c_[0] == b.c_[0];
    fail(ErrorCode::FieldMismatch, "comparing elements of different number fields");
}

bool coeff_less(const NFElem& a, const NFElem& b) {
    std::size_t n = std::max(a.c_.size(), b.c_.size());
    for (std::size_t i = 0; i < n; ++i) {
        Rational x = i < a.c_.size() ? a.c_[i] : Rational(0);
        Rational y = i < b.c_.size() ? b.c_[i] : Rational(0);
        if (x != y)
            return x < y;
    }
    return false;
}

NFElem NFElem::apply_automorphism(int index) const {
    const auto& autos = field_->automorphisms();
    if (index < 0 || index >= static_cast<int>(autos.size()))
        fail(ErrorCode::PreconditionFailed, "automorphism index out of range");
    if (is_rational())
        return *this;
    NFElem img(field_, autos[index]);
    NFElem acc = NFElem(0).lift_to(field_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * img + NFElem(*it);
    return acc;
}

NFElem NFElem::conj() const {
    if (field_->is_real() || is_rational())
        return *this;
    auto idx = field_->conjugation();
    if (!idx)
        fail(ErrorCode::NotConjugationClosed, "field is not closed under complex conjugation: " + field_->describe());
    return apply_automorphism(*idx);
}

ComplexInterval NFElem::embed(long precision) const {
    if (precision < 1)
        precision = 1;
    if (is_rational())
        return ComplexInterval(c_[0]);
    Rational target;
    {
        Integer s;
        mpz_ui_pow_ui(s.get_mpz_t(), 2, static_cast<unsigned long>(precision - 1));
        target = Rational(1) / Rational(s);
    }
    QPoly p(c_);
    long bits = precision + 8;
    for (int iter = 0; iter < 16; ++iter) {
        ComplexInterval val = p.eval(field_->root_box(bits));
        if (val.width() <= target)
            return val;
        bits += std::max(16L, bits / 2);
    }
    throw InvariantError("embedding refinement did not converge");
}

Complex NFElem::approx() const {
    auto v = approx_embedding(field_->root_index());
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

ComplexLD NFElem::approx_embedding(int k) const {
    auto emb = field_->embeddings();
    ComplexLD t(emb[k].real(), emb[k].imag());
    ComplexLD acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * t + ComplexLD(static_cast<long double>(it->get_d()));
    return acc;
}

std::string NFElem::str() const {
    if (is_rational())
        return c_[0].get_str();
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        if (!first)
            os << " + ";
        os << c_[i].get_str();
        if (i > 0)
            os << "*t" << (i > 1 ? "^" + std::to_string(i) : "");
        first = false;
    }
    return first ? "0" : os.str();
}

// ---------------------------------------------------------------- free functions

std::vector<std::vector<Rational>> rational_coefficient_vectors(const std::vector<NFElem>& v) {
    if (v.empty())
        return {};
    FieldPtr f = v[0].field();
    for (const auto& x : v)
        f = common_field(f, x.field());
    const int d = f->degree();
    std::vector<std::vector<Rational>> out(d, std::vector<Rational>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        NFElem x = v[i].lift_to(f);
        for (int j = 0; j < d; ++j)
            out[j][i] = x.coeffs()[j];
    }
    return out;
}

std::pair<NFElem, NFElem> real_imag_parts(const NFElem& a) {
    const auto& f = a.field();
    if (f->is_real() || a.is_rational())
        return {a, NFElem(0).lift_to(f)};
    NFElem c = a.conj();
    const auto& iu = f->imaginary_unit();
    if (!iu)
        fail(ErrorCode::NotConjugationClosed, "field lacks i; cannot take imaginary parts: " + f->describe());
    NFElem i(f, *iu);
    NFElem re = (a + c) * NFElem(Rational(1, 2));
    NFElem im = (a - c) * (-i) * NFElem(Rational(1, 2));
    return {re, im};
}

namespace {

using KPoly = std::vector<NFElem>;

void ktrim(KPoly& p) {
    while (!p.empty() && p.back().is_zero())
        p.pop_back();
}

void kdivmod(const KPoly& a, const KPoly& b, KPoly& q, KPoly& r) {
    r = a;
    ktrim(r);
    KPoly bb = b;
    ktrim(bb);
    if (bb.empty())
        fail(ErrorCode::DivisionByZero, "polynomial division by zero");
    int db = static_cast<int>(bb.size()) - 1;
    q.assign(std::max<int>(0, static_cast<int>(r.size()) - db), NFElem(0));
    NFElem inv = bb.back().inverse();
    while (!r.empty() && static_cast<int>(r.size()) - 1 >= db) {
        int shift = static_cast<int>(r.size()) - 1 - db;
        NFElem f = r.back() * inv;
        q[shift] = f;
        for (int i = 0; i <= db; ++i)
            r[i + shift] -= f * bb[i];
        r.back() = NFElem(0).lift_to(r.back().field());
        ktrim(r);
    }
}

KPoly kgcd(KPoly a, KPoly b) {
    ktrim(a);
    ktrim(b);
    while (!b.empty()) {
        KPoly q, r;
        kdivmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        NFElem inv = a.back().inverse();
        for (auto& x : a)
            x *= inv;
    }
    return a;
}

KPoly kderiv(const KPoly& a) {
    KPoly d;
    for (std::size_t i = 1; i < a.size(); ++i)
        d.push_back(a[i] * NFElem(static_cast<long>(i)));
    ktrim(d);
    return d;
}

NFElem keval(const KPoly& p, const NFElem& x) {
    NFElem acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

/// Solves a small dense complex system by Gaussian elimination with pivoting.
std::optional<std::vector<ComplexLD>> solve_ld(std::vector<std::vector<ComplexLD>> a, std::vector<ComplexLD> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        if (std::abs(a[piv][col]) < 1e-30L)
            return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            ComplexLD f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k)
                a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        b[i] /= a[i][i];
    return b;
}

} // namespace

std::vector<std::pair<NFElem, int>> roots_in_field(const std::vector<NFElem>& poly_in, const FieldPtr& field) {
    KPoly g;
    for (const auto& c : poly_in)
        g.push_back(c.lift_to(field));
    ktrim(g);
    std::vector<std::pair<NFElem, int>> out;
    if (g.size() <= 1)
        return out;
    KPoly gp = kderiv(g);
    KPoly common = kgcd(g, gp);
    KPoly sqf = g;
    if (common.size() > 1) {
        KPoly q, r;
        kdivmod(g, common, q, r);
        sqf = q;
    }
    if (sqf.size() == 2) {
        NFElem r = -sqf[0] / sqf[1];
        int mult = 0;
        KPoly cur = g;
        while (true) {
            KPoly q, rem;
            kdivmod(cur, {-r, NFElem(1).lift_to(field)}, q, rem);
            if (!rem.empty())
                break;
            ++mult;
            cur = q;
        }
        out.emplace_back(r.lift_to(common_field(r.field(), field)), mult);
        return out;
    }
    const int d = field->degree();
    const int root_idx = field->root_index();
    auto emb = field->embeddings();
    // Conjugate polynomials under each embedding, and their approximate roots.
    std::vector<std::vector<ComplexLD>> roots(d);
    for (int m = 0; m < d; ++m) {
        std::vector<ComplexLD> c;
        for (const auto& x : sqf)
            c.push_back(x.approx_embedding(m));
        roots[m] = approximate_roots(c);
    }
    std::vector<NFElem> found;
    auto try_candidate = [&](const std::vector<Rational>& coeffs) {
        NFElem cand(field, coeffs);
        if (!keval(sqf, cand).is_zero())
            return;
        for (const auto& f : found)
            if (f == cand)
                return;
        found.push_back(cand);
    };
    auto reconstruct = [](long double x) -> std::optional<Rational> {
        if (!std::isfinite(static_cast<double>(x)))
            return std::nullopt;
        Rational xr;
        mpq_set_d(xr.get_mpq_t(), static_cast<double>(x));
        Rational tol;
        mpq_set_d(tol.get_mpq_t(), 1e-7 * (1.0 + std::fabs(static_cast<double>(x))));
        return rational_reconstruct(xr, tol);
    };
    if (d == 1) {
        for (const auto& r : roots[0]) {
            if (std::fabs(static_cast<double>(r.imag())) > 1e-6 * (1 + std::abs(r)))
                continue;
            if (auto q = reconstruct(r.real()))
                try_candidate({*q});
        }
    } else {
        // Vandermonde system: sum_j c_j emb_m^j = chosen root under embedding m.
        std::vector<std::vector<ComplexLD>> V(d, std::vector<ComplexLD>(d));
        for (int m = 0; m < d; ++m) {
            ComplexLD t(emb[m].real(), emb[m].imag()), pw = 1;
            for (int j = 0; j < d; ++j) {
                V[m][j] = pw;
                pw *= t;
            }
        }
        const std::size_t nr = roots[0].size();
        for (std::size_t r0 = 0; r0 < nr; ++r0) {
            std::vector<std::size_t> choice(d, 0);
            choice[root_idx] = r0;
            while (true) {
                std::vector<ComplexLD> rhs(d);
                for (int m = 0; m < d; ++m)
                    rhs[m] = roots[m][choice[m]];
                if (auto sol = solve_ld(V, rhs)) {
                    std::vector<Rational> coeffs;
                    bool ok = true;
                    for (const auto& c : *sol) {
                        if (std::fabs(static_cast<double>(c.imag())) > 1e-6 * (1 + std::abs(c))) {
                            ok = false;
                            break;
                        }
                        auto q = reconstruct(c.real());
                        if (!q) {
                            ok = false;
                            break;
                        }
                        coeffs.push_back(*q);
                    }
                    if (ok)
                        try_candidate(coeffs);
                }
                int m = 0;
                while (m < d) {
                    if (m == root_idx) {
                        ++m;
                        continue;
                    }
                    if (++choice[m] < roots[m].size())
                        break;
                    choice[m] = 0;
                    ++m;
                }
                if (m == d)
                    break;
            }
        }
    }
    for (const auto& r : found) {
        int mult = 0;
        KPoly cur = g;
        KPoly lin{-r, NFElem(1).lift_to(field)};
        while (true) {
            KPoly q, rem;
            kdivmod(cur, lin, q, rem);
            if (!rem.empty())
                break;
            ++mult;
            cur = q;
        }
        out.emplace_back(r, mult);
    }
    return out;
}

} // namespace torflat
