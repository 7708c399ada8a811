#include "torflat/errors.hpp"
#include "torflat/puiseux.hpp"

#include <algorithm>
#include <numeric>

namespace torflat {

namespace {

/// Polynomial in (s, y) with integer exponents; key is (s-exponent, y-exponent).
using BiPoly = std::map<std::pair<long, long>, NFElem>;

struct Found {
    std::map<Rational, NFElem> terms; // exponent in z -> coefficient
    std::optional<Rational> trunc;
    int mult = 1;
};

struct RootChoice {
    NFElem c;
    int mult;
};

struct SolveContext {
    Rational order;
    bool bounded_only = false; // keep only first-level roots of valuation >= 0
    std::vector<Found> found;
};

FieldPtr field_of(const BiPoly& q) {
    FieldPtr f = NumberField::rationals();
    for (const auto& [k, c] : q)
        f = common_field(f, c.field());
    return f;
}

Integer binomial(long n, long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

/// Roots of phi (constant first) with multiplicity, extending Q when needed.
std::vector<RootChoice> solve_characteristic(const KPoly& phi, const FieldPtr& field) {
    std::vector<RootChoice> out;
    int total = 0;
    for (auto& [r, m] : roots_in_field(phi, field)) {
        if (r.is_zero())
            continue;
        out.push_back({r, m});
        total += m;
    }
    const int deg = static_cast<int>(phi.size()) - 1;
    if (total == deg)
        return out;
    if (!field->is_rational())
        fail(ErrorCode::ExtensionTooLarge,
             "characteristic polynomial needs an extension of a non-rational coefficient field (" + field->describe() + ")");
    // Strip the rational roots and factor what is left over Q.
    KPoly rest = phi;
    for (const auto& rc : out)
        for (int k = 0; k < rc.mult; ++k) {
            KPoly q, r;
            kpoly_divmod(rest, {-rc.c, NFElem(1)}, q, r);
            rest = q;
        }
    std::vector<Rational> qc;
    for (const auto& c : rest)
        qc.push_back(c.rational_value());
    QPoly qrest(qc);
    auto factors = small_irreducible_factors(qrest);
    if (!factors)
        fail(ErrorCode::ExtensionTooLarge, "branch coefficients need a field extension of degree > 4");
    for (const auto& h : *factors) {
        if (h.degree() < 2)
            continue;
        int mult = 0;
        QPoly cur = qrest;
        while (true) {
            QPoly q, r;
            QPoly::divmod(cur, h, q, r);
            if (!r.is_zero())
                break;
            ++mult;
            cur = q;
        }
        std::vector<ComplexLD> hc;
        for (const auto& x : h.c)
            hc.emplace_back(static_cast<long double>(x.get_d()));
        for (const auto& z : approximate_roots(hc)) {
            FieldPtr ext = NumberField::create(h, Complex(static_cast<double>(z.real()), static_cast<double>(z.imag())));
            out.push_back({NFElem::generator(ext), mult});
        }
    }
    return out;
}

void solve(BiPoly q, long e, const Rational& g, const std::map<Rational, NFElem>& prefix, bool first, int depth,
           SolveContext& ctx) {
    if (depth > 400)
        throw InvariantError("Newton-Puiseux recursion did not separate the branches");
    if (q.empty())
        fail(ErrorCode::NotSquarefree, "curve polynomial vanishes identically along a branch");
    long bmin = q.begin()->first.second;
    for (const auto& [k, c] : q)
        bmin = std::min(bmin, k.second);
    if (bmin > 0) {
        ctx.found.push_back({prefix, std::nullopt, static_cast<int>(bmin)});
        BiPoly shifted;
        for (const auto& [k, c] : q)
            shifted.emplace(std::make_pair(k.first, k.second - bmin), c);
        q = std::move(shifted);
    }
    std::map<long, long> v; // y-exponent -> least s-exponent
    for (const auto& [k, c] : q) {
        auto it = v.find(k.second);
        if (it == v.end())
            v.emplace(k.second, k.first);
        else
            it->second = std::min(it->second, k.first);
    }
    // Lower convex hull of the Newton polygon.
    std::vector<std::pair<long, long>> hull;
    for (const auto& [b, a] : v) {
        while (hull.size() >= 2) {
            auto [b1, a1] = hull[hull.size() - 2];
            auto [b2, a2] = hull.back();
            // Drop the middle point if it lies on or above the chord.
            if ((a2 - a1) * (b - b1) >= (a - a1) * (b2 - b1))
                hull.pop_back();
            else
                break;
        }
        hull.emplace_back(b, a);
    }
    const FieldPtr field = field_of(q);
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        auto [b1, v1] = hull[h];
        auto [b2, v2] = hull[h + 1];
        Rational gamma(v1 - v2, b2 - b1);
        gamma.canonicalize();
        if (first && ctx.bounded_only && gamma < 0)
            continue;
        if (!first && gamma <= 0)
            continue;
        const Rational g_next = g + gamma / e;
        if (!first && g_next > ctx.order) {
            ctx.found.push_back({prefix, ctx.order, static_cast<int>(b2 - b1)});
            continue;
        }
        const long p = gamma.get_num().get_si(), qd = gamma.get_den().get_si();
        const long m = qd * v1 + p * b1;
        KPoly phi(b2 - b1 + 1, NFElem(0));
        for (const auto& [k, c] : q)
            if (qd * k.first + p * k.second == m)
                phi[k.second - b1] += c;
        for (const auto& rc : solve_characteristic(phi, field)) {
            std::vector<NFElem> cp{NFElem(1)};
            long bmax = v.rbegin()->first;
            for (long k = 1; k <= bmax; ++k)
                cp.push_back(cp.back() * rc.c);
            BiPoly next;
            for (const auto& [k, c] : q) {
                const long sexp = qd * k.first + p * k.second - m;
                check_invariant(sexp >= 0, "Newton polygon edge must bound all terms");
                for (long j = 0; j <= k.second; ++j) {
                    NFElem term = c * NFElem(Rational(binomial(k.second, j))) * cp[k.second - j];
                    if (term.is_zero())
                        continue;
                    auto key = std::make_pair(sexp, j);
                    auto it = next.find(key);
                    if (it == next.end())
                        next.emplace(key, term);
                    else
                        it->second += term;
                }
            }
            for (auto it = next.begin(); it != next.end();)
                it = it->second.is_zero() ? next.erase(it) : std::next(it);
            auto pre = prefix;
            pre[g_next] = rc.c;
            solve(std::move(next), e * qd, g_next, pre, false, depth + 1, ctx);
        }
    }
}

Series found_to_series(const Found& f) {
    long e = 1;
    for (const auto& [q, c] : f.terms)
        e = std::lcm(e, q.get_den().get_si());
    std::map<long, Poly> terms;
    for (const auto& [q, c] : f.terms) {
        Rational key = q * e;
        terms.emplace(key.get_num().get_si(), Poly::constant(0, c));
    }
    return Series::from_terms(nullptr, static_cast<int>(e), std::move(terms), f.trunc);
}

KPoly univariate(const Poly& p, int var) {
    KPoly out;
    for (const auto& c : p.coefficients_in(var))
        out.push_back(c.constant_term());
    kpoly_trim(out);
    return out;
}

std::vector<PuiseuxBranch> branches_at(const Poly& f, const Rational& internal_order) {
    std::vector<PuiseuxBranch> out;
    const int dx = f.degree(0), dy = f.degree(1);
    // Over x = infinity: z^dx f(1/z, y).
    {
        BiPoly q;
        for (const auto& [m, c] : f.terms())
            q.emplace(std::make_pair(static_cast<long>(dx - m[0]), static_cast<long>(m[1])), c);
        SolveContext ctx{internal_order, false, {}};
        if (dy > 0)
            solve(q, 1, Rational(0), {}, true, 0, ctx);
        for (const auto& fd : ctx.found) {
            Series x = Series::monomial(Rational(-1), NFElem(1));
            out.emplace_back(std::vector<Series>{x, found_to_series(fd)}, nullptr, fd.mult);
        }
    }
    // Over y = infinity with x bounded: z^dy f(x, 1/z).
    {
        BiPoly q;
        for (const auto& [m, c] : f.terms())
            q.emplace(std::make_pair(static_cast<long>(dy - m[1]), static_cast<long>(m[0])), c);
        SolveContext ctx{internal_order, true, {}};
        if (dx > 0)
            solve(q, 1, Rational(0), {}, true, 0, ctx);
        for (const auto& fd : ctx.found) {
            Series y = Series::monomial(Rational(-1), NFElem(1));
            out.emplace_back(std::vector<Series>{found_to_series(fd), y}, nullptr, fd.mult);
        }
    }
    return out;
}

} // namespace

bool is_squarefree_bivariate(const Poly& f, std::uint64_t seed) {
    if (f.nvars() != 2)
        fail(ErrorCode::DimensionMismatch, "expected a polynomial in two variables");
    Rng rng(seed);
    for (int var = 0; var < 2; ++var) {
        const int other = 1 - var;
        const int deg = f.degree(other);
        bool ok = false;
        for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
            NFElem x0(rng.uniform_rational(1000, 37));
            KPoly u = univariate(f.substitute(var, x0), other);
            if (static_cast<int>(u.size()) - 1 != deg)
                continue;
            ok = kpoly_squarefree(u);
        }
        if (!ok && deg > 0)
            return false;
    }
    return true;
}

std::vector<PuiseuxBranch> newton_puiseux_at_infinity(const Poly& f, const Rational& order, std::uint64_t seed) {
    if (f.nvars() != 2)
        fail(ErrorCode::DimensionMismatch, "expected a polynomial in two variables");
    if (order < 0)
        fail(ErrorCode::PreconditionFailed, "truncation order must be non-negative");
    if (f.is_zero() || f.is_constant())
        fail(ErrorCode::PreconditionFailed, "curve polynomial must be non-constant");
    if (!is_squarefree_bivariate(f, seed))
        fail(ErrorCode::NotSquarefree, "curve polynomial is not squarefree");
    std::vector<Poly> system{f};
    Rational slack = 0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto branches = branches_at(f, order + slack);
        bool ok = true;
        for (const auto& b : branches)
            ok = ok && on_variety(system, b, order);
        if (ok)
            return branches;
        slack = slack == 0 ? Rational(f.total_degree()) : slack * 2;
    }
    throw InvariantError("branch residuals did not reach the requested order");
}

} // namespace torflat
