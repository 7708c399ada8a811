#include <doctest.h>

#include "torflat/asymptotics.hpp"
#include "torflat/errors.hpp"

using namespace torflat;

namespace {

Series z(const Rational& q, const NFElem& c = NFElem(1)) { return Series::monomial(q, c); }
Series cst(const NFElem& c) { return Series::constant(c); }

Vec cv(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

ParamPtr inverse_pair() {
    std::vector<std::string> names{"t", "u"};
    return std::make_shared<const ParameterSystem>(names, std::vector<Poly>{parse_poly("t*u - 1", names, nullptr)});
}

Subspace cspan(int m, const Mat& vs) { return Subspace::complex_span(m, vs); }

/// Coefficients of z^{-1} (1 + z^2)^{1/2} by the generalized binomial formula.
std::map<Rational, Rational> sqrt_branch(int max_k) {
    std::map<Rational, Rational> out;
    Rational c = 1;
    for (int k = 0; k <= max_k; ++k) {
        out[Rational(2 * k - 1)] = c;
        c = c * (Rational(1, 2) - k) / (k + 1);
    }
    return out;
}

} // namespace

TEST_CASE("flats of the sample branches") {
    // Hyperbola: the two branches at infinity.
    auto h1 = flat_of_branch(PuiseuxBranch({z(-1), z(1)}), ScalarMode::Complex);
    CHECK(h1.exact() == Flat(zero_vec(4), cspan(2, {cv({1, 0})})));
    auto h2 = flat_of_branch(PuiseuxBranch({z(1), z(-1)}), ScalarMode::Complex);
    CHECK(h2.exact() == Flat(zero_vec(4), cspan(2, {cv({0, 1})})));

    auto par = flat_of_branch(PuiseuxBranch({z(-1), z(-2)}), ScalarMode::Complex);
    CHECK(par.exact() == Flat(zero_vec(4), Subspace::full(4, ScalarMode::Complex)));

    auto pt = flat_of_branch(PuiseuxBranch({cst(3) + z(1), cst(5)}), ScalarMode::Complex);
    CHECK(pt.dim == 0);
    CHECK(pt.exact().base() == realify(cv({3, 5})));

    auto real = flat_of_branch(PuiseuxBranch({z(-1), z(1)}), ScalarMode::Real);
    CHECK(real.exact() == Flat(zero_vec(2), Subspace::span(2, ScalarMode::Real, {cv({1, 0})})));
}

TEST_CASE("flat of the parametric family on the example surface") {
    auto ps = inverse_pair();
    Poly t = Poly::variable(2, 0), u = Poly::variable(2, 1);
    PuiseuxBranch fam({Series::monomial(-1, t, ps), Series::constant(t, ps) - Series::monomial(1, NFElem(1), ps),
                       Series::constant(u, ps)},
                      ps);
    auto a = flat_of_branch(fam, ScalarMode::Complex);
    CHECK(a.dim == 2);
    CHECK(a.base[0].is_zero());
    CHECK(a.base[1] == t);
    CHECK(a.base[2] == u);
    for (const auto& p : a.sample_points()) {
        Flat f = a.at(p);
        CHECK(f.direction() == cspan(3, {cv({1, 0, 0})}));
        CHECK(f.contains(realify({NFElem(0), p[0], p[1]})));
        CHECK(p[0] * p[1] == NFElem(1));
    }
}

TEST_CASE("flat preconditions") {
    auto free = std::make_shared<const ParameterSystem>(std::vector<std::string>{"t"}, std::vector<Poly>{});
    PuiseuxBranch b({Series::monomial(-1, Poly::variable(1, 0), free), Series::constant(NFElem(1), free)}, free);
    CHECK_THROWS_AS(flat_of_branch(b, ScalarMode::Complex), MathError);
    PuiseuxBranch low({z(-2).truncated(-1), z(1)});
    CHECK_THROWS_AS(flat_of_branch(low, ScalarMode::Complex), MathError);
}

TEST_CASE("boundedness") {
    CHECK_FALSE(is_bounded(PuiseuxBranch({z(-1), z(1)})));
    CHECK(is_bounded(PuiseuxBranch({cst(3) + z(1), cst(5)})));
    auto free = std::make_shared<const ParameterSystem>(std::vector<std::string>{"t"}, std::vector<Poly>{});
    PuiseuxBranch tz({Series::constant(Poly::variable(1, 0), free), Series::monomial(1, NFElem(1), free)}, free);
    CHECK(is_bounded(tz));
}

TEST_CASE("flat decomposition examples") {
    auto x_axis = cspan(2, {cv({1, 0})});
    auto d1 = flat_decompose(PuiseuxBranch({z(-1), z(1)}), x_axis);
    CHECK(d1.projected.coords[0].is_exact_zero());
    CHECK(d1.projected.coords[1] == z(1));
    CHECK(d1.projected_flat.dim == 0);

    auto d2 = flat_decompose(PuiseuxBranch({z(-1), z(-2)}), x_axis);
    CHECK(d2.projected.coords[0].is_exact_zero());
    CHECK(d2.projected.coords[1] == z(-2));
    CHECK(d2.projected_flat.exact().direction() == cspan(2, {cv({0, 1})}));

    PuiseuxBranch a({z(-1) + cst(2), z(-2)});
    auto d3 = flat_decompose(a, Subspace::zero(4, ScalarMode::Complex));
    CHECK(d3.projected.coords[0] == a.coords[0]);
    CHECK(d3.projected.coords[1] == a.coords[1]);

    CHECK_THROWS_AS(flat_decompose(PuiseuxBranch({z(-1), z(1)}), cspan(2, {cv({0, 1})})), MathError);
}

TEST_CASE("mu-stabilizer on the parabola") {
    std::vector<Poly> x{parse_poly("y - x^2", {"x", "y"}, nullptr)};
    PuiseuxBranch alpha({z(-1), z(-2)});
    const Rational order = 6;

    auto yes = mu_stab_member(cv({0, 1}), alpha, x, order);
    REQUIRE(yes.answer == StabAnswer::Yes);
    REQUIRE(yes.witness);
    CHECK(on_variety(x, *yes.witness, order));
    CHECK(yes.witness->coords[1] == z(-2) + cst(1));
    // x^2 - (z^-2 + 1) has valuation > order, so x agrees with the square
    // root up to exponent order + 1.
    const Series& b1 = yes.witness->coords[0];
    for (const auto& [q, c] : sqrt_branch(4))
        if (q <= order + 1)
            CHECK(b1.coefficient(q) == Poly::constant(0, NFElem(c)));
    CHECK(b1.coefficient(1) == Poly::constant(0, NFElem(Rational(1, 2))));
    CHECK(b1.coefficient(3) == Poly::constant(0, NFElem(Rational(-1, 8))));

    auto no = mu_stab_member(cv({1, 0}), alpha, x, order);
    CHECK(no.answer == StabAnswer::No);
    CHECK(no.exponent == -1);
    CHECK(no.coefficient == Poly::constant(0, NFElem(-2)));

    auto zero = mu_stab_member(cv({0, 0}), alpha, x, order);
    CHECK(zero.answer == StabAnswer::Yes);

    CHECK_THROWS_AS(mu_stab_member(cv({0, 1}), PuiseuxBranch({z(-1), z(-2) + z(1)}), x, order), MathError);
}

TEST_CASE("mu-stabilizer on the hyperbola") {
    std::vector<Poly> x{parse_poly("x*y - 1", {"x", "y"}, nullptr)};
    PuiseuxBranch alpha({z(-1), z(1)});
    auto along = mu_stab_member(cv({3, 0}), alpha, x, 5);
    REQUIRE(along.answer == StabAnswer::Yes);
    CHECK(on_variety(x, *along.witness, 5));
    auto across = mu_stab_member(cv({0, 1}), alpha, x, 5);
    CHECK(across.answer == StabAnswer::No);
    CHECK(across.exponent == -1);
}

namespace {

PuiseuxBranch random_branch(Rng& rng, int n, int e, bool complex) {
    NFElem i = NFElem::generator(NumberField::gaussian());
    std::vector<Series> coords;
    for (int k = 0; k < n; ++k) {
        std::map<long, Poly> t;
        for (int j = 0, cnt = static_cast<int>(rng.uniform_int(0, 4)); j < cnt; ++j) {
            NFElem c(rng.uniform_rational(5, 3));
            if (complex && rng.uniform_int(0, 1))
                c += NFElem(rng.uniform_rational(4, 2)) * i;
            t[rng.uniform_int(-3 * e, 3 * e)] = Poly::constant(0, c);
        }
        coords.push_back(Series::from_terms(nullptr, e, t, std::nullopt));
    }
    return PuiseuxBranch(coords);
}

} // namespace

TEST_CASE("flat properties on random branches") {
    Rng rng(11);
    for (int trial = 0; trial < 120; ++trial) {
        const bool complex = trial % 2 == 0;
        const ScalarMode mode = complex ? ScalarMode::Complex : ScalarMode::Real;
        PuiseuxBranch b = random_branch(rng, 3, 1 + trial % 3, complex);
        auto a = flat_of_branch(b, mode);
        Flat f = a.exact();

        // Minimality: every proper sub-family is separated by a functional.
        const int k = static_cast<int>(a.dirs.size());
        Mat all;
        for (const auto& d : a.dirs) {
            Vec v;
            for (const auto& p : d)
                v.push_back(p.constant_term());
            all.push_back(v);
        }
        const int full = rank(all, 3);
        for (int mask = 0; mask < (1 << k); ++mask) {
            std::vector<int> subset;
            Mat sub;
            for (int j = 0; j < k; ++j)
                if (mask & (1 << j)) {
                    subset.push_back(j);
                    sub.push_back(all[j]);
                }
            auto w = minimality_witness(a, subset);
            CHECK(w.has_value() == (rank(sub, 3) < full));
            if (w)
                CHECK(w->valuation < 0);
        }

        CHECK(branch_near_flat(b, f));
        CHECK((a.dim == 0) == is_bounded(b));
        if (a.dim == 0) {
            Vec st;
            for (const auto& s : b.coords)
                st.push_back(s.standard_part().constant_term());
            CHECK(f.base() == (complex ? realify(st) : st));
        }

        // Translation equivariance.
        Vec c{NFElem(rng.uniform_rational(3, 2)), NFElem(0), NFElem(rng.uniform_rational(3, 2))};
        std::vector<Series> shifted;
        for (int j = 0; j < 3; ++j)
            shifted.push_back(b.coords[j] + cst(c[j]));
        auto as = flat_of_branch(PuiseuxBranch(shifted), mode);
        Vec cr = complex ? realify(c) : c;
        CHECK(as.exact() == Flat(f.base() + cr, f.direction()));

        // Intersection stability: two larger flats through the asymptotic flat.
        auto extra = [&]() {
            Vec v;
            for (int j = 0; j < 3; ++j)
                v.emplace_back(rng.uniform_rational(3, 2));
            Mat m{v};
            return complex ? Subspace::complex_span(3, m) : Subspace::span(3, mode, m);
        };
        Flat f1(f.base(), f.direction().sum(extra())), f2(f.base(), f.direction().sum(extra()));
        CHECK(branch_near_flat(b, f1));
        CHECK(branch_near_flat(b, f2));
        auto meet = flat_intersect(f1, f2);
        REQUIRE(meet);
        CHECK(branch_near_flat(b, *meet));
        CHECK(meet->direction().contains(f.direction()));
        if (f.dim() > 0) {
            Vec off = zero_vec(f.ambient());
            off[0] = NFElem(1);
            Flat moved(f.base() + off, f.direction());
            if (!(moved == f))
                CHECK_FALSE(branch_near_flat(b, moved));
        }
    }
}

TEST_CASE("mu-stabilizer yes-instances preserve the flat") {
    std::vector<Poly> curves{parse_poly("y - x^2", {"x", "y"}, nullptr), parse_poly("x*y - 1", {"x", "y"}, nullptr),
                             parse_poly("y^2 - x", {"x", "y"}, nullptr)};
    std::vector<PuiseuxBranch> branches{PuiseuxBranch({z(-1), z(-2)}), PuiseuxBranch({z(-1), z(1)}),
                                        PuiseuxBranch({z(-2), z(-1)})};
    Rng rng(4);
    for (std::size_t c = 0; c < curves.size(); ++c) {
        auto a = flat_of_branch(branches[c], ScalarMode::Complex).exact();
        for (int trial = 0; trial < 6; ++trial) {
            Vec v{NFElem(rng.uniform_rational(3, 2)), NFElem(rng.uniform_rational(3, 2))};
            if (trial % 3 == 0)
                v[1] = NFElem(0);
            if (trial % 3 == 1)
                v[0] = NFElem(0);
            auto r = mu_stab_member(v, branches[c], {curves[c]}, 4);
            if (r.answer == StabAnswer::Yes) {
                CHECK(on_variety({curves[c]}, *r.witness, 4));
                CHECK(Flat(a.base() + realify(v), a.direction()) == a);
            }
        }
    }
}
