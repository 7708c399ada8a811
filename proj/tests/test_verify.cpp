#include <doctest.h>

#include "torflat/errors.hpp"
#include "torflat/verify.hpp"

#include <cmath>
#include <sstream>

using namespace torflat;

namespace {

Series z(const Rational& q, long c = 1) { return Series::monomial(q, NFElem(c)); }

Vec cv(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

Rational q(long a, long b) { return make_rational(a, b); }

Vec rv(std::initializer_list<Rational> xs) {
    Vec v;
    for (const auto& x : xs)
        v.emplace_back(x);
    return v;
}

FlatFamily single(const std::string& name, const PuiseuxBranch& b) {
    return FlatFamily{name, {flat_of_branch(b, ScalarMode::Complex)}};
}

std::vector<SampledBranch> hyperbola_branches() {
    return {{"x", PuiseuxBranch({z(-1), z(1)})}, {"y", PuiseuxBranch({z(1), z(-1)})}};
}

std::vector<FoldedComponent> fold_all(const ClosureDescription& d) {
    std::vector<FoldedComponent> out;
    for (const auto& c : d.components)
        out.push_back(FoldedComponent::of(c, d.lattice, d.mode));
    return out;
}

std::vector<FoldedComponent> hyperbola_components() {
    std::vector<FlatFamily> fams;
    for (const auto& b : hyperbola_branches())
        fams.push_back(single(b.name, b.branch));
    return fold_all(assemble_closure(fams, Lattice::gaussian(2)));
}

FoldedComponent real_line_x() {
    TranslateSet origin{no_parameters(), {{Poly(0), Poly(0)}}};
    return FoldedComponent("x-axis", origin, Subspace::span(2, ScalarMode::Real, {cv({1, 0})}), Lattice::standard(2),
                           ScalarMode::Real);
}

NFElem sqrt2() {
    return NFElem::generator(NumberField::create(QPoly({Rational(-2), Rational(0), Rational(1)}), {1.4, 0}));
}

} // namespace

TEST_CASE("folding into the fundamental domain") {
    auto p = fold(rv({q(5, 2), q(-1, 4)}), Lattice::standard(2));
    CHECK(p.coords[0] == Interval(q(1, 2)));
    CHECK(p.coords[1] == Interval(q(3, 4)));

    Lattice skew({{Rational(2), 0}, {0, Rational(1)}});
    auto s = fold(cv({3, 0}), skew);
    CHECK(s.coords[0] == Interval(q(1, 2)));
    CHECK(s.coords[1] == Interval(Rational(0)));

    NFElem i = NFElem::generator(NumberField::gaussian());
    Vec c{NFElem(q(3, 2)) + NFElem(q(5, 4)) * i};
    auto g = fold(realify(c), Lattice::gaussian(1));
    CHECK(g.coords[0] == Interval(q(1, 2)));
    CHECK(g.coords[1] == Interval(q(1, 4)));

    auto r = fold(Vec{sqrt2(), NFElem(0)}, Lattice::standard(2));
    CHECK(std::abs(r.coords[0].mid().get_d() - (std::sqrt(2.0) - 1)) < 1e-12);
    CHECK(r.coords[0].width() < q(1, 1000000));

    CHECK_THROWS_AS(fold(cv({1, 2, 3}), Lattice::standard(2)), MathError);
}

TEST_CASE("folding is invariant under lattice translation") {
    Rng rng(11);
    Lattice lat({{Rational(2), Rational(1)}, {Rational(0), Rational(3)}});
    for (int k = 0; k < 50; ++k) {
        std::vector<Rational> x{rng.uniform_rational(50, 9), rng.uniform_rational(50, 9)};
        std::vector<Rational> shift{Rational(rng.uniform_int(-5, 5)), Rational(rng.uniform_int(-5, 5))};
        auto l = lat.from_lattice_coords(shift);
        Vec a{NFElem(x[0]), NFElem(x[1])}, b{NFElem(x[0] + l[0]), NFElem(x[1] + l[1])};
        auto fa = fold(a, lat), fb = fold(b, lat);
        for (int i = 0; i < 2; ++i) {
            CHECK(fa.coords[i] == fb.coords[i]);
            CHECK(fa.coords[i].lo >= 0);
            CHECK(fa.coords[i].hi < 1);
        }
    }
}

TEST_CASE("distances to folded components") {
    auto line = real_line_x();
    auto on = torus_distance(fold(rv({q(3, 10), Rational(0)}), Lattice::standard(2)), line);
    CHECK(on.distance.contains(Rational(0)));

    auto mid = torus_distance(fold(rv({q(1, 2), q(1, 2)}), Lattice::standard(2)), line);
    CHECK(mid.distance.hi >= q(1, 2));
    CHECK(mid.distance.hi < q(1, 2) + q(1, 1000000000));
    CHECK(mid.distance.lo <= q(1, 2));
    CHECK(mid.distance.lo > q(49, 100));

    auto near_top = torus_distance(fold(rv({Rational(7), q(19, 20)}), Lattice::standard(2)), line);
    CHECK(near_top.distance.hi < q(51, 1000));

    auto comps = hyperbola_components();
    REQUIRE(comps.size() == 2);
    Vec x = realify(PuiseuxBranch({z(-1), z(1)}).eval(q(2, 2001), {}));
    auto p = fold(x, Lattice::gaussian(2));
    CHECK(torus_distance(p, comps[0]).distance.hi <= q(1001, 1000000));
    CHECK(torus_distance(p, comps[1]).distance.hi > q(1, 10));
}

TEST_CASE("distance to a parametric translate set") {
    std::vector<std::string> names{"t", "u"};
    auto ps = std::make_shared<const ParameterSystem>(names, std::vector<Poly>{parse_poly("t*u - 1", names, nullptr)});
    Poly t = Poly::variable(2, 0), u = Poly::variable(2, 1);
    PuiseuxBranch fam({Series::monomial(-1, t, ps), Series::constant(t, ps) - Series::monomial(1, NFElem(1), ps),
                       Series::constant(u, ps)},
                      ps);
    auto desc = assemble_closure({FlatFamily{"alpha_t", {flat_of_branch(fam, ScalarMode::Complex)}}},
                                 Lattice::gaussian(3));
    auto comp = FoldedComponent::of(desc.components[0], desc.lattice, desc.mode);
    CHECK(comp.parametric());
    std::vector<NFElem> at{NFElem(q(3, 2)), NFElem(q(2, 3))};
    auto p = fold(realify(fam.eval(q(1, 10000), at)), desc.lattice);
    CHECK(torus_distance(p, comp, {at}).distance.hi <= q(2, 10000));
    auto searched = torus_distance(p, comp);
    CHECK(searched.distance.hi <= q(1, 100));
    CHECK(searched.params.size() == 2);
}

TEST_CASE("attraction on the hyperbola") {
    auto comps = hyperbola_components();
    auto rep = attraction_test(hyperbola_branches(), comps, Lattice::gaussian(2), ScalarMode::Complex, {});
    CHECK(rep.pass);
    CHECK(rep.failures.empty());
    CHECK(rep.samples == 2 * 3 * 4);
    CHECK(rep.components[0].hits == 12);
    CHECK(rep.components[1].hits == 12);
    for (const auto& pt : rep.points)
        if (pt.radius >= 1000)
            CHECK(pt.distance.hi <= q(1, 900));

    TranslateSet origin{no_parameters(), {{Poly(0), Poly(0)}}};
    FoldedComponent whole("all", origin, Subspace::full(4, ScalarMode::Complex), Lattice::gaussian(2),
                          ScalarMode::Complex);
    auto all = attraction_test(hyperbola_branches(), {whole}, Lattice::gaussian(2), ScalarMode::Complex, {});
    CHECK(all.pass);

    auto none = attraction_test(hyperbola_branches(), {}, Lattice::gaussian(2), ScalarMode::Complex, {});
    CHECK_FALSE(none.pass);
    CHECK_FALSE(none.failures.empty());

    auto one = attraction_test(hyperbola_branches(), {comps[0]}, Lattice::gaussian(2), ScalarMode::Complex, {});
    CHECK_FALSE(one.pass);
    for (const auto& f : one.failures)
        CHECK(f.source == "y");
}

TEST_CASE("density of linear flows") {
    auto z2 = Lattice::standard(2);
    DensityOptions opt;
    auto irr = density_test(Subspace::span(2, ScalarMode::Real, {{NFElem(1), sqrt2()}}), z2, opt);
    CHECK(irr.pass);
    CHECK(irr.target_dim == 2);
    CHECK(irr.covered_cells == irr.grid_cells);
    CHECK(irr.density_samples <= 100000);

    opt.probes = {{0.5, 0.0}};
    auto diag = density_test(Subspace::span(2, ScalarMode::Real, {cv({1, 1})}), z2, opt);
    CHECK(diag.pass);
    CHECK(diag.target_dim == 1);
    CHECK(diag.max_distance_to_target < 1e-9);
    REQUIRE(diag.probes.size() == 1);
    CHECK(diag.probes[0].second > 0.2);
    CHECK(diag.probes[0].second < 0.36);

    auto cplx = density_test(Subspace::complex_span(3, {cv({1, 0, 0})}), Lattice::gaussian(3), {});
    CHECK(cplx.pass);
    CHECK(cplx.target_dim == 2);
}

TEST_CASE("reports merge associatively and commutatively") {
    auto comps = hyperbola_components();
    auto br = hyperbola_branches();
    auto lat = Lattice::gaussian(2);
    auto a = attraction_test({br[0]}, comps, lat, ScalarMode::Complex, {});
    auto b = attraction_test({br[1]}, comps, lat, ScalarMode::Complex, {});
    for (auto& p : b.points)
        p.id += 100;
    auto c = attraction_test({br[1]}, {comps[0]}, lat, ScalarMode::Complex, {});
    for (auto& p : c.points)
        p.id += 200;
    for (auto& p : c.failures)
        p.id += 200;

    auto left = a;
    left.merge(b);
    left.merge(c);
    auto bc = b;
    bc.merge(c);
    auto right = a;
    right.merge(bc);
    auto swapped = c;
    swapped.merge(a);
    swapped.merge(b);
    for (const auto* r : {&right, &swapped}) {
        CHECK(r->samples == left.samples);
        CHECK(r->pass == left.pass);
        CHECK(r->points.size() == left.points.size());
        CHECK(r->failures.size() == left.failures.size());
        REQUIRE(r->components.size() == left.components.size());
        for (std::size_t i = 0; i < left.components.size(); ++i) {
            CHECK(r->components[i].name == left.components[i].name);
            CHECK(r->components[i].hits == left.components[i].hits);
        }
        for (std::size_t i = 0; i < left.points.size(); ++i)
            CHECK(r->points[i].id == left.points[i].id);
    }
    CHECK_FALSE(left.pass);

    std::ostringstream os;
    write_csv(a, os);
    std::string csv = os.str();
    CHECK(csv.rfind("x1,x2,x3,x4,component,distance\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(a.points.size()) + 1);
}
