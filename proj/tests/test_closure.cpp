#include <doctest.h>

#include "torflat/closure.hpp"
#include "torflat/errors.hpp"

using namespace torflat;

namespace {

Series z(const Rational& q, long c = 1) { return Series::monomial(q, NFElem(c)); }

Vec cv(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

FlatFamily single(const std::string& name, const PuiseuxBranch& b) {
    return FlatFamily{name, {flat_of_branch(b, ScalarMode::Complex)}};
}

std::vector<FlatFamily> surface_families() {
    Series x1 = (-z(3) - z(6) - z(9)).truncated(9);
    std::vector<FlatFamily> out{single("Pi1", PuiseuxBranch({x1, z(-1), z(-2)})),
                                single("Pi2", PuiseuxBranch({z(-2), z(1) - z(3), z(-1)})),
                                single("Pi3", PuiseuxBranch({z(-2), z(-1), z(1) - z(3)}))};
    std::vector<std::string> names{"t", "u"};
    auto ps = std::make_shared<const ParameterSystem>(names, std::vector<Poly>{parse_poly("t*u - 1", names, nullptr)});
    Poly t = Poly::variable(2, 0), u = Poly::variable(2, 1);
    PuiseuxBranch fam({Series::monomial(-1, t, ps), Series::constant(t, ps) - Series::monomial(1, NFElem(1), ps),
                       Series::constant(u, ps)},
                      ps);
    out.push_back(FlatFamily{"alpha_t", {flat_of_branch(fam, ScalarMode::Complex)}});
    return out;
}

std::vector<Poly> surface() { return {parse_poly("x*(1 - y*z) - 1", {"x", "y", "z"}, nullptr)}; }

} // namespace

TEST_CASE("example surface branches lie on the surface") {
    for (const auto& f : surface_families())
        CHECK(on_variety(surface(), f.members[0].source, 5));
}

TEST_CASE("family spans") {
    auto fams = surface_families();
    auto s4 = family_span(fams[3]);
    CHECK(s4.certified);
    CHECK(s4.span == Subspace::complex_span(3, {cv({1, 0, 0})}));
    auto s1 = family_span(fams[0]);
    CHECK(s1.span == Subspace::complex_span(3, {cv({0, 1, 0}), cv({0, 0, 1})}));

    FlatFamily hx = single("x", PuiseuxBranch({z(-1), z(1)}));
    FlatFamily hy = single("y", PuiseuxBranch({z(1), z(-1)}));
    CHECK(family_span(hx).span == Subspace::complex_span(2, {cv({1, 0})}));
    CHECK(family_span(hy).span == Subspace::complex_span(2, {cv({0, 1})}));
    FlatFamily both{"xy", {hx.members[0], hy.members[0]}};
    CHECK(family_span(both).span == Subspace::full(4, ScalarMode::Complex));

    CHECK_THROWS_AS(family_span(FlatFamily{}), MathError);
}

TEST_CASE("translate sets") {
    auto fams = surface_families();
    auto v4 = family_span(fams[3]).span;
    auto c4 = translate_set(fams[3], v4);
    REQUIRE(c4.points.size() == 1);
    CHECK(c4.points[0][0].is_zero());
    CHECK(c4.points[0][1] == Poly::variable(2, 0));
    CHECK(c4.points[0][2] == Poly::variable(2, 1));
    CHECK(translate_set_dim(c4) == 1);

    auto c1 = translate_set(fams[0], family_span(fams[0]).span);
    CHECK(c1.parameter_free());
    for (const auto& p : c1.points[0])
        CHECK(p.is_zero());

    // Base point already orthogonal to V.
    FlatFamily shifted = single("s", PuiseuxBranch({z(-1), Series::constant(NFElem(7)) + z(1)}));
    auto cs = translate_set(shifted, Subspace::complex_span(2, {cv({1, 0})}));
    CHECK(cs.points[0][0].is_zero());
    CHECK(cs.points[0][1] == Poly::constant(0, NFElem(7)));

    CHECK_THROWS_AS(translate_set(fams[0], v4), MathError);
}

TEST_CASE("closure of the example surface") {
    auto desc = assemble_closure(surface_families(), Lattice::gaussian(3), surface(), {"x", "y", "z"});
    REQUIRE(desc.components.size() == 4);
    Mat e{cv({1, 0, 0}), cv({0, 1, 0}), cv({0, 0, 1})};
    std::vector<Subspace> planes{Subspace::complex_span(3, {e[1], e[2]}), Subspace::complex_span(3, {e[0], e[2]}),
                                 Subspace::complex_span(3, {e[0], e[1]})};
    for (int i = 0; i < 3; ++i) {
        const auto& c = desc.components[i];
        CHECK(c.v == planes[i]);
        CHECK(c.v_lambda == c.v);
        CHECK(c.maximal);
        CHECK(c.c.parameter_free());
        for (const auto& p : c.c.points[0])
            CHECK(p.is_zero());
    }
    const auto& c4 = desc.components[3];
    CHECK(c4.v == Subspace::complex_span(3, {e[0]}));
    CHECK(c4.v_lambda == c4.v);
    CHECK_FALSE(c4.maximal);

    auto report = clause_checks(desc, 2);
    CHECK(report.all_ok());
    CHECK(report.entries[3].dim_c == 1);
    for (int i = 0; i < 3; ++i)
        CHECK(report.entries[i].finite);

    auto tori = torus_description(desc);
    REQUIRE(tori.size() == 4);
    for (int i = 0; i < 3; ++i)
        CHECK(tori[i].dim == 4);
    CHECK(tori[3].dim == 2);
    CHECK(tori[3].lattice_basis.size() == 2);
}

TEST_CASE("closure of the hyperbola and trivial cases") {
    std::vector<FlatFamily> fams{single("x", PuiseuxBranch({z(-1), z(1)})), single("y", PuiseuxBranch({z(1), z(-1)}))};
    auto desc = assemble_closure(fams, Lattice::gaussian(2));
    REQUIRE(desc.components.size() == 2);
    CHECK(desc.components[0].v == Subspace::complex_span(2, {cv({1, 0})}));
    CHECK(desc.components[1].v == Subspace::complex_span(2, {cv({0, 1})}));
    CHECK(desc.components[0].maximal);
    CHECK(desc.components[1].maximal);
    auto r = clause_checks(desc, 1);
    CHECK(r.all_ok());

    auto dup = assemble_closure({fams[0], fams[0]}, Lattice::gaussian(2));
    CHECK(dup.components.size() == 1);

    auto bounded = assemble_closure({single("b", PuiseuxBranch({Series::constant(NFElem(2)) + z(1), z(2)}))},
                                    Lattice::gaussian(2));
    CHECK(bounded.components.empty());

    CHECK_THROWS_AS(assemble_closure({fams[0], single("w", PuiseuxBranch({z(-1), z(1), z(1)}))}, Lattice::gaussian(2)),
                    MathError);
}

TEST_CASE("clause checks flag a violation") {
    // A family whose translate set is 1-dimensional, checked against dim X = 1.
    auto free = std::make_shared<const ParameterSystem>(std::vector<std::string>{"t"}, std::vector<Poly>{});
    Poly t = Poly::variable(1, 0);
    PuiseuxBranch b({Series::monomial(-1, NFElem(1), free), Series::constant(t, free)}, free);
    auto desc = assemble_closure({FlatFamily{"bad", {flat_of_branch(b, ScalarMode::Complex)}}}, Lattice::gaussian(2));
    auto r = clause_checks(desc, 1);
    CHECK_FALSE(r.all_ok());
    CHECK_FALSE(r.entries[0].dim_ok);
    CHECK_FALSE(r.entries[0].finite_ok);
}

TEST_CASE("subtori in lattice coordinates") {
    auto z2 = Lattice::standard(2);
    auto diag = Subspace::span(2, ScalarMode::Real, {cv({1, 1})});
    auto t = subtorus_of(lambda_saturate(diag, z2), z2);
    CHECK(t.dim == 1);
    REQUIRE(t.lattice_basis.size() == 1);
    CHECK(abs(t.lattice_basis[0][0]) == 1);

    NFElem s2 = NFElem::generator(NumberField::create(QPoly({Rational(-2), Rational(0), Rational(1)}), {1.4, 0}));
    auto irr = Subspace::span(2, ScalarMode::Real, {{NFElem(1), s2}});
    auto ti = subtorus_of(lambda_saturate(irr, z2), z2);
    CHECK(ti.dim == 2);

    Lattice skew({{Rational(2), 0}, {0, Rational(1)}});
    auto tx = subtorus_of(Subspace::span(2, ScalarMode::Real, {cv({1, 0})}), skew);
    REQUIRE(tx.lattice_basis.size() == 1);
    CHECK(abs(tx.lattice_basis[0][0]) == 1);
    CHECK(tx.lattice_basis[0][1] == 0);
}
