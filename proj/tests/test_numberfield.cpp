#include <doctest.h>

#include "torflat/errors.hpp"
#include "torflat/numberfield.hpp"

using namespace torflat;

namespace {

FieldPtr sqrt2_field() { return NumberField::create(QPoly({Rational(-2), Rational(0), Rational(1)}), {1.4, 0}); }

NFElem random_elem(const FieldPtr& k, Rng& rng) {
    std::vector<Rational> c;
    for (int i = 0; i < k->degree(); ++i)
        c.push_back(rng.uniform_rational(20, 9));
    return NFElem(k, c);
}

} // namespace

TEST_CASE("gaussian arithmetic") {
    auto k = NumberField::gaussian();
    NFElem i = NFElem::generator(k);
    CHECK((NFElem(1) + i) * (NFElem(1) - i) == NFElem(2));
    CHECK(NFElem(1) / i == -i);
    CHECK(i * i == NFElem(-1));
    CHECK_FALSE(k->is_real());
    REQUIRE(k->imaginary_unit());
    CHECK(NFElem(k, *k->imaginary_unit()) == i);
    CHECK(i.conj() == -i);
    CHECK(k->is_galois());
}

TEST_CASE("real quadratic arithmetic") {
    auto k = sqrt2_field();
    NFElem s = NFElem::generator(k);
    CHECK(s * s == NFElem(2));
    CHECK(k->is_real());
    CHECK(s.conj() == s);
    CHECK(k->automorphisms().size() == 2);
    CHECK(s.apply_automorphism(1) == -s);
    auto k2 = NumberField::create(QPoly({Rational(-2), Rational(0), Rational(1)}), {-1.4, 0});
    CHECK_FALSE(k->same_as(*k2));
    CHECK(NFElem::generator(k2).approx().real() < 0);
}

TEST_CASE("division by zero and field mismatch") {
    auto k = NumberField::gaussian();
    CHECK_THROWS_AS(NFElem(1) / NFElem(k, {0, 0}), MathError);
    NFElem a = NFElem::generator(k), b = NFElem::generator(sqrt2_field());
    try {
        (void)(a + b);
        FAIL("expected mismatch");
    } catch (const MathError& e) {
        CHECK(e.code() == ErrorCode::FieldMismatch);
    }
}

TEST_CASE("construction rejects bad polynomials") {
    CHECK_THROWS_AS(NumberField::create(QPoly({Rational(-1), Rational(0), Rational(1)}), {1, 0}), MathError);
    CHECK_THROWS_AS(NumberField::create(QPoly({Rational(4), Rational(0), Rational(5), Rational(0), Rational(1)}), {0, 1}),
                    MathError); // (x^2+1)(x^2+4)
    CHECK_THROWS_AS(NumberField::create(QPoly({Rational(1), 0, 0, 0, 0, Rational(1)}), {1, 0}), MathError);
    // x^4 + 1 and x^4 - 10x^2 + 1 are irreducible (no rational roots, no quadratic factors).
    CHECK_NOTHROW(NumberField::create(QPoly({Rational(1), 0, 0, 0, Rational(1)}), {0.7, 0.7}));
    auto k = NumberField::create(QPoly({Rational(1), 0, Rational(-10), 0, Rational(1)}), {3.15, 0});
    CHECK(k->is_real());
    CHECK(k->is_galois());
}

TEST_CASE("embedding boxes") {
    auto k = NumberField::gaussian();
    NFElem i = NFElem::generator(k);
    auto box = i.embed(53);
    Rational w(1, 1);
    w /= Rational(Integer(1) << 52);
    CHECK(box.width() <= w);
    CHECK(box.re.contains(0));
    CHECK(box.im.contains(1));

    NFElem s = NFElem::generator(sqrt2_field());
    auto sb = s.embed(80);
    CHECK(sb.re.contains(Rational(141421356, 100000000)) == false);
    CHECK(sb.re.lo > Rational(141421356, 100000000));
    CHECK(sb.re.hi < Rational(141421357, 100000000));
    CHECK(sb.re.sqr().contains(2));

    auto zb = NFElem(k, {0, 0}).embed(10);
    CHECK(zb.re.is_point());
    CHECK(zb.re.lo == 0);
    CHECK(zb.im.lo == 0);
    CHECK(zb.im.is_point());
}

TEST_CASE("nested refinement") {
    auto k = NumberField::create(QPoly({Rational(-2), Rational(0), Rational(0), Rational(1)}), {1.26, 0});
    ComplexInterval prev = k->isolating_box();
    for (long bits : {8L, 20L, 50L, 120L, 300L}) {
        auto b = k->root_box(bits);
        CHECK(b.subset_of(prev));
        prev = b;
    }
}

TEST_CASE("rational coefficient vectors") {
    auto s2 = sqrt2_field();
    NFElem s = NFElem::generator(s2);
    auto v = rational_coefficient_vectors({NFElem(1), s});
    REQUIRE(v.size() == 2);
    CHECK(v[0] == std::vector<Rational>{1, 0});
    CHECK(v[1] == std::vector<Rational>{0, 1});

    auto g = NumberField::gaussian();
    NFElem i = NFElem::generator(g);
    auto w = rational_coefficient_vectors({i, NFElem(0), NFElem(0)});
    CHECK(w[0] == std::vector<Rational>{0, 0, 0});
    CHECK(w[1] == std::vector<Rational>{1, 0, 0});

    auto u = rational_coefficient_vectors({NFElem(1) + i, NFElem(2)});
    CHECK(u[0] == std::vector<Rational>{1, 2});
    CHECK(u[1] == std::vector<Rational>{1, 0});
}

TEST_CASE("ring axioms and embedding inclusion on random elements") {
    Rng rng(11);
    std::vector<FieldPtr> fields{NumberField::gaussian(), sqrt2_field(),
                                 NumberField::create(QPoly({Rational(1), 0, 0, 0, Rational(1)}), {0.7, 0.7})};
    for (const auto& k : fields) {
        for (int trial = 0; trial < 40; ++trial) {
            NFElem a = random_elem(k, rng), b = random_elem(k, rng), c = random_elem(k, rng);
            CHECK((a * b) * c == a * (b * c));
            CHECK((a + b) * c == a * c + b * c);
            CHECK(a * b == b * a);
            if (!b.is_zero())
                CHECK((a / b) * b == a);
            auto ea = a.embed(40), eb = b.embed(40), eab = (a * b).embed(60);
            auto prod = ea * eb;
            CHECK(ComplexInterval::overlaps(eab, prod));
            // The tight box of a*b lies inside the product of the boxes.
            CHECK(eab.re.lo >= prod.re.lo - eab.width());
            CHECK(eab.re.hi <= prod.re.hi + eab.width());
            // Coefficient vectors reassemble the element.
            auto cv = rational_coefficient_vectors({a});
            NFElem back(0);
            NFElem th = NFElem::generator(k);
            for (int j = 0; j < k->degree(); ++j)
                back += NFElem(cv[j][0]) * th.pow(j);
            CHECK(back == a);
        }
    }
}

TEST_CASE("real and imaginary parts") {
    auto g = NumberField::gaussian();
    NFElem a(g, {Rational(3), Rational(-5)});
    auto [re, im] = real_imag_parts(a);
    CHECK(re == NFElem(3));
    CHECK(im == NFElem(-5));
}

TEST_CASE("roots in field") {
    auto g = NumberField::gaussian();
    auto r = roots_in_field({NFElem(1), NFElem(0), NFElem(1)}, g);
    CHECK(r.size() == 2);
    auto q = roots_in_field({NFElem(4), NFElem(-4), NFElem(1)}, NumberField::rationals());
    REQUIRE(q.size() == 1);
    CHECK(q[0].first == NFElem(2));
    CHECK(q[0].second == 2);
    CHECK(roots_in_field({NFElem(-2), NFElem(0), NFElem(1)}, NumberField::rationals()).empty());
}

TEST_CASE("factorization into small irreducibles") {
    // (x^2 - 2)(x^2 + x + 1)(x - 1/2)
    QPoly a({Rational(-2), 0, Rational(1)}), b({Rational(1), Rational(1), Rational(1)}),
        c({Rational(-1, 2), Rational(1)});
    auto f = small_irreducible_factors(a * b * c);
    REQUIRE(f);
    CHECK(f->size() == 3);
    auto g = small_irreducible_factors(QPoly({Rational(-2), 0, 0, 0, 0, Rational(1)}));
    CHECK_FALSE(g);
}
