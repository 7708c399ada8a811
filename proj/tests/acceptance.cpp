// Acceptance gate: one PASS/FAIL line per criterion.

#include "torflat/errors.hpp"
#include "torflat/io.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace torflat;
using io::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

Series z(const Rational& q, long c = 1) { return Series::monomial(q, NFElem(c)); }

Vec cv(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

FieldPtr qsqrt2() { return NumberField::create(QPoly({Rational(-2), Rational(0), Rational(1)}), {1.4, 0}); }
NFElem sqrt2() { return NFElem::generator(qsqrt2()); }
NFElem gauss_i() { return NFElem::generator(NumberField::gaussian()); }

json load(const std::string& name) {
    std::ifstream in(std::string(TORFLAT_DATA_DIR) + "/" + name);
    if (!in)
        throw std::runtime_error("missing fixture " + name);
    return json::parse(in);
}

std::vector<FoldedComponent> fold_components(const ClosureDescription& d, const std::vector<std::string>& omit = {}) {
    std::vector<FoldedComponent> out;
    for (const auto& c : d.components)
        if (std::find(omit.begin(), omit.end(), c.family) == omit.end())
            out.push_back(FoldedComponent::of(c, d.lattice, d.mode));
    return out;
}

std::vector<SampledBranch> sampled(const io::ClosureInput& in) {
    std::vector<SampledBranch> out;
    for (const auto& f : in.families)
        for (const auto& b : f.branches)
            out.push_back({f.name, b});
    return out;
}

// ------------------------------------------------------------- criterion 1

Outcome golden_closure() {
    Outcome o;
    auto in = io::closure_input_from_json(load("surface_xyz.json"));
    auto desc = assemble_closure(io::flat_families(in), in.lattice, in.variety, in.variables);
    // Round trip through the emitted document, as the CLI would.
    io::ClosureDocument doc{desc, clause_checks(desc, in.dim_x), torus_description(desc)};
    desc = io::closure_from_json(io::closure_to_json(doc)).description;

    o.require(desc.components.size() == 4, "expected four components");
    if (!o.ok)
        return o;
    Mat e{cv({1, 0, 0}), cv({0, 1, 0}), cv({0, 0, 1})};
    const char* names[] = {"Pi1", "Pi2", "Pi3", "alpha_t"};
    std::vector<Subspace> v{Subspace::complex_span(3, {e[1], e[2]}), Subspace::complex_span(3, {e[0], e[2]}),
                            Subspace::complex_span(3, {e[0], e[1]}), Subspace::complex_span(3, {e[0]})};
    for (int i = 0; i < 4; ++i) {
        const auto& c = desc.components[i];
        o.require(c.family == names[i], "component order");
        o.require(c.v == v[i], std::string("V of ") + names[i]);
        o.require(c.v_lambda == c.v, std::string("V^Lambda of ") + names[i]);
        o.require(c.c.points.size() == 1, std::string("one translate point for ") + names[i]);
    }
    for (int i = 0; i < 3; ++i) {
        o.require(desc.components[i].c.parameter_free(), "C of Pi is a point");
        for (const auto& p : desc.components[i].c.points[0])
            o.require(p.is_zero(), "C of Pi is the origin");
    }
    const auto& c4 = desc.components[3].c;
    o.require(c4.params && c4.params->size() == 2, "C4 has two parameters");
    if (o.ok) {
        const auto& pt = c4.points[0];
        o.require(pt[0].is_zero(), "C4 first coordinate is 0");
        o.require(pt[1] == Poly::variable(2, 0), "C4 second coordinate is t");
        o.require(pt[2] == Poly::variable(2, 1), "C4 third coordinate is u");
        for (const auto& s : c4.params->samples())
            o.require(s[0] * s[1] == NFElem(1), "u = 1/t on the parameter domain");
    }
    return o;
}

// ------------------------------------------------------------- criterion 2

Outcome sample_flats() {
    Outcome o;
    std::vector<std::string> vars{"x", "y"};
    auto check_curve = [&](const std::string& curve, const std::vector<Subspace>& expected) {
        Poly f = parse_poly(curve, vars, nullptr);
        auto bs = newton_puiseux_at_infinity(f, 4);
        std::vector<Subspace> got;
        for (const auto& b : bs) {
            auto a = flat_of_branch(b, ScalarMode::Complex);
            Flat fl = a.exact();
            o.require(a.dim > 0, curve + ": branch at infinity must be unbounded");
            bool known = false;
            for (const auto& s : got)
                known = known || s == fl.direction();
            if (!known)
                got.push_back(fl.direction());
        }
        o.require(got.size() == expected.size(), curve + ": number of distinct unbounded flats");
        for (const auto& s : expected) {
            bool found = false;
            for (const auto& g : got)
                found = found || g == s;
            o.require(found, curve + ": expected flat direction " + s.str());
        }
    };
    check_curve("x*y - 1", {Subspace::complex_span(2, {cv({1, 0})}), Subspace::complex_span(2, {cv({0, 1})})});
    check_curve("y - x^2", {Subspace::full(4, ScalarMode::Complex)});

    // Bounded branches give points.
    Rational a = make_rational(3, 2);
    PuiseuxBranch hp({Series::constant(NFElem(a)) + z(1), Series::constant(NFElem(1 / a)) - z(1, 4) * z(0)});
    auto fh = flat_of_branch(hp, ScalarMode::Complex);
    o.require(fh.dim == 0 && fh.exact().base() == realify(Vec{NFElem(a), NFElem(1 / a)}), "hyperbola point flat");
    PuiseuxBranch pp({Series::constant(NFElem(2)) + z(1), Series::constant(NFElem(4)) + z(1, 4) + z(2)});
    auto fp = flat_of_branch(pp, ScalarMode::Complex);
    o.require(fp.dim == 0 && fp.exact().base() == realify(cv({2, 4})), "parabola point flat");
    return o;
}

// ------------------------------------------------------------- criterion 3

Outcome clause_report() {
    Outcome o;
    auto in = io::closure_input_from_json(load("surface_xyz.json"));
    auto desc = assemble_closure(io::flat_families(in), in.lattice, in.variety, in.variables);
    auto r = clause_checks(desc, 2);
    o.require(r.entries.size() == 4, "four clause entries");
    if (!o.ok)
        return o;
    o.require(r.entries[3].dim_c == 1 && r.entries[3].dim_ok, "dim C4 = 1 < dim X = 2");
    for (int i = 0; i < 3; ++i) {
        o.require(r.entries[i].maximal, "Pi components are maximal");
        o.require(r.entries[i].finite && r.entries[i].dim_c == 0, "C1..C3 finite");
    }
    o.require(!r.entries[3].maximal, "V4 flagged non-maximal");
    o.require(r.all_ok(), "all clauses hold");
    return o;
}

// ------------------------------------------------------------- criterion 4

Vec random_vec(int n, const std::vector<NFElem>& gens, Rng& rng) {
    Vec v;
    for (int i = 0; i < n; ++i) {
        NFElem x(rng.uniform_rational(4, 3));
        if (rng.uniform_int(0, 2) == 0)
            x = NFElem(0);
        for (const auto& g : gens)
            if (rng.uniform_int(0, 1))
                x += NFElem(rng.uniform_rational(3, 2)) * g;
        v.push_back(x);
    }
    return v;
}

Lattice random_lattice(int n, Rng& rng) {
    while (true) {
        RatMat b(n, std::vector<Rational>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                b[i][j] = i == j ? Rational(rng.uniform_int(1, 3)) : (rng.uniform_int(0, 2) ? Rational(0) : rng.uniform_rational(2, 2));
        try {
            return Lattice(b);
        } catch (const MathError&) {
        }
    }
}

Outcome saturation_suite(int& trials) {
    Outcome o;
    Rng rng(2024);
    trials = 0;
    for (int t = 0; t < 240; ++t, ++trials) {
        const int kind = t % 3; // Q, Q(i), Q(sqrt 2)
        Lattice lat = random_lattice(4, rng);
        auto make = [&](int k) {
            Mat vs;
            if (kind == 1) {
                for (int j = 0; j < k; ++j)
                    vs.push_back(random_vec(2, {gauss_i()}, rng));
                return Subspace::complex_span(2, vs);
            }
            std::vector<NFElem> g = kind == 2 ? std::vector<NFElem>{sqrt2()} : std::vector<NFElem>{};
            for (int j = 0; j < k; ++j)
                vs.push_back(random_vec(4, g, rng));
            return Subspace::span(4, ScalarMode::Real, vs);
        };
        Subspace h = make(static_cast<int>(rng.uniform_int(0, kind == 1 ? 1 : 3)));
        Subspace sat = lambda_saturate(h, lat);
        std::string tag = " (trial " + std::to_string(t) + ")";
        o.require(sat.contains(h), "containment" + tag);
        o.require(defined_over(sat, lat), "Lambda-definedness" + tag);
        o.require(lambda_saturate(sat, lat) == sat, "idempotence" + tag);
        Subspace bigger = h.sum(make(1));
        o.require(lambda_saturate(bigger, lat).contains(sat), "monotonicity" + tag);
        auto galois = lambda_saturate_galois(h, lat);
        o.require(galois.has_value() && *galois == sat, "Galois-conjugate route disagrees" + tag);
        if (!o.ok)
            break;
    }
    return o;
}

// ------------------------------------------------------------- criterion 5

PuiseuxBranch random_branch(Rng& rng, int n, int e, bool complex) {
    NFElem i = gauss_i();
    std::vector<Series> coords;
    for (int k = 0; k < n; ++k) {
        std::map<long, Poly> t;
        for (int j = 0, cnt = static_cast<int>(rng.uniform_int(1, 4)); j < cnt; ++j) {
            NFElem c(rng.uniform_rational(5, 3));
            if (complex && rng.uniform_int(0, 1))
                c += NFElem(rng.uniform_rational(4, 2)) * i;
            if (!c.is_zero())
                t[rng.uniform_int(-3 * e, 3 * e)] = Poly::constant(0, c);
        }
        coords.push_back(Series::from_terms(nullptr, e, t, std::nullopt));
    }
    return PuiseuxBranch(coords);
}

/// Least exponent q < 0 at which sum_i l_i alpha_i has a nonzero coefficient.
std::optional<Rational> negative_valuation(const Vec& l, const PuiseuxBranch& b) {
    std::vector<Series> cs = unify(b.coords);
    std::set<long> keys;
    for (const auto& c : cs)
        for (const auto& [k, p] : c.terms())
            if (k < 0)
                keys.insert(k);
    for (long k : keys) {
        NFElem s(0);
        for (std::size_t i = 0; i < cs.size(); ++i)
            s += l[i] * cs[i].coefficient(cs[i].exponent(k)).constant_term();
        if (!s.is_zero())
            return cs[0].exponent(k);
    }
    return std::nullopt;
}

Outcome minimality_suite(int& trials) {
    Outcome o;
    Rng rng(77);
    trials = 0;
    long candidates = 0;
    for (int t = 0; t < 240; ++t) {
        const bool complex = t % 2 == 0;
        PuiseuxBranch b = random_branch(rng, 3, 1 + t % 3, complex);
        AsymptoticFlat a = flat_of_branch(b, complex ? ScalarMode::Complex : ScalarMode::Real);
        const int k = static_cast<int>(a.dirs.size());
        if (k == 0)
            continue;
        ++trials;
        Mat dirs;
        for (const auto& d : a.dirs) {
            Vec v;
            for (const auto& p : d)
                v.push_back(p.constant_term());
            dirs.push_back(v);
        }
        const int full = rank(dirs, 3);
        std::string tag = " (branch " + b.str() + ")";
        // Candidates spanned by subsets of the principal vectors.
        for (int mask = 0; mask < (1 << k); ++mask) {
            std::vector<int> subset;
            Mat sub;
            for (int j = 0; j < k; ++j)
                if (mask & (1 << j)) {
                    subset.push_back(j);
                    sub.push_back(dirs[j]);
                }
            if (rank(sub, 3) == full)
                continue;
            ++candidates;
            auto w = minimality_witness(a, subset);
            o.require(w.has_value(), "strict subflat candidate not rejected" + tag);
            if (!w)
                break;
            for (const auto& s : sub)
                o.require(dot(w->functional, s).is_zero(), "witness does not vanish on the candidate" + tag);
            auto val = negative_valuation(w->functional, b);
            o.require(val.has_value() && *val < 0 && *val == w->valuation, "witness valuation not negative" + tag);
        }
        // Random proper sub-spans of the direction.
        for (int r = 0; r < full; ++r) {
            Mat sub;
            for (int j = 0; j < r; ++j) {
                Vec v = zero_vec(3);
                for (const auto& d : dirs)
                    v = v + NFElem(rng.uniform_rational(3, 2)) * d;
                sub.push_back(v);
            }
            ++candidates;
            bool rejected = false;
            for (const auto& l : kernel(sub, 3))
                if (auto val = negative_valuation(l, b))
                    rejected = rejected || *val < 0;
            o.require(rejected, "random strict subflat not rejected" + tag);
        }
        if (!o.ok)
            break;
    }
    o.require(trials >= 200, "fewer than 200 unbounded branches");
    if (o.ok)
        o.detail = std::to_string(candidates) + " candidates";
    return o;
}

// ------------------------------------------------------------- criterion 6

Outcome residual_corpus() {
    Outcome o;
    const char* corpus[] = {"x*y - 1",         "y - x^2",         "y^2 - x",         "y^2 - x^3 - 1",
                            "y^3 - x*y - x^2", "x^2*y^2 - x - y", "y^2 - 2*x^2 - x", "x*y^2 - y - 1",
                            "y^3 + x^3 - 3*x*y", "y^2 - x^2 - 1"};
    int branches = 0;
    for (const char* s : corpus) {
        Poly f = parse_poly(s, {"x", "y"}, nullptr);
        for (Rational order : {Rational(2), Rational(6), make_rational(13, 2)}) {
            auto bs = newton_puiseux_at_infinity(f, order);
            o.require(!bs.empty(), std::string(s) + ": no branches");
            for (const auto& b : bs) {
                ++branches;
                for (const auto& r : residual_valuation({f}, b))
                    o.require(r.accepted(order), std::string(s) + ": residual " + r.str() + " not above order");
                // Independent exact check: substitute and read off the valuation.
                Series res = eval_poly(f, b.coords, b.params);
                auto vb = res.valuation_bound();
                o.require(!vb || *vb > order, std::string(s) + ": substituted series has low valuation");
            }
        }
    }
    if (o.ok)
        o.detail = std::to_string(branches) + " branches";
    return o;
}

// ------------------------------------------------------------- criterion 7

Outcome attraction() {
    Outcome o;
    AttractionOptions opt;
    opt.tol = make_rational(1, 20);
    opt.threshold = 1000;
    opt.radii = {Rational(100), Rational(1000), Rational(10000)};

    auto hyp = io::closure_input_from_json(load("hyperbola.json"));
    auto hdesc = assemble_closure(io::flat_families(hyp), hyp.lattice, hyp.variety, hyp.variables);
    auto hr = attraction_test(sampled(hyp), fold_components(hdesc), hyp.lattice, hyp.mode, opt);
    o.require(hr.pass, "hyperbola attraction failed");

    auto sur = io::closure_input_from_json(load("surface_xyz.json"));
    auto sdesc = assemble_closure(io::flat_families(sur), sur.lattice, sur.variety, sur.variables);
    auto sr = attraction_test(sampled(sur), fold_components(sdesc), sur.lattice, sur.mode, opt);
    o.require(sr.pass, "surface attraction failed");
    double worst = 0;
    for (const auto& p : sr.points)
        if (p.radius >= opt.threshold) {
            worst = std::max(worst, p.distance.hi.get_d());
            o.require(p.distance.hi <= Rational(1) / p.radius + make_rational(1, 1000000000),
                      "distance above 1/r at " + p.source);
        }

    auto neg = attraction_test(sampled(sur), fold_components(sdesc, {"Pi1"}), sur.lattice, sur.mode, opt);
    o.require(!neg.pass, "negative control passed");
    bool witness = false;
    for (const auto& f : neg.failures)
        witness = witness || (f.source == "Pi1" && f.distance.lo > opt.tol && f.radius >= opt.threshold);
    o.require(witness, "negative control has no Pi1 witness beyond tol");
    if (o.ok) {
        std::ostringstream os;
        os << "max distance " << worst << ", " << neg.failures.size() << " witnesses";
        o.detail = os.str();
    }
    return o;
}

// ------------------------------------------------------------- criterion 8

Outcome density() {
    Outcome o;
    auto z2 = Lattice::standard(2);
    DensityOptions opt;
    opt.epsilon = 0.05;
    opt.max_samples = 100000;
    auto irr = density_test(Subspace::span(2, ScalarMode::Real, {{NFElem(1), sqrt2()}}), z2, opt);
    o.require(irr.pass, "sqrt(2) line not 0.05-dense");
    o.require(irr.target_dim == 2, "sqrt(2) line saturates to the plane");
    o.require(irr.density_samples <= 100000, "too many samples");

    opt.probes = {{0.5, 0.0}};
    auto diag = density_test(Subspace::span(2, ScalarMode::Real, {cv({1, 1})}), z2, opt);
    o.require(diag.target_dim == 1, "slope-1 line closes up to a 1-subtorus");
    o.require(diag.pass, "slope-1 line not dense in its subtorus");
    o.require(!diag.probes.empty() && diag.probes[0].second > 0.2, "slope-1 line comes within 0.2 of (0.5, 0)");
    if (o.ok) {
        std::ostringstream os;
        os << irr.density_samples << " samples, probe distance " << diag.probes[0].second;
        o.detail = os.str();
    }
    return o;
}

// ------------------------------------------------------------- criterion 9

Outcome mu_stabilizer() {
    Outcome o;
    std::vector<Poly> x{parse_poly("y - x^2", {"x", "y"}, nullptr)};
    PuiseuxBranch alpha({z(-1), z(-2)});
    const Rational order = 6;
    auto yes = mu_stab_member(cv({0, 1}), alpha, x, order);
    o.require(yes.answer == StabAnswer::Yes && yes.witness, "(0,1) not accepted");
    if (yes.witness) {
        o.require(on_variety(x, *yes.witness, order), "witness not on the parabola");
        for (int i = 0; i < 2; ++i) {
            Series shifted = alpha.coords[i] + Series::constant(NFElem(i == 1 ? 1 : 0));
            Series diff = yes.witness->coords[i] - shifted;
            auto vb = diff.valuation_bound();
            o.require(!vb || *vb > 0, "witness not infinitesimally close to v + alpha");
        }
    }
    auto no = mu_stab_member(cv({1, 0}), alpha, x, order);
    o.require(no.answer == StabAnswer::No, "(1,0) not rejected");
    o.require(no.exponent == -1, "obstruction exponent is not -1");
    o.require(!no.coefficient.is_zero(), "obstruction coefficient vanishes");
    return o;
}

} // namespace

int main() {
    int failed = 0;
    auto run = [&](int id, const std::string& name, double limit_s, const std::function<Outcome()>& f) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (limit_s > 0 && secs >= limit_s)
            o.require(false, "runtime limit exceeded");
        if (!o.ok)
            ++failed;
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << secs << " s";
        if (limit_s > 0)
            line << ", limit " << limit_s << " s";
        line << ")";
        if (!o.detail.empty())
            line << " " << o.detail;
        std::cout << line.str() << std::endl;
    };
    int sat_trials = 0, min_trials = 0;
    run(1, "closure of x(1-yz)=1 with Z^3+iZ^3 from the bundled fixture", 5, golden_closure);
    run(2, "flats of the hyperbola and parabola samples", 0, sample_flats);
    run(3, "clause checks on the example surface", 0, clause_report);
    run(4, "saturation property suite over Q, Q(i), Q(sqrt 2)", 0, [&] {
        Outcome o = saturation_suite(sat_trials);
        o.require(sat_trials >= 200, "fewer than 200 trials");
        if (o.ok)
            o.detail = std::to_string(sat_trials) + " trials";
        return o;
    });
    run(5, "flat minimality oracle on random branches", 0, [&] { return minimality_suite(min_trials); });
    run(6, "Newton-Puiseux residuals on a 10-curve corpus", 0, residual_corpus);
    run(7, "attraction on the hyperbola and the example surface, negative control", 60, attraction);
    run(8, "Kronecker density of the sqrt(2) and slope-1 lines", 30, density);
    run(9, "mu-stabilizer semi-decision on the parabola", 0, mu_stabilizer);
    std::cout << (failed ? "FAIL" : "PASS") << " overall: " << 9 - failed << "/9 criteria" << std::endl;
    return failed ? 1 : 0;
}
