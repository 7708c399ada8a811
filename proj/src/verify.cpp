#include "torflat/verify.hpp"

#include "torflat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace torflat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> to_doubles(const Vec& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v)
        out.push_back(x.is_rational() ? x.rational_value().get_d() : x.approx().real());
    return out;
}

Interval enclose_real(const NFElem& x, long bits) {
    if (x.is_rational())
        return Interval(x.rational_value());
    ComplexInterval b = x.embed(bits);
    if (!b.im.contains_zero())
        fail(ErrorCode::PreconditionFailed, "realified coordinate is not real");
    return b.re;
}

std::vector<Interval> rat_mat_interval(const RatMat& m, const std::vector<Interval>& x) {
    std::vector<Interval> out;
    for (const auto& row : m) {
        Interval s(Rational(0));
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0)
                s = s + Interval(row[j]) * x[j];
        out.push_back(s);
    }
    return out;
}

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

/// Nelder-Mead minimization of f from x0.
std::pair<std::vector<double>, double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                                   std::vector<double> x0, double step, int iterations) {
    const std::size_t n = x0.size();
    if (n == 0)
        return {x0, f(x0)};
    std::vector<std::vector<double>> pts{x0};
    for (std::size_t i = 0; i < n; ++i) {
        auto p = x0;
        p[i] += step;
        pts.push_back(p);
    }
    std::vector<double> val;
    for (const auto& p : pts)
        val.push_back(f(p));
    for (int it = 0; it < iterations; ++it) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        std::vector<std::vector<double>> sp;
        std::vector<double> sv;
        for (auto i : order) {
            sp.push_back(pts[i]);
            sv.push_back(val[i]);
        }
        pts = std::move(sp);
        val = std::move(sv);
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                centroid[j] += pts[i][j] / static_cast<double>(n);
        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + t * (pts[n][j] - centroid[j]);
            return p;
        };
        auto xr = along(-1.0);
        double fr = f(xr);
        if (fr < val[0]) {
            auto xe = along(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                val[n] = fe;
            } else {
                pts[n] = xr;
                val[n] = fr;
            }
        } else if (fr < val[n - 1]) {
            pts[n] = xr;
            val[n] = fr;
        } else {
            auto xc = along(0.5);
            double fc = f(xc);
            if (fc < val[n]) {
                pts[n] = xc;
                val[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
    return {pts[best], val[best]};
}

/// Known part of the branch at z = w^e after unifying ramification; the
/// tails of truncated coordinates are dropped.
Vec eval_known(const std::vector<Series>& coords, const Rational& w, const std::vector<NFElem>& pt) {
    Vec out;
    NFElem wv(w), wi = NFElem(w).inverse();
    for (const auto& c : coords) {
        NFElem acc(0);
        for (const auto& [k, p] : c.terms())
            acc += p.eval(pt) * (k >= 0 ? wv.pow(static_cast<unsigned long>(k)) : wi.pow(static_cast<unsigned long>(-k)));
        out.push_back(acc);
    }
    return out;
}

bool on_domain(const ParameterSystem& ps, const std::vector<NFElem>& pt) {
    if (static_cast<int>(pt.size()) != ps.size())
        return false;
    for (const auto& c : ps.constraints())
        if (!c.eval(pt).is_zero())
            return false;
    return true;
}

} // namespace

// ------------------------------------------------------------------ fold

std::vector<double> TorusPoint::approx() const {
    std::vector<double> out;
    for (const auto& c : coords)
        out.push_back(c.mid().get_d());
    return out;
}

std::string TorusPoint::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i)
        os << (i ? ", " : "") << coords[i].str();
    os << ")";
    return os.str();
}

TorusPoint fold(const std::vector<Interval>& x, const Lattice& lattice) {
    if (static_cast<int>(x.size()) != lattice.dim())
        fail(ErrorCode::DimensionMismatch, "point dimension does not match the lattice");
    TorusPoint p;
    for (auto& c : rat_mat_interval(lattice.inverse_basis(), x)) {
        Integer f = floor_int(c.lo);
        if (floor_int(c.hi) != f)
            fail(ErrorCode::PrecisionEscalation, "enclosure too wide to determine the integer part");
        Rational fr(f);
        p.coords.push_back(c - Interval(fr));
    }
    return p;
}

TorusPoint fold(const Vec& x, const Lattice& lattice, long precision_bits, long max_bits) {
    for (long bits = std::max(16L, precision_bits);; bits *= 2) {
        std::vector<Interval> xi;
        for (const auto& v : x)
            xi.push_back(enclose_real(v, bits));
        try {
            return fold(xi, lattice);
        } catch (const MathError& e) {
            if (e.code() != ErrorCode::PrecisionEscalation || bits * 2 > max_bits)
                throw;
        }
    }
}

// ------------------------------------------------------------ components

FoldedComponent::FoldedComponent(std::string name, TranslateSet c, Subspace v_lambda, const Lattice& lattice,
                                 ScalarMode mode)
    : name_(std::move(name)), c_(std::move(c)), v_(std::move(v_lambda)), lattice_(lattice), mode_(mode) {
    const int n = lattice.dim();
    if (v_.ambient() != n)
        fail(ErrorCode::DimensionMismatch, "component direction does not match the lattice");
    if (!c_.params)
        c_.params = no_parameters();
    proj_.assign(n, std::vector<Rational>(n));
    for (int j = 0; j < n; ++j) {
        Vec col = v_.project_to_complement(unit_vec(n, j));
        for (int i = 0; i < n; ++i) {
            if (!col[i].is_rational())
                fail(ErrorCode::PreconditionFailed, "component direction must be defined over the lattice");
            proj_[i][j] = col[i].rational_value();
        }
    }
    // Projected lattice: Z-span of P b_j, a basis from the column HNF.
    RatMat gens(n, std::vector<Rational>(n));
    Integer den = 1;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Rational s = 0;
            for (int k = 0; k < n; ++k)
                s += proj_[i][k] * lattice.basis()[k][j];
            gens[i][j] = s;
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), s.get_den().get_mpz_t());
        }
    IntMat m(n, std::vector<Integer>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational s = gens[i][j] * den;
            m[i][j] = s.get_num();
        }
    IntMat h = hnf(m).H;
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> g(n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            g[i] = Rational(h[i][j]) / Rational(den);
            nonzero = nonzero || h[i][j] != 0;
        }
        if (nonzero)
            generators_.push_back(g);
    }
    check_invariant(static_cast<int>(generators_.size()) == n - v_.dim(), "projected lattice has the wrong rank");
    for (const auto& row : proj_) {
        std::vector<double> r;
        for (const auto& x : row)
            r.push_back(x.get_d());
        proj_d_.push_back(r);
    }
    for (const auto& g : generators_) {
        std::vector<double> r;
        for (const auto& x : g)
            r.push_back(x.get_d());
        gen_d_.push_back(r);
    }
    const int r = static_cast<int>(generators_.size());
    if (r > 0) {
        Mat gram(r, Vec(r));
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                Rational s = 0;
                for (int i = 0; i < n; ++i)
                    s += generators_[a][i] * generators_[b][i];
                gram[a][b] = NFElem(s);
            }
        for (const auto& row : inverse(gram))
            gram_inv_d_.push_back(to_doubles(row));
    }
    window_ = r <= 3 ? 2 : 1;
}

FoldedComponent FoldedComponent::of(const ClosureComponent& c, const Lattice& lattice, ScalarMode mode) {
    return FoldedComponent(c.family, c.c, c.v_lambda, lattice, mode);
}

Vec FoldedComponent::translate(int m, const std::vector<NFElem>& params) const {
    Vec v;
    for (const auto& p : c_.points.at(m))
        v.push_back(p.eval(params));
    return mode_ == ScalarMode::Complex ? realify(v) : v;
}

std::pair<std::vector<long>, double> FoldedComponent::nearest(const std::vector<double>& y) const {
    const int r = static_cast<int>(gen_d_.size());
    if (r == 0)
        return {{}, norm(y)};
    const std::size_t n = y.size();
    std::vector<double> gy(r, 0.0);
    for (int a = 0; a < r; ++a)
        for (std::size_t i = 0; i < n; ++i)
            gy[a] += gen_d_[a][i] * y[i];
    std::vector<long> center(r);
    for (int a = 0; a < r; ++a) {
        double s = 0;
        for (int b = 0; b < r; ++b)
            s += gram_inv_d_[a][b] * gy[b];
        center[a] = std::lround(s);
    }
    std::vector<long> best = center, k(r);
    double best_d = kInf;
    const int w = window_;
    std::vector<int> off(r, -w);
    while (true) {
        std::vector<double> d = y;
        for (int a = 0; a < r; ++a) {
            k[a] = center[a] + off[a];
            for (std::size_t i = 0; i < n; ++i)
                d[i] -= static_cast<double>(k[a]) * gen_d_[a][i];
        }
        double nd = norm(d);
        if (nd < best_d) {
            best_d = nd;
            best = k;
        }
        int a = 0;
        while (a < r && ++off[a] > w)
            off[a++] = -w;
        if (a == r)
            break;
    }
    return {best, best_d};
}

double FoldedComponent::approx_distance(const std::vector<double>& x, const std::vector<double>& c) const {
    const std::size_t n = x.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            y[i] += proj_d_[i][j] * (x[j] - c[j]);
    return nearest(y).second;
}

Rational FoldedComponent::upper_distance(const std::vector<Interval>& x, const Vec& c) const {
    const std::size_t n = x.size();
    std::vector<Interval> diff;
    std::vector<double> dd;
    for (std::size_t i = 0; i < n; ++i) {
        diff.push_back(x[i] - enclose_real(c[i], 96));
        dd.push_back(diff.back().mid().get_d());
    }
    std::vector<double> yd(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            yd[i] += proj_d_[i][j] * dd[j];
    auto k = nearest(yd).first;
    std::vector<Interval> y = rat_mat_interval(proj_, diff);
    Interval sq(Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        Interval yi = y[i];
        for (std::size_t a = 0; a < k.size(); ++a)
            if (k[a] != 0)
                yi = yi - Interval(generators_[a][i] * Rational(k[a]));
        sq = sq + yi.sqr();
    }
    return sqrt_upper(round_up(sq.hi, 128), 64);
}

DistanceResult torus_distance(const TorusPoint& p, const FoldedComponent& comp,
                              const std::vector<std::vector<NFElem>>& hints) {
    const Lattice& lat = comp.lattice();
    if (static_cast<int>(p.coords.size()) != lat.dim())
        fail(ErrorCode::DimensionMismatch, "torus point does not match the lattice");
    std::vector<Interval> x = rat_mat_interval(lat.basis(), p.coords);
    std::vector<double> xd;
    for (const auto& v : x)
        xd.push_back(v.mid().get_d());
    const int members = static_cast<int>(comp.translates().points.size());
    DistanceResult res;
    double best = kInf;
    if (!comp.parametric()) {
        for (int m = 0; m < members; ++m) {
            double d = comp.approx_distance(xd, to_doubles(comp.translate(m, {})));
            if (d < best) {
                best = d;
                res.member = m;
            }
        }
    } else {
        const ParameterSystem& ps = *comp.translates().params;
        const auto& chart = ps.chart();
        const bool complex = comp.mode() == ScalarMode::Complex;
        const int stride = complex ? 2 : 1;
        NFElem i_unit = complex ? NFElem::generator(NumberField::gaussian()) : NFElem(0);
        auto point_of = [&](const std::vector<double>& th) -> std::optional<std::vector<NFElem>> {
            std::vector<NFElem> vals;
            for (std::size_t j = 0; j < chart.size(); ++j) {
                NFElem v(round_down(rational_from_double(th[stride * j]), 30));
                if (complex)
                    v += NFElem(round_down(rational_from_double(th[stride * j + 1]), 30)) * i_unit;
                vals.push_back(v);
            }
            try {
                return ps.complete(vals);
            } catch (const MathError&) {
                return std::nullopt;
            }
        };
        auto chart_of = [&](const std::vector<NFElem>& pt) {
            std::vector<double> th;
            for (int v : chart) {
                Complex z = pt[v].approx();
                th.push_back(z.real());
                if (complex)
                    th.push_back(z.imag());
            }
            return th;
        };
        struct Candidate {
            double dist;
            int member;
            std::vector<NFElem> params;
        };
        std::vector<Candidate> scored;
        auto score = [&](const std::vector<NFElem>& pt, int m) {
            scored.push_back({comp.approx_distance(xd, to_doubles(comp.translate(m, pt))), m, pt});
        };
        for (const auto& h : hints)
            if (on_domain(ps, h))
                for (int m = 0; m < members; ++m)
                    score(h, m);
        const auto& samples = ps.samples();
        for (std::size_t s = 0; s < samples.size() && s < 8; ++s)
            for (int m = 0; m < members; ++m)
                score(samples[s], m);
        // Chart coordinates that a translate coordinate reads off directly,
        // tried at nearby integer shifts of the folded value.
        const int half = static_cast<int>(xd.size()) / stride;
        const int reach = 2;
        if (!samples.empty())
            for (int m = 0; m < members; ++m) {
                const auto& point = comp.translates().points[m];
                std::vector<std::pair<std::size_t, std::size_t>> direct;
                for (std::size_t i = 0; i < point.size(); ++i)
                    for (std::size_t j = 0; j < chart.size(); ++j)
                        if (point[i] == Poly::variable(ps.size(), chart[j]))
                            direct.emplace_back(i, j);
                if (direct.empty())
                    continue;
                for (int a = -reach; a <= reach; ++a)
                    for (int b = complex ? -reach : 0; b <= (complex ? reach : 0); ++b) {
                        std::vector<double> th = chart_of(samples[0]);
                        for (auto [i, j] : direct) {
                            th[stride * j] = xd[i] + a;
                            if (complex)
                                th[stride * j + 1] = xd[i + half] + b;
                        }
                        if (auto pt = point_of(th))
                            score(*pt, m);
                    }
            }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.dist < b.dist; });
        if (!scored.empty()) {
            best = scored[0].dist;
            res.member = scored[0].member;
            res.params = scored[0].params;
        }
        for (std::size_t s = 0; s < scored.size() && s < 3 && !chart.empty(); ++s) {
            const int m = scored[s].member;
            auto objective = [&](const std::vector<double>& th) {
                for (double t : th)
                    if (!std::isfinite(t) || std::abs(t) > 1e8)
                        return kInf;
                auto pt = point_of(th);
                if (!pt)
                    return kInf;
                return comp.approx_distance(xd, to_doubles(comp.translate(m, *pt)));
            };
            std::vector<double> th0 = chart_of(scored[s].params);
            auto [th, val] = nelder_mead(objective, th0, 0.05 * (1.0 + norm(th0) / static_cast<double>(th0.size())), 200);
            if (val < best)
                if (auto pt = point_of(th)) {
                    best = val;
                    res.member = m;
                    res.params = *pt;
                }
        }
    }
    if (members == 0) {
        res.distance = Interval(Rational(0), Rational(0));
        return res;
    }
    Rational upper = comp.upper_distance(x, comp.translate(res.member, res.params));
    Rational lower = 0;
    if (std::isfinite(best) && best > 0)
        lower = rational_from_double(best * (1 - 1e-9));
    res.distance = Interval(std::min(lower, upper), upper);
    return res;
}

// --------------------------------------------------------------- reports

void VerificationReport::merge(const VerificationReport& o) {
    if (kind.empty())
        kind = o.kind;
    samples += o.samples;
    density_samples += o.density_samples;
    pass = pass && o.pass;
    for (const auto& c : o.components) {
        auto it = std::find_if(components.begin(), components.end(), [&](const auto& x) { return x.name == c.name; });
        if (it == components.end()) {
            components.push_back(c);
        } else {
            it->hits += c.hits;
            it->max_upper = std::max(it->max_upper, c.max_upper);
        }
    }
    std::sort(components.begin(), components.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    auto by_id = [](const PointRecord& a, const PointRecord& b) { return a.id < b.id; };
    points.insert(points.end(), o.points.begin(), o.points.end());
    std::sort(points.begin(), points.end(), by_id);
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    std::sort(failures.begin(), failures.end(), by_id);
    grid_cells = std::max(grid_cells, o.grid_cells);
    covered_cells = std::max(covered_cells, o.covered_cells);
    max_distance_to_target = std::max(max_distance_to_target, o.max_distance_to_target);
    target_dim = std::max(target_dim, o.target_dim);
    for (const auto& pr : o.probes) {
        auto it = std::find_if(probes.begin(), probes.end(), [&](const auto& x) { return x.first == pr.first; });
        if (it == probes.end())
            probes.push_back(pr);
        else
            it->second = std::min(it->second, pr.second);
    }
    std::sort(probes.begin(), probes.end());
}

// ------------------------------------------------------------ attraction

VerificationReport attraction_test(const std::vector<SampledBranch>& branches,
                                   const std::vector<FoldedComponent>& components, const Lattice& lattice,
                                   ScalarMode mode, const AttractionOptions& opt) {
    VerificationReport rep;
    rep.kind = "attraction";
    rep.tol = opt.tol;
    rep.radii = opt.radii;
    rep.threshold = opt.threshold;
    for (const auto& c : components)
        rep.components.push_back({c.name(), 0, 0.0});
    long id = 0;
    for (const auto& sb : branches) {
        const PuiseuxBranch& b = sb.branch;
        const std::vector<Series> coords = unify(b.coords);
        if (coords.empty())
            continue;
        ParamPtr ps = coords[0].params() ? coords[0].params() : no_parameters();
        if (b.params)
            ps = common_parameters(ps, b.params);
        bool unbounded = false;
        for (const auto& c : coords)
            unbounded = unbounded || (!c.terms().empty() && c.terms().begin()->first < 0);
        if (!unbounded)
            continue;
        std::vector<std::vector<NFElem>> pts{{}};
        if (ps->size() > 0) {
            pts.clear();
            for (std::size_t s = 0; s < ps->samples().size() && static_cast<int>(s) < opt.params_per_branch; ++s)
                pts.push_back(ps->samples()[s]);
        }
        // |z| ~ 1/r with z = w^e.
        const double root = 1.0 / coords[0].ramification();
        for (const auto& pt : pts)
            for (const auto& r : opt.radii) {
                long m = std::max(1L, static_cast<long>(std::floor(std::pow(r.get_d(), root))));
                for (int j = 0; j < opt.points_per_radius; ++j) {
                    Rational w = Rational(1) / (Rational(m) + make_rational(j + 1, opt.points_per_radius + 1));
                    Vec x = eval_known(coords, w, pt);
                    Vec amb = mode == ScalarMode::Complex ? realify(x) : x;
                    TorusPoint tp = fold(amb, lattice, opt.precision_bits);
                    PointRecord rec;
                    rec.id = id++;
                    rec.source = sb.name;
                    rec.radius = r;
                    rec.folded = tp.approx();
                    std::optional<DistanceResult> best;
                    int best_c = -1;
                    for (std::size_t k = 0; k < components.size(); ++k) {
                        std::vector<std::vector<NFElem>> hints;
                        if (components[k].parametric() && components[k].translates().params->same_as(*ps))
                            hints.push_back(pt);
                        DistanceResult d = torus_distance(tp, components[k], hints);
                        if (!best || d.distance.hi < best->distance.hi) {
                            best = d;
                            best_c = static_cast<int>(k);
                        }
                    }
                    if (best) {
                        rec.nearest = components[best_c].name();
                        rec.distance = best->distance;
                        auto& st = rep.components[best_c];
                        ++st.hits;
                        st.max_upper = std::max(st.max_upper, best->distance.hi.get_d());
                    } else {
                        rec.nearest = "";
                        rec.distance = Interval(Rational(1000000), Rational(1000000));
                    }
                    ++rep.samples;
                    if (r >= opt.threshold && (!best || best->distance.hi > opt.tol)) {
                        rep.pass = false;
                        rep.failures.push_back(rec);
                    }
                    rep.points.push_back(std::move(rec));
                }
            }
    }
    if (rep.samples == 0)
        fail(ErrorCode::SamplerFailure, "no unbounded branch to sample");
    return rep;
}

// --------------------------------------------------------------- density

VerificationReport density_test(const Subspace& v, const Lattice& lattice, const DensityOptions& opt) {
    const int n = lattice.dim();
    if (v.ambient() != n)
        fail(ErrorCode::DimensionMismatch, "subspace ambient does not match the lattice");
    VerificationReport rep;
    rep.kind = "density";
    rep.tol = rational_from_double(opt.epsilon);
    Subspace vl = lambda_saturate(v, lattice);
    Subtorus st = subtorus_of(vl, lattice);
    const int d = st.dim;
    rep.target_dim = d;
    TranslateSet origin{no_parameters(), {std::vector<Poly>(n, Poly(0))}};
    FoldedComponent target("saturation", origin, vl, lattice, ScalarMode::Real);
    rep.components.push_back({target.name(), 0, 0.0});

    // Coordinates of each basis vector of V in the integer basis of the subtorus.
    Mat bt(n, Vec(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j)
            bt[j][i] = NFElem(Rational(st.lattice_basis[i][j]));
    std::vector<std::vector<double>> theta_of;
    for (const auto& b : v.basis()) {
        auto sol = solve(bt, lattice.to_lattice_coords(b), d);
        check_invariant(sol.has_value(), "subspace escapes its saturation");
        theta_of.push_back(to_doubles(*sol));
    }
    double spread = 0;
    for (int i = 0; i < d; ++i) {
        std::vector<Rational> c(n);
        for (int j = 0; j < n; ++j)
            c[j] = Rational(st.lattice_basis[i][j]);
        std::vector<double> amb;
        for (const auto& x : lattice.from_lattice_coords(c))
            amb.push_back(x.get_d());
        spread += norm(amb);
    }
    long cells_per_dim = 1;
    if (d > 0)
        cells_per_dim = static_cast<long>(std::ceil(spread / (0.9 * opt.epsilon)));
    double total_d = std::pow(static_cast<double>(cells_per_dim), d);
    const bool grid_ok = total_d <= 4e6;
    const long total = grid_ok ? static_cast<long>(total_d) : 0;
    std::vector<char> covered(grid_ok ? total : 0, 0);
    long covered_count = 0;
    rep.grid_cells = total;

    std::vector<double> probe_min(opt.probes.size(), kInf);
    Rng rng(opt.seed);
    long target_n = std::min(opt.initial_samples, opt.max_samples);
    long drawn = 0;
    const auto& basis = v.basis();
    while (true) {
        for (; drawn < target_n; ++drawn) {
            std::vector<Rational> a;
            for (std::size_t j = 0; j < basis.size(); ++j)
                a.push_back(Rational(Integer(static_cast<long>(rng.uniform_int(0, 1000000))), Integer(1000)));
            for (auto& q : a)
                q.canonicalize();
            Vec s = zero_vec(n);
            for (std::size_t j = 0; j < basis.size(); ++j)
                s = s + NFElem(a[j]) * basis[j];
            TorusPoint tp = fold(s, lattice);
            DistanceResult dr = torus_distance(tp, target);
            double dist = dr.distance.hi.get_d();
            rep.max_distance_to_target = std::max(rep.max_distance_to_target, dist);
            if (dist > opt.epsilon)
                rep.pass = false;
            if (grid_ok) {
                long idx = 0;
                for (int i = 0; i < d; ++i) {
                    double th = 0;
                    for (std::size_t j = 0; j < basis.size(); ++j)
                        th += a[j].get_d() * theta_of[j][i];
                    th -= std::floor(th);
                    long cell = std::min(cells_per_dim - 1, static_cast<long>(th * static_cast<double>(cells_per_dim)));
                    idx = idx * cells_per_dim + cell;
                }
                if (!covered[idx]) {
                    covered[idx] = 1;
                    ++covered_count;
                }
            }
            auto f = tp.approx();
            for (std::size_t k = 0; k < opt.probes.size(); ++k) {
                std::vector<Rational> diff;
                for (int i = 0; i < n; ++i) {
                    double t = f[i] - opt.probes[k][i];
                    diff.push_back(rational_from_double(t - std::round(t)));
                }
                std::vector<double> amb;
                for (const auto& x : lattice.from_lattice_coords(diff))
                    amb.push_back(x.get_d());
                probe_min[k] = std::min(probe_min[k], norm(amb));
            }
            if (rep.points.size() < 5000) {
                PointRecord rec;
                rec.id = drawn;
                rec.source = "sample";
                rec.folded = f;
                rec.nearest = target.name();
                rec.distance = dr.distance;
                rep.points.push_back(std::move(rec));
            }
        }
        if ((grid_ok && covered_count == total) || target_n >= opt.max_samples)
            break;
        target_n = std::min(2 * target_n, opt.max_samples);
    }
    rep.samples = drawn;
    rep.density_samples = drawn;
    rep.covered_cells = covered_count;
    rep.components[0].hits = drawn;
    rep.components[0].max_upper = rep.max_distance_to_target;
    const bool dense = grid_ok && covered_count == total && rep.max_distance_to_target <= 0.1 * opt.epsilon;
    rep.pass = rep.pass && dense;
    for (std::size_t k = 0; k < opt.probes.size(); ++k)
        rep.probes.emplace_back(opt.probes[k], probe_min[k]);
    return rep;
}

void write_csv(const VerificationReport& r, std::ostream& os) {
    std::size_t n = 0;
    for (const auto& p : r.points)
        n = std::max(n, p.folded.size());
    for (std::size_t i = 0; i < n; ++i)
        os << "x" << (i + 1) << ",";
    os << "component,distance\n";
    for (const auto& p : r.points) {
        for (std::size_t i = 0; i < n; ++i)
            os << (i < p.folded.size() ? p.folded[i] : 0.0) << ",";
        os << p.nearest << "," << p.distance.hi.get_d() << "\n";
    }
}

} // namespace torflat
