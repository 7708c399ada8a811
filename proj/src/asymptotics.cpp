#include "torflat/asymptotics.hpp"

#include "torflat/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace torflat {

namespace {

std::vector<NFElem> eval_all(const std::vector<Poly>& ps, const std::vector<NFElem>& point) {
    std::vector<NFElem> out;
    out.reserve(ps.size());
    for (const auto& p : ps)
        out.push_back(p.eval(point));
    return out;
}

ParamPtr branch_params(const std::vector<Series>& coords, const ParamPtr& hint) {
    ParamPtr p = hint ? hint : no_parameters();
    for (const auto& c : coords)
        p = common_parameters(p, c.params());
    return p;
}

bool has_negative(const Series& s) { return !s.terms().empty() && s.terms().begin()->first < 0; }

void certify_principal_part(const Series& s, const ParamPtr& params) {
    if (!has_negative(s))
        return;
    if (!params->is_unit(s.terms().begin()->second))
        fail(ErrorCode::ParameterDependentLeadingTerm,
             "leading coefficient of an unbounded coordinate may vanish on the parameter domain");
}

Series linear_combination(const std::vector<NFElem>& coeffs, const std::vector<Series>& coords, const ParamPtr& params) {
    Series out(params);
    for (std::size_t j = 0; j < coords.size(); ++j)
        if (!coeffs[j].is_zero())
            out = out + coords[j].scaled(Poly::constant(params->size(), coeffs[j]));
    return out;
}

/// All nonzero partial derivatives of f of order >= 1.
std::vector<Poly> all_derivatives(const Poly& f) {
    std::vector<Poly> out;
    std::set<std::vector<int>> seen;
    std::vector<std::pair<std::vector<int>, Poly>> frontier{{std::vector<int>(f.nvars(), 0), f}};
    while (!frontier.empty()) {
        std::vector<std::pair<std::vector<int>, Poly>> next;
        for (const auto& [idx, p] : frontier)
            for (int v = 0; v < f.nvars(); ++v) {
                Poly d = p.derivative(v);
                if (d.is_zero())
                    continue;
                auto key = idx;
                ++key[v];
                if (!seen.insert(key).second)
                    continue;
                out.push_back(d);
                next.emplace_back(key, d);
            }
        frontier = std::move(next);
    }
    return out;
}

std::optional<NFElem> constant_value(const Poly& p) {
    if (!p.is_constant())
        return std::nullopt;
    return p.constant_term();
}

} // namespace

// ----------------------------------------------------------------- flats

std::vector<std::vector<NFElem>> AsymptoticFlat::sample_points() const {
    if (!parametric())
        return {{}};
    return params->samples();
}

Flat AsymptoticFlat::at(const std::vector<NFElem>& point) const {
    Vec b = eval_all(base, point);
    Mat d;
    for (const auto& g : dirs)
        d.push_back(eval_all(g, point));
    if (mode == ScalarMode::Complex)
        return Flat(realify(b), Subspace::complex_span(size(), d));
    return Flat(b, Subspace::span(size(), ScalarMode::Real, d));
}

Flat AsymptoticFlat::exact() const {
    if (parametric())
        fail(ErrorCode::PreconditionFailed, "flat depends on parameters");
    return at({});
}

std::string AsymptoticFlat::str() const {
    std::vector<std::string> names = params ? params->names() : std::vector<std::string>{};
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < size(); ++i)
        os << (i ? ", " : "") << base[i].str(names);
    os << ") + " << to_string(mode) << "-span{";
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        os << (k ? ", " : "") << "(";
        for (int i = 0; i < size(); ++i)
            os << (i ? ", " : "") << dirs[k][i].str(names);
        os << ")";
    }
    os << "}";
    return os.str();
}

PuiseuxBranch specialize(const PuiseuxBranch& b, const std::vector<NFElem>& point) {
    std::vector<Series> coords;
    for (const auto& c : b.coords) {
        std::map<long, Poly> terms;
        for (const auto& [k, p] : c.terms())
            terms.emplace(k, Poly::constant(0, p.eval(point)));
        coords.push_back(Series::from_terms(nullptr, c.ramification(), std::move(terms), c.truncation()));
    }
    return PuiseuxBranch(std::move(coords), nullptr, b.multiplicity);
}

AsymptoticFlat flat_of_branch(const PuiseuxBranch& alpha, ScalarMode mode) {
    if (alpha.size() == 0)
        fail(ErrorCode::DimensionMismatch, "branch has no coordinates");
    ParamPtr params = branch_params(alpha.coords, alpha.params);
    std::vector<Series> coords = unify(alpha.coords);
    for (auto& c : coords)
        c = c.with_params(params);
    std::set<long> negative;
    for (const auto& c : coords) {
        if (c.truncation() && *c.truncation() < 0) {
            if (c.terms().empty())
                fail(ErrorCode::UncertifiableZero, "coordinate truncated below its constant term with no known terms");
            fail(ErrorCode::TruncationTooLow, "coordinate truncated below its constant term");
        }
        certify_principal_part(c, params);
        for (const auto& [k, p] : c.terms())
            if (k < 0)
                negative.insert(k);
    }
    AsymptoticFlat a;
    a.mode = mode;
    a.params = params;
    a.source = PuiseuxBranch(coords, params, alpha.multiplicity);
    for (const auto& c : coords)
        a.base.push_back(c.coefficient(Rational(0)));
    for (long k : negative) {
        Rational q = coords[0].exponent(k);
        a.exponents.push_back(q);
        std::vector<Poly> v;
        for (const auto& c : coords)
            v.push_back(c.coefficient(q));
        a.dirs.push_back(std::move(v));
    }
    for (const auto& pt : a.sample_points())
        a.dim = std::max(a.dim, a.at(pt).dim());
    return a;
}

bool is_bounded(const PuiseuxBranch& alpha) {
    ParamPtr params = branch_params(alpha.coords, alpha.params);
    bool bounded = true;
    bool flat_known = true;
    for (const auto& c : alpha.coords) {
        certify_principal_part(c, params);
        if (has_negative(c))
            bounded = false;
        if (c.truncation() && *c.truncation() < 0)
            flat_known = false;
    }
    if (flat_known && alpha.size() > 0) {
        bool real = true;
        for (const auto& c : alpha.coords)
            for (const auto& [k, p] : c.terms())
                for (const auto& [m, x] : p.terms())
                    real = real && (x.is_rational() || x.field()->is_real());
        std::optional<AsymptoticFlat> flat;
        try {
            flat = flat_of_branch(alpha, real ? ScalarMode::Real : ScalarMode::Complex);
        } catch (const MathError&) {
        }
        if (flat)
            check_invariant((flat->dim == 0) == bounded, "boundedness disagrees with the flat dimension");
    }
    return bounded;
}

bool branch_near_flat(const PuiseuxBranch& alpha, const Flat& flat) {
    const int n = alpha.size();
    Mat dirs;
    Vec base;
    if (flat.ambient() == 2 * n && flat.direction().mode() == ScalarMode::Complex) {
        dirs = flat.direction().complex_basis();
        base = complexify(flat.base());
    } else if (flat.ambient() == n) {
        dirs = flat.direction().basis();
        base = flat.base();
    } else {
        fail(ErrorCode::DimensionMismatch, "flat ambient does not match the branch");
    }
    for (const auto& l : kernel(dirs, n)) {
        Series s = linear_combination(l, alpha.coords, branch_params(alpha.coords, alpha.params));
        if (!s.is_bounded())
            return false;
        Series diff = s - Series::constant(dot(l, base), s.params());
        if (!diff.params()->is_zero(diff.standard_part()))
            return false;
    }
    return true;
}

std::optional<MinimalityWitness> minimality_witness(const AsymptoticFlat& flat, const std::vector<int>& subset,
                                                    const std::vector<NFElem>& point) {
    const int n = flat.size();
    Mat all, sub;
    for (const auto& g : flat.dirs)
        all.push_back(eval_all(g, point));
    for (int s : subset) {
        if (s < 0 || s >= static_cast<int>(all.size()))
            fail(ErrorCode::DimensionMismatch, "subset index out of range");
        sub.push_back(all[s]);
    }
    PuiseuxBranch b = specialize(flat.source, point);
    for (const auto& l : kernel(sub, n)) {
        bool separates = false;
        for (const auto& a : all)
            separates = separates || !dot(l, a).is_zero();
        if (!separates)
            continue;
        Series s = linear_combination(l, b.coords, no_parameters());
        auto val = s.valuation();
        check_invariant(val && *val < 0, "separating functional must have negative valuation along the branch");
        return MinimalityWitness{l, *val};
    }
    return std::nullopt;
}

FlatDecomposition flat_decompose(const PuiseuxBranch& alpha, const Subspace& h) {
    AsymptoticFlat a = flat_of_branch(alpha, h.mode());
    if (h.ambient() != a.ambient())
        fail(ErrorCode::DimensionMismatch, "subspace ambient does not match the branch");
    const auto points = a.sample_points();
    for (const auto& pt : points)
        if (!a.at(pt).direction().contains(h))
            fail(ErrorCode::NotContained, "subspace is not contained in the direction of the asymptotic flat");
    const int n = a.size();
    const bool complex = h.mode() == ScalarMode::Complex;
    std::vector<Vec> cols;
    for (int j = 0; j < n; ++j) {
        Vec e = unit_vec(n, j);
        Vec p = h.project_to_complement(complex ? realify(e) : e);
        cols.push_back(complex ? complexify(p) : p);
    }
    std::vector<Series> coords;
    for (int i = 0; i < n; ++i) {
        std::vector<NFElem> row;
        for (int j = 0; j < n; ++j)
            row.push_back(cols[j][i]);
        coords.push_back(linear_combination(row, a.source.coords, a.params));
    }
    FlatDecomposition out;
    out.complement = h.orth_complement();
    out.projected = PuiseuxBranch(coords, a.params, alpha.multiplicity);
    out.projected_flat = flat_of_branch(out.projected, h.mode());
    for (const auto& pt : points) {
        Flat whole = a.at(pt), part = out.projected_flat.at(pt);
        check_invariant(out.complement.contains(part.direction()), "projected flat leaves the complement");
        check_invariant(h.intersect(part.direction()).dim() == 0, "decomposition is not direct");
        check_invariant(Flat(part.base(), h.sum(part.direction())) == whole, "reassembled flat differs");
    }
    return out;
}

// ------------------------------------------------------- mu-stabilizers

std::string to_string(StabAnswer a) {
    switch (a) {
    case StabAnswer::Yes:
        return "yes";
    case StabAnswer::No:
        return "no";
    case StabAnswer::Unknown:
        return "unknown";
    }
    return "unknown";
}

StabResult mu_stab_member(const Vec& v, const PuiseuxBranch& alpha, const std::vector<Poly>& system,
                          const Rational& order, int max_steps) {
    const int n = alpha.size();
    if (static_cast<int>(v.size()) != n)
        fail(ErrorCode::DimensionMismatch, "translation vector length differs from the branch");
    for (const auto& f : system)
        if (f.nvars() != n)
            fail(ErrorCode::DimensionMismatch, "system polynomial has the wrong number of variables");
    if (!on_variety(system, alpha, order))
        fail(ErrorCode::PreconditionFailed, "branch residual does not exceed the requested order");
    ParamPtr params = branch_params(alpha.coords, alpha.params);
    StabResult res;
    if (is_zero_vec(v)) {
        res.answer = StabAnswer::Yes;
        res.witness = alpha;
        res.reason = "zero translation";
        return res;
    }
    std::vector<Series> gamma;
    for (int i = 0; i < n; ++i)
        gamma.push_back(alpha.coords[i].with_params(params) + Series::constant(v[i], params));

    // Obstruction: every derivative of f_i at gamma has valuation at least
    // that of f_i(gamma), so f_i(gamma + delta) keeps its leading term.
    for (std::size_t i = 0; i < system.size(); ++i) {
        Series r = eval_poly(system[i], gamma, params);
        std::optional<Rational> q;
        try {
            q = r.valuation();
        } catch (const MathError&) {
            continue;
        }
        if (!q || *q > order)
            continue;
        bool dominated = true;
        for (const auto& d : all_derivatives(system[i])) {
            auto bound = eval_poly(d, gamma, params).valuation_bound();
            if (bound && *bound < *q) {
                dominated = false;
                break;
            }
        }
        if (dominated) {
            res.answer = StabAnswer::No;
            res.equation = static_cast<int>(i);
            res.exponent = *q;
            res.coefficient = r.coefficient(*q);
            res.reason = "leading residual term cannot be cancelled by a positive-valuation perturbation";
            return res;
        }
    }

    std::vector<std::vector<Poly>> jac(system.size());
    for (std::size_t i = 0; i < system.size(); ++i)
        for (int k = 0; k < n; ++k)
            jac[i].push_back(system[i].derivative(k));
    std::vector<Series> beta = gamma;
    for (int step = 0; step < max_steps; ++step) {
        std::vector<Series> r;
        bool done = true;
        for (const auto& f : system) {
            r.push_back(eval_poly(f, beta, params));
            done = done && residual_of(r.back()).accepted(order);
        }
        if (done) {
            PuiseuxBranch w(beta, params, alpha.multiplicity);
            bool close = true;
            for (int k = 0; k < n; ++k) {
                Series d = beta[k] - gamma[k];
                close = close && (d.terms().empty() || d.terms().begin()->first > 0);
            }
            check_invariant(close && on_variety(system, w, order), "lifted witness failed verification");
            res.answer = StabAnswer::Yes;
            res.witness = std::move(w);
            res.reason = "lifted to a branch on the variety";
            return res;
        }
        std::optional<Rational> q;
        for (const auto& s : r) {
            if (residual_of(s).accepted(order))
                continue;
            if (s.terms().empty()) {
                res.reason = "branch truncation reached before the requested order";
                return res;
            }
            Rational e = s.exponent(s.terms().begin()->first);
            q = q ? std::min(*q, e) : e;
        }
        std::vector<std::vector<Series>> jv(system.size());
        std::vector<std::optional<Rational>> lambda(n);
        for (std::size_t i = 0; i < system.size(); ++i)
            for (int k = 0; k < n; ++k) {
                jv[i].push_back(eval_poly(jac[i][k], beta, params));
                const Series& s = jv[i][k];
                if (s.terms().empty())
                    continue;
                Rational e = s.exponent(s.terms().begin()->first);
                lambda[k] = lambda[k] ? std::min(*lambda[k], e) : e;
            }
        std::vector<std::pair<Rational, int>> vars;
        for (int k = 0; k < n; ++k)
            if (lambda[k] && *q - *lambda[k] > 0)
                vars.emplace_back(*q - *lambda[k], k);
        std::sort(vars.begin(), vars.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        if (vars.empty()) {
            res.reason = "no coordinate can cancel the residual at exponent " + format_rational(*q);
            return res;
        }
        Mat m(system.size());
        Vec rhs;
        try {
            for (std::size_t i = 0; i < system.size(); ++i) {
                for (const auto& [p, k] : vars) {
                    auto c = constant_value(jv[i][k].coefficient(*lambda[k]));
                    if (!c) {
                        res.reason = "parameter-dependent linearization";
                        return res;
                    }
                    m[i].push_back(*c);
                }
                auto c = constant_value(r[i].coefficient(*q));
                if (!c) {
                    res.reason = "parameter-dependent residual";
                    return res;
                }
                rhs.push_back(-*c);
            }
        } catch (const MathError&) {
            res.reason = "branch truncation reached before the requested order";
            return res;
        }
        auto sol = solve(m, rhs, static_cast<int>(vars.size()));
        if (!sol) {
            res.reason = "linearized system has no solution at exponent " + format_rational(*q);
            return res;
        }
        for (std::size_t j = 0; j < vars.size(); ++j)
            if (!(*sol)[j].is_zero())
                beta[vars[j].second] = beta[vars[j].second] + Series::monomial(vars[j].first, (*sol)[j], params);
    }
    res.reason = "lifting did not reach the requested order";
    return res;
}

} // namespace torflat
