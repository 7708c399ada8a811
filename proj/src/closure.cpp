#include "torflat/closure.hpp"

#include "torflat/errors.hpp"

#include <algorithm>
#include <sstream>

namespace torflat {

namespace {

Subspace span_in_mode(ScalarMode mode, int n, const Mat& vs) {
    return mode == ScalarMode::Complex ? Subspace::complex_span(n, vs) : Subspace::span(n, ScalarMode::Real, vs);
}

/// Matrix (rows) of the orthogonal projection onto the complement of v, as a
/// K-linear map on K^n.
Mat complement_projection(const Subspace& v, ScalarMode mode, int n) {
    const bool complex = mode == ScalarMode::Complex;
    Mat cols;
    for (int j = 0; j < n; ++j) {
        Vec e = unit_vec(n, j);
        Vec p = v.project_to_complement(complex ? realify(e) : e);
        cols.push_back(complex ? complexify(p) : p);
    }
    return transpose(cols, n);
}

std::vector<std::vector<NFElem>> samples_of(const ParamPtr& p) {
    if (!p || p->size() == 0)
        return {{}};
    return p->samples();
}

Vec eval_point(const std::vector<Poly>& pt, const std::vector<NFElem>& at) {
    Vec out;
    for (const auto& p : pt)
        out.push_back(p.eval(at));
    return out;
}

} // namespace

int FlatFamily::ambient() const {
    if (members.empty())
        fail(ErrorCode::EmptyFamily, "family has no members");
    return members[0].ambient();
}

ScalarMode FlatFamily::mode() const {
    if (members.empty())
        fail(ErrorCode::EmptyFamily, "family has no members");
    return members[0].mode;
}

ParamPtr FlatFamily::params() const {
    ParamPtr p = no_parameters();
    for (const auto& m : members)
        p = common_parameters(p, m.params ? m.params : no_parameters());
    return p;
}

int FlatFamily::k() const {
    int k = 0;
    for (const auto& m : members)
        k = std::max(k, m.dim);
    return k;
}

bool TranslateSet::parameter_free() const {
    for (const auto& pt : points)
        for (const auto& p : pt)
            if (!p.is_constant())
                return false;
    return true;
}

bool TranslateSet::same_as(const TranslateSet& o) const {
    if (points.size() != o.points.size())
        return false;
    ParamPtr a = params ? params : no_parameters(), b = o.params ? o.params : no_parameters();
    if (!a->same_as(*b))
        return false;
    std::vector<bool> used(o.points.size(), false);
    for (const auto& p : points) {
        bool matched = false;
        for (std::size_t j = 0; j < o.points.size() && !matched; ++j) {
            if (used[j] || o.points[j].size() != p.size())
                continue;
            bool eq = true;
            for (std::size_t i = 0; i < p.size() && eq; ++i)
                eq = a->equal(p[i], o.points[j][i]);
            if (eq)
                used[j] = matched = true;
        }
        if (!matched)
            return false;
    }
    return true;
}

std::string TranslateSet::str() const {
    std::vector<std::string> names = params ? params->names() : std::vector<std::string>{};
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < points.size(); ++k) {
        os << (k ? ", " : "") << "(";
        for (std::size_t i = 0; i < points[k].size(); ++i)
            os << (i ? ", " : "") << points[k][i].str(names);
        os << ")";
    }
    os << "}";
    if (params && params->size() > 0)
        os << " : " << params->describe();
    return os.str();
}

SpanResult family_span(const FlatFamily& family) {
    if (family.members.empty())
        fail(ErrorCode::EmptyFamily, "family has no members");
    const ScalarMode mode = family.mode();
    const int n = family.members[0].size();
    Mat monomial_vectors;
    Subspace sampled = Subspace::zero(family.ambient(), mode);
    for (const auto& m : family.members) {
        if (m.size() != n || m.mode != mode)
            fail(ErrorCode::MixedAmbient, "family members differ in ambient dimension or mode");
        ParamPtr p = m.params ? m.params : no_parameters();
        for (const auto& g : m.dirs) {
            std::map<Monomial, Vec> by_monomial;
            for (int i = 0; i < n; ++i) {
                const Poly gi = p->simplify(g[i]);
                for (const auto& [mono, c] : gi.terms()) {
                    auto it = by_monomial.try_emplace(mono, zero_vec(n)).first;
                    it->second[i] = c;
                }
            }
            for (auto& [mono, v] : by_monomial)
                monomial_vectors.push_back(std::move(v));
        }
        for (const auto& pt : m.sample_points())
            sampled = sampled.sum(m.at(pt).direction());
    }
    Subspace upper = span_in_mode(mode, n, monomial_vectors);
    check_invariant(upper.contains(sampled), "sampled directions escape the monomial span");
    SpanResult r;
    r.certified = upper.dim() == sampled.dim();
    r.span = r.certified ? upper : sampled;
    return r;
}

TranslateSet translate_set(const FlatFamily& family, const Subspace& v) {
    if (family.members.empty())
        fail(ErrorCode::EmptyFamily, "family has no members");
    if (v.ambient() != family.ambient())
        fail(ErrorCode::DimensionMismatch, "subspace ambient does not match the family");
    TranslateSet out;
    out.params = family.params();
    const int n = family.members[0].size();
    Mat proj = complement_projection(v, family.mode(), n);
    for (const auto& m : family.members) {
        for (const auto& pt : m.sample_points())
            if (!v.contains(m.at(pt).direction()))
                fail(ErrorCode::NotContained, "member direction is not contained in the subspace");
        const int k = out.params->size();
        std::vector<Poly> point;
        for (int i = 0; i < n; ++i) {
            Poly s(k);
            for (int j = 0; j < n; ++j)
                if (!proj[i][j].is_zero())
                    s += lift_constant_poly(m.base[j], k) * proj[i][j];
            point.push_back(out.params->simplify(s));
        }
        out.points.push_back(std::move(point));
    }
    return out;
}

ClosureDescription assemble_closure(const std::vector<FlatFamily>& families, const Lattice& lattice,
                                    const std::vector<Poly>& variety, const std::vector<std::string>& variables) {
    ClosureDescription desc;
    desc.variety = variety;
    desc.variables = variables;
    desc.lattice = lattice;
    std::optional<int> ambient;
    std::optional<ScalarMode> mode;
    for (const auto& f : families) {
        if (f.members.empty())
            fail(ErrorCode::EmptyFamily, "family '" + f.name + "' has no members");
        for (const auto& m : f.members) {
            if (ambient && *ambient != m.ambient())
                fail(ErrorCode::MixedAmbient, "families live in different ambient spaces");
            if (mode && *mode != m.mode)
                fail(ErrorCode::MixedAmbient, "families mix real and complex mode");
            ambient = m.ambient();
            mode = m.mode;
        }
    }
    if (mode)
        desc.mode = *mode;
    if (ambient && lattice.dim() != *ambient)
        fail(ErrorCode::DimensionMismatch, "lattice rank does not match the ambient dimension");

    for (const auto& f : families) {
        FlatFamily unbounded{f.name, {}};
        for (const auto& m : f.members)
            if (m.dim > 0)
                unbounded.members.push_back(m);
        if (unbounded.members.empty()) {
            desc.notes.push_back("family '" + f.name + "' is bounded and lies in X");
            continue;
        }
        ClosureComponent c;
        c.family = f.name;
        SpanResult s = family_span(unbounded);
        c.v = s.span;
        c.span_certified = s.certified;
        c.c = translate_set(unbounded, c.v);
        c.v_lambda = lambda_saturate(c.v, lattice);
        Subspace perp = c.v.orth_complement();
        for (const auto& pt : samples_of(c.c.params))
            for (const auto& p : c.c.points) {
                Vec x = eval_point(p, pt);
                check_invariant(perp.contains(desc.mode == ScalarMode::Complex ? realify(x) : x),
                                "translate point leaves the orthogonal complement");
            }
        if (!s.certified)
            desc.notes.push_back("span of family '" + f.name + "' taken from sampled ranks");
        bool duplicate = false;
        for (const auto& prev : desc.components)
            duplicate = duplicate || (prev.v == c.v && prev.c.same_as(c.c));
        if (duplicate) {
            desc.notes.push_back("family '" + f.name + "' duplicates an earlier component");
            continue;
        }
        if (!c.c.parameter_free())
            desc.notes.push_back("translate set of family '" + f.name +
                                 "' is a parametrized constructible set; its closure is not computed");
        desc.components.push_back(std::move(c));
    }
    for (auto& c : desc.components) {
        c.maximal = true;
        for (const auto& o : desc.components)
            if (o.v.dim() > c.v.dim() && o.v.contains(c.v))
                c.maximal = false;
    }
    return desc;
}

int translate_set_dim(const TranslateSet& c) {
    ParamPtr p = c.params ? c.params : no_parameters();
    const int k = p->size();
    if (k == 0)
        return 0;
    int best = 0;
    for (const auto& pt : p->samples()) {
        Mat g;
        for (const auto& h : p->constraints()) {
            Vec row;
            for (int j = 0; j < k; ++j)
                row.push_back(h.derivative(j).eval(pt));
            g.push_back(row);
        }
        Mat tangent = kernel(g, k);
        for (const auto& point : c.points) {
            Mat jt;
            for (const auto& coord : point) {
                Vec grad;
                for (int j = 0; j < k; ++j)
                    grad.push_back(coord.derivative(j).eval(pt));
                Vec row;
                for (const auto& t : tangent)
                    row.push_back(dot(grad, t));
                jt.push_back(row);
            }
            best = std::max(best, rank(jt, static_cast<int>(tangent.size())));
        }
    }
    return best;
}

bool ClauseReport::all_ok() const {
    for (const auto& e : entries)
        if (!e.dim_ok || !e.finite_ok)
            return false;
    return true;
}

ClauseReport clause_checks(const ClosureDescription& desc, int dim_x) {
    ClauseReport r;
    r.dim_x = dim_x;
    for (std::size_t i = 0; i < desc.components.size(); ++i) {
        const auto& c = desc.components[i];
        ClauseEntry e;
        e.component = static_cast<int>(i);
        e.dim_c = translate_set_dim(c.c);
        e.dim_ok = e.dim_c < dim_x;
        e.maximal = c.maximal;
        e.finite = e.dim_c == 0;
        e.finite_ok = !e.maximal || e.finite;
        r.entries.push_back(e);
    }
    return r;
}

Subtorus subtorus_of(const Subspace& v_lambda, const Lattice& lattice) {
    if (v_lambda.ambient() != lattice.dim())
        fail(ErrorCode::DimensionMismatch, "lattice rank does not match the subspace ambient");
    RatMat rows;
    for (const auto& b : v_lambda.basis()) {
        Vec c = lattice.to_lattice_coords(b);
        std::vector<Rational> r;
        for (const auto& x : c) {
            if (!x.is_rational())
                fail(ErrorCode::PreconditionFailed, "subspace is not defined over the lattice");
            r.push_back(x.rational_value());
        }
        rows.push_back(r);
    }
    Subtorus t;
    t.dim = v_lambda.dim();
    t.lattice_basis = saturated_integer_basis(rows, lattice.dim());
    return t;
}

std::vector<Subtorus> torus_description(const ClosureDescription& desc) {
    std::vector<Subtorus> out;
    for (std::size_t i = 0; i < desc.components.size(); ++i) {
        Subtorus t = subtorus_of(desc.components[i].v_lambda, desc.lattice);
        t.component = static_cast<int>(i);
        t.c = desc.components[i].c;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace torflat
