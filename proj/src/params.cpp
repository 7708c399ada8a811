#include "torflat/params.hpp"

#include "torflat/errors.hpp"

#include <sstream>

namespace torflat {

namespace {

/// Solves a constraint for a single unassigned parameter when, after
/// substituting the assigned values, it is linear in that parameter.
bool try_solve(const Poly& c, std::vector<std::optional<NFElem>>& values) {
    Poly p = c;
    for (std::size_t v = 0; v < values.size(); ++v)
        if (values[v])
            p = p.substitute(static_cast<int>(v), *values[v]);
    int free_var = -1;
    for (const auto& [m, coef] : p.terms())
        for (std::size_t v = 0; v < m.size(); ++v)
            if (m[v] > 0) {
                if (free_var >= 0 && free_var != static_cast<int>(v))
                    return false;
                free_var = static_cast<int>(v);
            }
    if (free_var < 0 || p.degree(free_var) != 1)
        return false;
    auto co = p.coefficients_in(free_var);
    NFElem a = co[1].constant_term(), b = co[0].constant_term();
    if (a.is_zero())
        return false;
    values[free_var] = -b / a;
    return true;
}

} // namespace

ParameterSystem::ParameterSystem(std::vector<std::string> names, std::vector<Poly> constraints, std::uint64_t seed,
                                 int samples)
    : names_(std::move(names)), constraints_(std::move(constraints)) {
    const int k = size();
    for (const auto& c : constraints_)
        if (c.nvars() != k)
            fail(ErrorCode::ParameterMismatch, "constraint uses a different number of parameters");
    for (const auto& c : constraints_) {
        if (c.terms().size() != 2)
            continue;
        // Recognize v*w - 1 (up to a common nonzero factor).
        NFElem cst = c.constant_term();
        if (cst.is_zero())
            continue;
        for (const auto& [m, coef] : c.terms()) {
            int deg = 0, a = -1, b = -1;
            for (int v = 0; v < k; ++v) {
                deg += m[v];
                if (m[v] == 1)
                    (a < 0 ? a : b) = v;
            }
            if (deg == 2 && a >= 0 && b >= 0 && coef == -cst)
                inverse_pairs_.emplace_back(a, b);
        }
    }
    if (k == 0) {
        for (const auto& c : constraints_)
            if (!c.is_zero())
                fail(ErrorCode::EmptyParameterDomain, "nonzero constant constraint");
        samples_.assign(1, {});
        return;
    }
    Rng rng(seed);
    int attempts = 0;
    while (static_cast<int>(samples_.size()) < samples) {
        if (++attempts > 50 * samples + 50) {
            if (samples_.empty())
                fail(ErrorCode::EmptyParameterDomain, "could not find a point on the parameter domain");
            fail(ErrorCode::SamplerFailure, "parameter sampler could not reach the requested sample count");
        }
        std::vector<std::optional<NFElem>> values(k);
        std::vector<int> assigned;
        bool progress = true;
        while (progress) {
            progress = false;
            for (const auto& c : constraints_)
                if (try_solve(c, values))
                    progress = true;
            if (progress)
                continue;
            for (int v = 0; v < k; ++v)
                if (!values[v]) {
                    Rational r = 0;
                    while (r == 0)
                        r = rng.uniform_rational(97, 13);
                    values[v] = NFElem(r);
                    assigned.push_back(v);
                    progress = true;
                    break;
                }
        }
        std::vector<NFElem> point;
        for (auto& v : values)
            point.push_back(*v);
        bool ok = true;
        for (const auto& c : constraints_)
            ok = ok && c.eval(point).is_zero();
        if (ok) {
            if (samples_.empty())
                chart_ = assigned;
            samples_.push_back(std::move(point));
        }
    }
}

std::optional<std::vector<NFElem>> ParameterSystem::complete(const std::vector<NFElem>& chart_values) const {
    if (chart_values.size() != chart_.size())
        fail(ErrorCode::DimensionMismatch, "chart has a different number of coordinates");
    std::vector<std::optional<NFElem>> values(size());
    for (std::size_t j = 0; j < chart_.size(); ++j)
        values[chart_[j]] = chart_values[j];
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& c : constraints_)
            if (try_solve(c, values))
                progress = true;
    }
    std::vector<NFElem> point;
    for (auto& v : values) {
        if (!v)
            return std::nullopt;
        point.push_back(*v);
    }
    for (const auto& c : constraints_)
        if (!c.eval(point).is_zero())
            return std::nullopt;
    return point;
}

bool ParameterSystem::is_zero(const Poly& p) const {
    if (p.is_zero())
        return true;
    if (p.nvars() != size())
        fail(ErrorCode::ParameterMismatch, "polynomial does not match the parameter system");
    if (p.is_constant())
        return false;
    for (const auto& s : samples_)
        if (!p.eval(s).is_zero())
            return false;
    return true;
}

std::optional<int> ParameterSystem::inverse_of(int var) const {
    for (const auto& [a, b] : inverse_pairs_) {
        if (a == var)
            return b;
        if (b == var)
            return a;
    }
    return std::nullopt;
}

bool ParameterSystem::is_unit(const Poly& p) const { return inverse_if_unit(p).has_value(); }

std::optional<Poly> ParameterSystem::inverse_if_unit(const Poly& p_in) const {
    Poly p = simplify(p_in);
    if (p.terms().size() != 1)
        return std::nullopt;
    const auto& [m, c] = *p.terms().begin();
    Monomial inv(size(), 0);
    for (int v = 0; v < size(); ++v) {
        if (m[v] == 0)
            continue;
        auto w = inverse_of(v);
        if (!w)
            return std::nullopt;
        inv[*w] += m[v];
    }
    return simplify(Poly::monomial(inv, c.inverse()));
}

Poly ParameterSystem::simplify(const Poly& p) const {
    if (inverse_pairs_.empty())
        return p;
    Poly r(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        Monomial d = m;
        for (const auto& [a, b] : inverse_pairs_) {
            int k = std::min(d[a], d[b]);
            d[a] -= k;
            d[b] -= k;
        }
        r.add_term(d, c);
    }
    return r;
}

bool ParameterSystem::same_as(const ParameterSystem& o) const {
    return this == &o || (names_ == o.names_ && constraints_ == o.constraints_);
}

std::string ParameterSystem::describe() const {
    std::ostringstream os;
    os << "params(";
    for (std::size_t i = 0; i < names_.size(); ++i)
        os << (i ? "," : "") << names_[i];
    os << ")";
    for (const auto& c : constraints_)
        os << " " << c.str(names_) << "=0";
    return os.str();
}

ParamPtr no_parameters() {
    static const ParamPtr empty = std::make_shared<const ParameterSystem>(std::vector<std::string>{}, std::vector<Poly>{});
    return empty;
}

ParamPtr common_parameters(const ParamPtr& a, const ParamPtr& b) {
    if (!a || a->size() == 0)
        return b ? b : no_parameters();
    if (!b || b->size() == 0)
        return a;
    if (a->same_as(*b))
        return a;
    fail(ErrorCode::ParameterMismatch, "incompatible parameter systems: " + a->describe() + " vs " + b->describe());
}

} // namespace torflat
