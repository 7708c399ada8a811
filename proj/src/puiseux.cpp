#include "torflat/puiseux.hpp"

#include "torflat/errors.hpp"

#include <numeric>
#include <sstream>

namespace torflat {

namespace {

int param_count(const ParamPtr& p) { return p ? p->size() : 0; }

std::optional<Rational> min_opt(const std::optional<Rational>& a, const std::optional<Rational>& b) {
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

std::optional<Rational> add_opt(const std::optional<Rational>& a, const std::optional<Rational>& b) {
    if (!a || !b)
        return std::nullopt;
    return *a + *b;
}

} // namespace

Poly lift_constant_poly(const Poly& p, int nvars) {
    if (p.nvars() == nvars)
        return p;
    if (p.nvars() != 0)
        fail(ErrorCode::ParameterMismatch, "coefficient polynomial uses a different parameter set");
    return Poly::constant(nvars, p.constant_term());
}

Series::Series(ParamPtr params, int ramification) : params_(params ? std::move(params) : no_parameters()), e_(ramification) {
    if (e_ < 1)
        fail(ErrorCode::PreconditionFailed, "ramification must be positive");
}

Series Series::constant(const Poly& c, ParamPtr params) { return monomial(Rational(0), c, std::move(params)); }

Series Series::constant(const NFElem& c, ParamPtr params) {
    int k = param_count(params);
    return monomial(Rational(0), Poly::constant(k, c), std::move(params));
}

Series Series::monomial(const Rational& q, const Poly& c, ParamPtr params) {
    Series s(std::move(params), static_cast<int>(q.get_den().get_si()));
    Rational key = q * s.e_;
    if (!c.is_zero())
        s.terms_.emplace(key.get_num().get_si(), lift_constant_poly(c, s.params_->size()));
    s.prune();
    return s;
}

Series Series::monomial(const Rational& q, const NFElem& c, ParamPtr params) {
    int k = param_count(params);
    return monomial(q, Poly::constant(k, c), std::move(params));
}

Series Series::from_terms(ParamPtr params, int ramification, std::map<long, Poly> terms,
                          std::optional<Rational> truncation) {
    Series s(std::move(params), ramification);
    for (auto& [k, c] : terms)
        if (!c.is_zero())
            s.terms_.emplace(k, lift_constant_poly(c, s.params_->size()));
    s.trunc_ = std::move(truncation);
    if (s.trunc_)
        s.trunc_->canonicalize();
    if (s.trunc_)
        s = s.truncated(*s.trunc_);
    s.prune();
    return s;
}

void Series::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (params_->is_zero(it->second)) {
            it = terms_.erase(it);
        } else {
            it->second = params_->simplify(it->second);
            ++it;
        }
    }
}

Poly Series::coefficient(const Rational& q) const {
    if (trunc_ && q > *trunc_)
        fail(ErrorCode::TruncationTooLow, "coefficient beyond the truncation order");
    Rational key = q * e_;
    if (key.get_den() != 1)
        return Poly(params_->size());
    auto it = terms_.find(key.get_num().get_si());
    return it == terms_.end() ? Poly(params_->size()) : it->second;
}

Series Series::with_ramification(int e) const {
    if (e % e_ != 0)
        fail(ErrorCode::PreconditionFailed, "new ramification must be a multiple of the old one");
    Series s(params_, e);
    const long f = e / e_;
    for (const auto& [k, c] : terms_)
        s.terms_.emplace(k * f, c);
    s.trunc_ = trunc_;
    return s;
}

Series Series::with_params(const ParamPtr& params) const {
    if (params_->same_as(*params))
        return *this;
    if (params_->size() != 0)
        fail(ErrorCode::ParameterMismatch, "incompatible parameter systems");
    Series s(params, e_);
    for (const auto& [k, c] : terms_)
        s.terms_.emplace(k, lift_constant_poly(c, params->size()));
    s.trunc_ = trunc_;
    return s;
}

Series Series::truncated(const Rational& q) const {
    Series s = *this;
    if (!s.trunc_ || q < *s.trunc_)
        s.trunc_ = q;
    for (auto it = s.terms_.begin(); it != s.terms_.end();) {
        if (s.exponent(it->first) > *s.trunc_)
            it = s.terms_.erase(it);
        else
            ++it;
    }
    return s;
}

namespace {

std::pair<Series, Series> unify2(const Series& a, const Series& b) {
    ParamPtr p = common_parameters(a.params(), b.params());
    int e = std::lcm(a.ramification(), b.ramification());
    return {a.with_params(p).with_ramification(e), b.with_params(p).with_ramification(e)};
}

} // namespace

std::vector<Series> unify(const std::vector<Series>& s) {
    ParamPtr p = no_parameters();
    int e = 1;
    for (const auto& x : s) {
        p = common_parameters(p, x.params());
        e = std::lcm(e, x.ramification());
    }
    std::vector<Series> out;
    for (const auto& x : s)
        out.push_back(x.with_params(p).with_ramification(e));
    return out;
}

Series Series::operator-() const {
    Series s = *this;
    for (auto& [k, c] : s.terms_)
        c = -c;
    return s;
}

Series operator+(const Series& a_in, const Series& b_in) {
    auto [a, b] = unify2(a_in, b_in);
    Series s(a.params_, a.e_);
    s.trunc_ = min_opt(a.trunc_, b.trunc_);
    s.terms_ = a.terms_;
    for (const auto& [k, c] : b.terms_) {
        auto it = s.terms_.find(k);
        if (it == s.terms_.end())
            s.terms_.emplace(k, c);
        else
            it->second += c;
    }
    for (auto it = s.terms_.begin(); it != s.terms_.end();) {
        if (it->second.is_zero() || (s.trunc_ && s.exponent(it->first) > *s.trunc_))
            it = s.terms_.erase(it);
        else
            ++it;
    }
    s.prune();
    return s;
}

Series operator-(const Series& a, const Series& b) { return a + (-b); }

Series operator*(const Series& a_in, const Series& b_in) {
    auto [a, b] = unify2(a_in, b_in);
    Series s(a.params_, a.e_);
    if (a.is_exact_zero() || b.is_exact_zero())
        return s;
    auto va = a.valuation_bound(), vb = b.valuation_bound();
    s.trunc_ = min_opt(add_opt(a.trunc_, vb), add_opt(b.trunc_, va));
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) {
            long k = ka + kb;
            if (s.trunc_ && s.exponent(k) > *s.trunc_)
                continue;
            auto it = s.terms_.find(k);
            if (it == s.terms_.end())
                s.terms_.emplace(k, ca * cb);
            else
                it->second += ca * cb;
        }
    for (auto it = s.terms_.begin(); it != s.terms_.end();)
        it = it->second.is_zero() ? s.terms_.erase(it) : std::next(it);
    s.prune();
    return s;
}

Series Series::scaled(const Poly& c) const { return *this * Series::constant(c, params_); }

Series Series::pow(unsigned k) const {
    Series r = Series::constant(NFElem(1), params_), b = *this;
    while (k) {
        if (k & 1)
            r = r * b;
        k >>= 1;
        if (k)
            b = b * b;
    }
    return r;
}

bool operator==(const Series& a_in, const Series& b_in) {
    auto [a, b] = unify2(a_in, b_in);
    if (a.trunc_ != b.trunc_ || a.terms_.size() != b.terms_.size())
        return false;
    auto it = b.terms_.begin();
    for (const auto& [k, c] : a.terms_) {
        if (k != it->first || !a.params_->equal(c, it->second))
            return false;
        ++it;
    }
    return true;
}

std::optional<Rational> Series::valuation_bound() const {
    if (!terms_.empty())
        return exponent(terms_.begin()->first);
    return trunc_;
}

std::optional<Rational> Series::valuation() const {
    if (terms_.empty()) {
        if (trunc_)
            fail(ErrorCode::UncertifiableZero, "cannot certify zero: all known terms vanish up to order " +
                                                   trunc_->get_str());
        return std::nullopt;
    }
    const auto& [k, c] = *terms_.begin();
    if (!params_->is_unit(c))
        fail(ErrorCode::ParameterDependentLeadingTerm,
             "leading coefficient " + c.str(params_->names()) + " may vanish on the parameter domain");
    return exponent(k);
}

bool Series::is_bounded() const { return terms_.empty() || terms_.begin()->first >= 0; }

Poly Series::standard_part() const {
    if (!is_bounded())
        fail(ErrorCode::NegativeValuation, "series has negative valuation (unbounded)");
    return coefficient(Rational(0));
}

NFElem Series::eval(const Rational& w, const std::vector<NFElem>& param_point) const {
    if (trunc_)
        fail(ErrorCode::PreconditionFailed, "cannot evaluate a truncated series exactly");
    if (w == 0)
        fail(ErrorCode::DivisionByZero, "series evaluated at z = 0");
    NFElem acc(0);
    NFElem wv(w);
    for (const auto& [k, c] : terms_) {
        NFElem p = k >= 0 ? wv.pow(static_cast<unsigned long>(k)) : wv.inverse().pow(static_cast<unsigned long>(-k));
        acc += c.eval(param_point) * p;
    }
    return acc;
}

std::string Series::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.str(params_->names()) << ")";
        Rational q = exponent(k);
        if (q != 0)
            os << "*z^" << q.get_str();
    }
    if (first)
        os << "0";
    if (trunc_)
        os << " + O(z^>" << trunc_->get_str() << ")";
    return os.str();
}

// ---------------------------------------------------------------- branches

PuiseuxBranch::PuiseuxBranch(std::vector<Series> c, ParamPtr p, int mult) : multiplicity(mult) {
    ParamPtr ps = p ? p : no_parameters();
    for (const auto& s : c)
        ps = common_parameters(ps, s.params());
    params = ps;
    c.push_back(Series(ps));
    coords = unify(c);
    coords.pop_back();
}

int PuiseuxBranch::ramification() const { return coords.empty() ? 1 : coords[0].ramification(); }

std::optional<Rational> PuiseuxBranch::truncation() const {
    std::optional<Rational> t;
    for (const auto& c : coords)
        t = min_opt(t, c.truncation());
    return t;
}

std::vector<NFElem> PuiseuxBranch::eval(const Rational& w, const std::vector<NFElem>& param_point) const {
    std::vector<NFElem> out;
    for (const auto& c : coords)
        out.push_back(c.eval(w, param_point));
    return out;
}

std::string PuiseuxBranch::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i)
        os << (i ? ", " : "") << coords[i].str();
    os << ")";
    return os.str();
}

Series eval_poly(const Poly& f, const std::vector<Series>& args_in, const ParamPtr& params) {
    if (static_cast<int>(args_in.size()) != f.nvars())
        fail(ErrorCode::DimensionMismatch, "polynomial and branch have different numbers of variables");
    std::vector<Series> ext = args_in;
    ext.push_back(Series(params));
    ext = unify(ext);
    ParamPtr p = ext.back().params();
    const int e = ext.back().ramification();
    ext.pop_back();
    std::vector<std::vector<Series>> powers(ext.size());
    for (std::size_t v = 0; v < ext.size(); ++v) {
        powers[v].push_back(Series::constant(NFElem(1), p));
        for (int d = 1; d <= f.degree(static_cast<int>(v)); ++d)
            powers[v].push_back(powers[v].back() * ext[v]);
    }
    Series acc = Series(p, e);
    for (const auto& [m, c] : f.terms()) {
        Series t = Series::constant(c, p);
        for (std::size_t v = 0; v < m.size(); ++v)
            if (m[v])
                t = t * powers[v][m[v]];
        acc = acc + t;
    }
    return acc;
}

bool ResidualBound::accepted(const Rational& q) const {
    switch (kind) {
    case Kind::Infinite: return true;
    case Kind::AtLeast: return value >= q;
    case Kind::Exact: return value > q;
    }
    return false;
}

std::string ResidualBound::str() const {
    switch (kind) {
    case Kind::Infinite: return "inf";
    case Kind::AtLeast: return ">" + value.get_str();
    case Kind::Exact: return value.get_str();
    }
    return "?";
}

ResidualBound residual_of(const Series& s) {
    ResidualBound r;
    if (!s.terms().empty()) {
        r.kind = ResidualBound::Kind::Exact;
        r.value = s.exponent(s.terms().begin()->first);
    } else if (s.truncation()) {
        r.kind = ResidualBound::Kind::AtLeast;
        r.value = *s.truncation();
    }
    return r;
}

std::vector<ResidualBound> residual_valuation(const std::vector<Poly>& system, const PuiseuxBranch& branch) {
    std::vector<ResidualBound> out;
    for (const auto& f : system)
        out.push_back(residual_of(eval_poly(f, branch.coords, branch.params)));
    return out;
}

bool on_variety(const std::vector<Poly>& system, const PuiseuxBranch& branch, const Rational& order) {
    for (const auto& r : residual_valuation(system, branch))
        if (!r.accepted(order))
            return false;
    return true;
}

} // namespace torflat
