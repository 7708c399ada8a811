#include "torflat/polynomial.hpp"

#include "torflat/errors.hpp"

#include <cctype>
#include <sstream>

namespace torflat {

Poly Poly::constant(int nvars, const NFElem& c) {
    Poly p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Poly Poly::variable(int nvars, int index) {
    if (index < 0 || index >= nvars)
        fail(ErrorCode::PreconditionFailed, "variable index out of range");
    Monomial m(nvars, 0);
    m[index] = 1;
    Poly p(nvars);
    p.add_term(m, NFElem(1));
    return p;
}

Poly Poly::monomial(const Monomial& m, const NFElem& c) {
    Poly p(static_cast<int>(m.size()));
    p.add_term(m, c);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial(nvars_, 0));
}

NFElem Poly::constant_term() const { return coeff(Monomial(nvars_, 0)); }

NFElem Poly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? NFElem(0) : it->second;
}

int Poly::degree(int var) const {
    int d = -1;
    for (const auto& [m, c] : terms_)
        d = std::max(d, m[var]);
    return d;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
        int s = 0;
        for (int e : m)
            s += e;
        d = std::max(d, s);
    }
    return d;
}

FieldPtr Poly::field() const {
    FieldPtr f = NumberField::rationals();
    for (const auto& [m, c] : terms_)
        f = common_field(f, c.field());
    return f;
}

void Poly::add_term(const Monomial& m, const NFElem& c) {
    if (static_cast<int>(m.size()) != nvars_)
        fail(ErrorCode::DimensionMismatch, "monomial has wrong number of variables");
    if (c.is_zero())
        return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        terms_.erase(it);
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_)
        r.terms_.emplace(m, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.nvars_ != nvars_)
        fail(ErrorCode::DimensionMismatch, "polynomials in different variable sets");
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Poly& o) {
    if (o.nvars_ != nvars_)
        fail(ErrorCode::DimensionMismatch, "polynomials in different variable sets");
    Poly r(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m(nvars_);
            for (int i = 0; i < nvars_; ++i)
                m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    *this = std::move(r);
    return *this;
}

Poly& Poly::operator*=(const NFElem& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, x] : terms_)
        x *= c;
    return *this;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size())
        return false;
    auto it = b.terms_.begin();
    for (const auto& [m, c] : a.terms_) {
        if (m != it->first || c != it->second)
            return false;
        ++it;
    }
    return true;
}

Poly Poly::pow(unsigned e) const {
    Poly r = constant(nvars_, NFElem(1)), b = *this;
    while (e) {
        if (e & 1)
            r *= b;
        e >>= 1;
        if (e)
            b *= b;
    }
    return r;
}

NFElem Poly::eval(const std::vector<NFElem>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
        fail(ErrorCode::DimensionMismatch, "evaluation point has wrong dimension");
    NFElem acc(0);
    for (const auto& [m, c] : terms_) {
        NFElem t = c;
        for (int i = 0; i < nvars_; ++i)
            if (m[i])
                t *= point[i].pow(static_cast<unsigned long>(m[i]));
        acc += t;
    }
    return acc;
}

Poly Poly::derivative(int var) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0)
            continue;
        Monomial d = m;
        --d[var];
        r.add_term(d, c * NFElem(static_cast<long>(m[var])));
    }
    return r;
}

Poly Poly::substitute(int var, const NFElem& value) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
        Monomial d = m;
        d[var] = 0;
        r.add_term(d, c * value.pow(static_cast<unsigned long>(m[var])));
    }
    return r;
}

std::vector<Poly> Poly::coefficients_in(int var) const {
    std::vector<Poly> out(std::max(0, degree(var) + 1), Poly(nvars_));
    for (const auto& [m, c] : terms_) {
        Monomial d = m;
        d[var] = 0;
        out[m[var]].add_term(d, c);
    }
    return out;
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        if (!first)
            os << " + ";
        first = false;
        bool unit = c.is_one();
        bool has_var = false;
        for (int e : m)
            has_var |= e > 0;
        if (!unit || !has_var)
            os << (c.is_rational() ? c.str() : "(" + c.str() + ")");
        bool need_star = !unit || !has_var;
        for (int i = 0; i < nvars_; ++i) {
            if (!m[i])
                continue;
            if (need_star)
                os << "*";
            os << (i < static_cast<int>(names.size()) ? names[i] : "v" + std::to_string(i));
            if (m[i] > 1)
                os << "^" << m[i];
            need_star = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
  public:
    Parser(const std::string& text, const std::vector<std::string>& vars, const FieldPtr& field)
        : s_(text), vars_(vars), field_(field), n_(static_cast<int>(vars.size())) {}

    Poly parse() {
        Poly p = expr();
        skip();
        if (pos_ != s_.size())
            error("unexpected character");
        return p;
    }

  private:
    [[noreturn]] void error(const std::string& what) {
        throw SchemaError("polynomial parse error at position " + std::to_string(pos_) + " (" + what + "): " + s_);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        Poly acc = Poly(n_);
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Poly t = term();
        acc = neg ? -t : t;
        while (true) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                break;
        }
        return acc;
    }

    Poly term() {
        Poly acc = power();
        while (true) {
            if (eat('*')) {
                acc *= power();
            } else if (eat('/')) {
                Poly d = power();
                if (!d.is_constant() || d.is_zero())
                    error("division by a non-constant or zero");
                acc *= d.constant_term().inverse();
            } else {
                break;
            }
        }
        return acc;
    }

    Poly power() {
        Poly b = atom();
        if (eat('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (start == pos_)
                error("expected exponent");
            b = b.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
        }
        return b;
    }

    Poly atom() {
        skip();
        if (pos_ >= s_.size())
            error("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!eat(')'))
                error("expected ')'");
            return p;
        }
        if (c == '-') {
            ++pos_;
            return -power();
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
                ++pos_;
            return Poly::constant(n_, NFElem(parse_rational(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            for (int k = 0; k < n_; ++k)
                if (vars_[k] == id)
                    return Poly::variable(n_, k);
            if (id == "i") {
                if (!field_ || !field_->imaginary_unit())
                    error("field has no imaginary unit");
                return Poly::constant(n_, NFElem(field_, *field_->imaginary_unit()));
            }
            if (id == "theta") {
                if (!field_)
                    error("no field for theta");
                return Poly::constant(n_, NFElem::generator(field_));
            }
            error("unknown identifier '" + id + "'");
        }
        error("unexpected character");
    }

    std::string s_;
    const std::vector<std::string>& vars_;
    FieldPtr field_;
    int n_;
    std::size_t pos_ = 0;
};

} // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& vars, const FieldPtr& field) {
    return Parser(text, vars, field).parse();
}

// ---------------------------------------------------------------- univariate over K

void kpoly_trim(KPoly& p) {
    while (!p.empty() && p.back().is_zero())
        p.pop_back();
}

void kpoly_divmod(const KPoly& a, const KPoly& b, KPoly& q, KPoly& r) {
    r = a;
    kpoly_trim(r);
    KPoly bb = b;
    kpoly_trim(bb);
    if (bb.empty())
        fail(ErrorCode::DivisionByZero, "polynomial division by zero");
    const int db = static_cast<int>(bb.size()) - 1;
    q.assign(std::max<int>(0, static_cast<int>(r.size()) - db), NFElem(0));
    NFElem inv = bb.back().inverse();
    while (!r.empty() && static_cast<int>(r.size()) - 1 >= db) {
        const int shift = static_cast<int>(r.size()) - 1 - db;
        NFElem f = r.back() * inv;
        q[shift] = f;
        for (int i = 0; i < db; ++i)
            r[i + shift] -= f * bb[i];
        r.pop_back();
        kpoly_trim(r);
    }
}

KPoly kpoly_gcd(KPoly a, KPoly b) {
    kpoly_trim(a);
    kpoly_trim(b);
    while (!b.empty()) {
        KPoly q, r;
        kpoly_divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        NFElem inv = a.back().inverse();
        for (auto& x : a)
            x *= inv;
    }
    return a;
}

KPoly kpoly_derivative(const KPoly& a) {
    KPoly d;
    for (std::size_t i = 1; i < a.size(); ++i)
        d.push_back(a[i] * NFElem(static_cast<long>(i)));
    kpoly_trim(d);
    return d;
}

bool kpoly_squarefree(const KPoly& a) {
    KPoly g = kpoly_gcd(a, kpoly_derivative(a));
    return g.size() <= 1;
}

} // namespace torflat
