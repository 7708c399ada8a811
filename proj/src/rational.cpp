#include "torflat/rational.hpp"

#include "torflat/errors.hpp"

#include <cmath>

namespace torflat {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DivisionByZero: return "division_by_zero";
    case ErrorCode::FieldMismatch: return "field_mismatch";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::ReducibleMinimalPolynomial: return "reducible_minimal_polynomial";
    case ErrorCode::UnsupportedDegree: return "unsupported_degree";
    case ErrorCode::BadRootHint: return "bad_root_hint";
    case ErrorCode::NotConjugationClosed: return "not_conjugation_closed";
    case ErrorCode::ParameterMismatch: return "parameter_mismatch";
    case ErrorCode::EmptyParameterDomain: return "empty_parameter_domain";
    case ErrorCode::ParameterDependentLeadingTerm: return "parameter_dependent_leading_term";
    case ErrorCode::UncertifiableZero: return "uncertifiable_zero";
    case ErrorCode::NegativeValuation: return "negative_valuation";
    case ErrorCode::TruncationTooLow: return "truncation_too_low";
    case ErrorCode::NotSquarefree: return "not_squarefree";
    case ErrorCode::ExtensionTooLarge: return "extension_too_large";
    case ErrorCode::NotContained: return "not_contained";
    case ErrorCode::EmptyFamily: return "empty_family";
    case ErrorCode::MixedAmbient: return "mixed_ambient";
    case ErrorCode::PrecisionEscalation: return "precision_escalation";
    case ErrorCode::PreconditionFailed: return "precondition_failed";
    case ErrorCode::SamplerFailure: return "sampler_failure";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw SchemaError("empty rational literal");
    auto dot = text.find('.');
    auto slash = text.find('/');
    try {
        if (dot != std::string::npos) {
            if (slash != std::string::npos)
                throw SchemaError("mixed decimal/fraction literal: " + text);
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            if (digits.empty() || digits == "-" || digits == "+")
                throw SchemaError("bad decimal literal: " + text);
            std::size_t frac = text.size() - dot - 1;
            if (digits[0] == '+')
                digits.erase(0, 1);
            Integer num(digits, 10);
            Integer den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
            Rational q(num, den);
            q.canonicalize();
            return q;
        }
        std::string t = text;
        if (t[0] == '+')
            t.erase(0, 1);
        Rational q(t, 10);
        if (q.get_den() == 0)
            throw SchemaError("zero denominator: " + text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw SchemaError("bad rational literal: " + text);
    }
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer floor_int(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil_int(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rational rational_floor(const Rational& q) { return Rational(floor_int(q)); }

Rational round_down(const Rational& q, long bits) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    Rational r(floor_int(q * scale), scale);
    r.canonicalize();
    return r;
}

Rational round_up(const Rational& q, long bits) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    Rational r(ceil_int(q * scale), scale);
    r.canonicalize();
    return r;
}

Rational sqrt_upper(const Rational& q, long bits) {
    if (q < 0)
        fail(ErrorCode::PreconditionFailed, "sqrt of negative rational");
    if (q == 0)
        return 0;
    // isqrt(q * 4^bits) bounds sqrt(q) * 2^bits from below; +1 bounds it above.
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 4, static_cast<unsigned long>(bits));
    Integer n = ceil_int(q * scale);
    Integer s;
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    if (s * s < n)
        s += 1;
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    Rational r(s, den);
    r.canonicalize();
    return r;
}

Rational sqrt_lower(const Rational& q, long bits) {
    if (q <= 0)
        return 0;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 4, static_cast<unsigned long>(bits));
    Integer n = floor_int(q * scale);
    Integer s;
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    Rational r(s, den);
    r.canonicalize();
    return r;
}

Rational rational_reconstruct(const Rational& x, const Rational& tol) {
    // Walk the continued-fraction convergents of x; stop at the first one
    // within tol.
    Integer h_prev = 1, h = floor_int(x);
    Integer k_prev = 0, k = 1;
    Rational frac = x - Rational(h);
    for (int iter = 0; iter < 400; ++iter) {
        Rational cand(h, k);
        cand.canonicalize();
        if (abs(cand - x) <= tol)
            return cand;
        if (frac == 0)
            return cand;
        Rational inv = 1 / frac;
        Integer a = floor_int(inv);
        frac = inv - Rational(a);
        Integer h_next = a * h + h_prev;
        Integer k_next = a * k + k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    return x;
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x))
        fail(ErrorCode::PreconditionFailed, "non-finite double");
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

} // namespace torflat
