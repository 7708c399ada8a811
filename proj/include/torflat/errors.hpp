#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torflat {

enum class ErrorCode {
    DivisionByZero,
    FieldMismatch,
    DimensionMismatch,
    ReducibleMinimalPolynomial,
    UnsupportedDegree,
    BadRootHint,
    NotConjugationClosed,
    ParameterMismatch,
    EmptyParameterDomain,
    ParameterDependentLeadingTerm,
    UncertifiableZero,
    NegativeValuation,
    TruncationTooLow,
    NotSquarefree,
    ExtensionTooLarge,
    NotContained,
    EmptyFamily,
    MixedAmbient,
    PrecisionEscalation,
    PreconditionFailed,
    SamplerFailure,
    Schema,
    Internal,
};

std::string_view to_string(ErrorCode code);

/// Mathematical precondition failure. Carries a stable code so the CLI can
/// emit machine-readable error documents.
class MathError : public std::runtime_error {
  public:
    MathError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Malformed input document.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant breach (a bug, not bad input).
class InvariantError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw MathError(code, msg);
}

inline void check_invariant(bool ok, const char* msg) {
    if (!ok)
        throw InvariantError(msg);
}

} // namespace torflat
