#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace transval {

// Every failure mode the library can signal. The CLI maps each code to an
// exit status; keep the switch there in sync (it compiles with -Wswitch).
enum class ErrorCode {
    DivisionByZero,
    CharacteristicOne,
    DenominatorVanishes,
    NotOmegaIncreasing,
    InvalidExponent,
    MixedCoefficientRings,
    NonUnitScale,
    ZeroPolynomial,
    SupportCollision,
    PrecisionLoss,
    BudgetExceeded,
    NonNegativeValuation,
    PreconditionFailed,
    ResidueSearchExhausted,
    SymbolicResidueUnsupported,
    LimitNotRational,
    SyntaxError,
    TypeError,
};

constexpr std::string_view error_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::CharacteristicOne: return "CharacteristicOne";
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::NotOmegaIncreasing: return "NotOmegaIncreasing";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::MixedCoefficientRings: return "MixedCoefficientRings";
    case ErrorCode::NonUnitScale: return "NonUnitScale";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::SupportCollision: return "SupportCollision";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NonNegativeValuation: return "NonNegativeValuation";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::ResidueSearchExhausted: return "ResidueSearchExhausted";
    case ErrorCode::SymbolicResidueUnsupported: return "SymbolicResidueUnsupported";
    case ErrorCode::LimitNotRational: return "LimitNotRational";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::TypeError: return "TypeError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace transval
