#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dislokon {

enum class ErrorKind {
    InvalidParams,
    FreeParticle,
    NegativeESquared,
    MissingWall,
    NoRealFrequency,
    NonConvergence,
    InvalidB,
    DomainError,
    BracketFailure,
    GridTooCoarse,
    MismatchBeyondTolerance,
};

/// Stable kebab-case tag, used for CSV status columns and CLI messages.
constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidParams: return "invalid-params";
    case ErrorKind::FreeParticle: return "free-particle";
    case ErrorKind::NegativeESquared: return "negative-e-squared";
    case ErrorKind::MissingWall: return "missing-wall";
    case ErrorKind::NoRealFrequency: return "no-real-frequency";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::InvalidB: return "invalid-b";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::BracketFailure: return "bracket-failure";
    case ErrorKind::GridTooCoarse: return "grid-too-coarse";
    case ErrorKind::MismatchBeyondTolerance: return "mismatch-beyond-tolerance";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace dislokon
