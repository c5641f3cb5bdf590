#pragma once

#include <stdexcept>
#include <string>

namespace lamegf {

enum class ErrorKind {
    InvalidMedium,
    WoodAnomaly,
    DomainError,
    CoincidentPoints,
    NearSourceLine,
    NearSourcePlane,
    DegenerateModeBasis,
    AliasedGrid,
    ResonanceSuspected,
    TooCloseToBoundary,
    GridMismatch,
    ConfigError,
};

inline const char* error_kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidMedium: return "InvalidMedium";
    case ErrorKind::WoodAnomaly: return "WoodAnomaly";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::NearSourceLine: return "NearSourceLine";
    case ErrorKind::NearSourcePlane: return "NearSourcePlane";
    case ErrorKind::DegenerateModeBasis: return "DegenerateModeBasis";
    case ErrorKind::AliasedGrid: return "AliasedGrid";
    case ErrorKind::ResonanceSuspected: return "ResonanceSuspected";
    case ErrorKind::TooCloseToBoundary: return "TooCloseToBoundary";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind)
    {
    }
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace lamegf
