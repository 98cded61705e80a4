#pragma once

#include <stdexcept>
#include <string>

namespace qrm {

enum class ErrorCode {
    DegenerateMap,
    ContourTooLarge,
    NonConvergent,
    NeedsHigherPrecision,
    PeriodTooLarge,
    RootFindingStalled,
    AmbiguousPeriod,
    NoAdmissiblePair,
    InadmissibleMarking,
    DegenerateFixedPoints,
    NotEscaping,
    UnsupportedPeriod,
    CommonComponent,
    ContainsInfinityLine,
    InadmissiblePath,
    PoleCollision,
    FixedPointOnBoundary,
    Validation,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DegenerateMap: return "DegenerateMap";
        case ErrorCode::ContourTooLarge: return "ContourTooLarge";
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::NeedsHigherPrecision: return "NeedsHigherPrecision";
        case ErrorCode::PeriodTooLarge: return "PeriodTooLarge";
        case ErrorCode::RootFindingStalled: return "RootFindingStalled";
        case ErrorCode::AmbiguousPeriod: return "AmbiguousPeriod";
        case ErrorCode::NoAdmissiblePair: return "NoAdmissiblePair";
        case ErrorCode::InadmissibleMarking: return "InadmissibleMarking";
        case ErrorCode::DegenerateFixedPoints: return "DegenerateFixedPoints";
        case ErrorCode::NotEscaping: return "NotEscaping";
        case ErrorCode::UnsupportedPeriod: return "UnsupportedPeriod";
        case ErrorCode::CommonComponent: return "CommonComponent";
        case ErrorCode::ContainsInfinityLine: return "ContainsInfinityLine";
        case ErrorCode::InadmissiblePath: return "InadmissiblePath";
        case ErrorCode::PoleCollision: return "PoleCollision";
        case ErrorCode::FixedPointOnBoundary: return "FixedPointOnBoundary";
        case ErrorCode::Validation: return "Validation";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace qrm
