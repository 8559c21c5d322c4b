#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aerofit {

enum class ErrorCode {
    DimensionMismatch,
    OutOfBounds,
    InvalidArgument,
    EmptyUnion,
    EmptyTemplateSet,
    EmptyMask,
    MissingManifest,
    DuplicateSequence,
    InvalidRoutine,
    InvalidPng,
    Io,
    Parse,
    EmptyDataset,
    UndefinedMetric,
    EmptyCurve,
    UnknownRoutine,
    UnknownSession,
    UnknownTemplate,
    WrongPhase,
    GenerationCheckFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure surfaced by aerofit carries a code
/// so callers (HTTP layer, CLI) can map it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail),
          code_(code), detail_(detail) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace aerofit
