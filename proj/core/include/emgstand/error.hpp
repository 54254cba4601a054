#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emgstand {

/// Every failure the library can report. The names double as the stable
/// machine-readable identifiers printed by the CLI.
enum class Errc {
    // input / data
    MissingFile,
    MalformedManifest,
    ScoreOutOfRange,
    HeaderMismatch,
    RaggedRows,
    NonFiniteSample,
    WindowOutOfBounds,
    EmptySelection,
    MuscleAbsentFromRecording,
    EmptySignal,
    LagTooLarge,
    DegenerateSignal,
    OrderTooLarge,
    WindowTooShort,
    NotSymmetric,
    DegenerateData,
    DimensionMismatch,
    SingleClassData,
    SingularCovariance,
    RankDeficient,
    TooFewTrials,
    LengthMismatch,
    KOutOfRange,
    InvalidConfig,
    InvalidArgument,
    IoError,
    UnsupportedFormatVersion,
    MalformedModel,
    // numerical convergence
    NoConvergence,
    SmoNoConvergence,
};

enum class ErrorCategory { Data, Convergence };

std::string_view to_string(Errc code) noexcept;
ErrorCategory category_of(Errc code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& detail);

    [[nodiscard]] Errc code() const noexcept { return code_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }
    [[nodiscard]] ErrorCategory category() const noexcept { return category_of(code_); }

    /// Returns a copy whose detail is prefixed with `context: `.
    [[nodiscard]] Error with_context(std::string_view context) const;

  private:
    Errc code_;
    std::string detail_;
};

[[noreturn]] void fail(Errc code, const std::string& detail);

}  // namespace emgstand
