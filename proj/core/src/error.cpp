#include "emgstand/error.hpp"

namespace emgstand {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::MissingFile: return "MissingFile";
        case Errc::MalformedManifest: return "MalformedManifest";
        case Errc::ScoreOutOfRange: return "ScoreOutOfRange";
        case Errc::HeaderMismatch: return "HeaderMismatch";
        case Errc::RaggedRows: return "RaggedRows";
        case Errc::NonFiniteSample: return "NonFiniteSample";
        case Errc::WindowOutOfBounds: return "WindowOutOfBounds";
        case Errc::EmptySelection: return "EmptySelection";
        case Errc::MuscleAbsentFromRecording: return "MuscleAbsentFromRecording";
        case Errc::EmptySignal: return "EmptySignal";
        case Errc::LagTooLarge: return "LagTooLarge";
        case Errc::DegenerateSignal: return "DegenerateSignal";
        case Errc::OrderTooLarge: return "OrderTooLarge";
        case Errc::WindowTooShort: return "WindowTooShort";
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::DegenerateData: return "DegenerateData";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::SingleClassData: return "SingleClassData";
        case Errc::SingularCovariance: return "SingularCovariance";
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::TooFewTrials: return "TooFewTrials";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::KOutOfRange: return "KOutOfRange";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::IoError: return "IoError";
        case Errc::UnsupportedFormatVersion: return "UnsupportedFormatVersion";
        case Errc::MalformedModel: return "MalformedModel";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::SmoNoConvergence: return "SmoNoConvergence";
    }
    return "Unknown";
}

ErrorCategory category_of(Errc code) noexcept {
    switch (code) {
        case Errc::NoConvergence:
        case Errc::SmoNoConvergence:
            return ErrorCategory::Convergence;
        default:
            return ErrorCategory::Data;
    }
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

Error Error::with_context(std::string_view context) const {
    return Error(code_, std::string(context) + ": " + detail_);
}

void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

}  // namespace emgstand
