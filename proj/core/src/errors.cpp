#include "laptel/errors.hpp"

namespace laptel {

const char* errc_name(errc code) {
    switch (code) {
        case errc::empty_series: return "EmptySeries";
        case errc::non_uniform_sampling: return "NonUniformSampling";
        case errc::non_finite_value: return "NonFiniteValue";
        case errc::non_monotonic_distance: return "NonMonotonicDistance";
        case errc::missing_required_column: return "MissingRequiredColumn";
        case errc::unparsable_cell: return "UnparsableCell";
        case errc::non_monotonic_time: return "NonMonotonicTime";
        case errc::span_too_short: return "SpanTooShort";
        case errc::gap_too_large: return "GapTooLarge";
        case errc::no_lap_boundary: return "NoLapBoundaryFound";
        case errc::window_too_small: return "WindowTooSmall";
        case errc::series_too_short: return "SeriesTooShort";
        case errc::missing_channel: return "MissingChannel";
        case errc::ref_too_far: return "RefTooFar";
        case errc::track_mismatch: return "TrackMismatch";
        case errc::baseline_zero: return "BaselineZero";
        case errc::cutoff_above_nyquist: return "CutoffAboveNyquist";
        case errc::infeasible_profile: return "InfeasibleProfile";
        case errc::open_track_required: return "OpenTrackWhenClosedRequired";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

Error::Error(errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

}  // namespace laptel
