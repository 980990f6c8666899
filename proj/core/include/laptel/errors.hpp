#pragma once

#include <stdexcept>
#include <string>

namespace laptel {

// Every failure mode the engine can report. The CLI maps these onto
// process exit codes, so additions here need a mapping there as well.
enum class errc {
    empty_series,
    non_uniform_sampling,
    non_finite_value,
    non_monotonic_distance,
    missing_required_column,
    unparsable_cell,
    non_monotonic_time,
    span_too_short,
    gap_too_large,
    no_lap_boundary,
    window_too_small,
    series_too_short,
    missing_channel,
    ref_too_far,
    track_mismatch,
    baseline_zero,
    cutoff_above_nyquist,
    infeasible_profile,
    open_track_required,
    invalid_argument,
    io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& detail);
    errc code() const { return code_; }

private:
    errc code_;
};

}  // namespace laptel
