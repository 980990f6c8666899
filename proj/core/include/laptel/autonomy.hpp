#pragma once

#include <string>
#include <vector>

#include "laptel/channels.hpp"
#include "laptel/types.hpp"

namespace laptel {

// Per-sample errors of the driven lap against its planned trajectory, plus
// lap means of absolute values. Heading errors are wrapped to (-pi, pi].
// These metrics rate the autonomous pipeline only; they take no part in
// human-vs-software KPI comparisons.
struct TrackingDeviation {
    std::vector<double> lateral;   // [m]
    std::vector<double> heading;   // [rad]
    std::vector<double> velocity;  // [m/s]
    double lateral_mean_abs = 0.0;
    double heading_mean_abs = 0.0;
    double velocity_mean_abs = 0.0;
};

struct SignalQuality {
    double noise_rms = 0.0;   // residual RMS after a 0.05 s moving average [signal units]
    double drift_rate = 0.0;  // least-squares slope over the full series [units/s]
};

TrackingDeviation tracking_deviation(const Lap& lap, const ReferenceLine& target,
                                     double sanity_m = 50.0);

// Ratio of high-frequency residual RMS (after a 1/cutoff moving average) to
// the RMS of the mean-free signal; 0 for constant signals.
double oscillation_index(const std::vector<double>& signal, double dt, double cutoff_hz);

SignalQuality signal_quality(const std::vector<double>& signal, double dt);

// Resolves a channel by canonical name ("steer_rad", "throttle", ...) or
// math channel name ("p_brake_total_bar", "throttle_eff") for the
// oscillation and signal quality analyses.
std::vector<double> select_channel(const Lap& lap, const MathChannels& channels,
                                   const std::string& name);

std::vector<std::string> selectable_channels();

}  // namespace laptel
