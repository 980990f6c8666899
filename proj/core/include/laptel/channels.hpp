#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "laptel/types.hpp"

namespace laptel {

// A per-sample series with a validity mask. Invalid entries hold 0.0 so the
// value array stays finite everywhere; consumers must check the mask.
struct MaskedSeries {
    std::vector<double> value;
    std::vector<std::uint8_t> valid;

    std::size_t valid_count() const;
};

struct ChannelConfig {
    double smooth_window_s = 0.1;        // moving-average window
    double v_min_mps = 5.0;              // mask vx-divisions below this speed
    bool use_artificial_throttle = true; // reconstruct throttle from f_long_req when present
};

// Per-sample math channels derived from one lap.
struct MathChannels {
    std::vector<double> steer_smooth;   // smoothed steering angle [rad]
    std::vector<double> k_ss;           // steering smoothness |raw - smoothed| [rad]
    std::vector<double> steer_rate;     // d(steer)/dt [rad/s]
    std::vector<double> p_brake_total;  // front + rear pressure [bar]
    std::vector<double> p_brake_rate;   // d(p_total)/dt [bar/s]
    std::vector<double> ax_smooth;      // smoothed longitudinal acceleration [m/s^2]
    std::vector<double> ay_smooth;      // smoothed lateral acceleration [m/s^2]
    MaskedSeries att_vel;               // yaw_rate - ay/vx [rad/s], masked below v_min
    MaskedSeries alpha_f;               // front axle slip angle [rad]
    MaskedSeries alpha_r;               // rear axle slip angle [rad]
    MaskedSeries d_slip;                // alpha_f - alpha_r [rad]
    std::vector<double> throttle_eff;   // measured or artificial throttle, 0..1
};

// Centered moving average over floor(window/dt)|1 taps. The window is
// truncated symmetrically at the edges, which keeps constants exact and the
// output within [min(signal), max(signal)].
std::vector<double> smooth(const std::vector<double>& signal, double window_s, double dt);

// Central difference on interior samples, one-sided at both ends.
std::vector<double> derivative(const std::vector<double>& signal, double dt);

// |steer - smooth(steer)| per sample.
std::vector<double> steering_smoothness(const std::vector<double>& steer, double window_s,
                                        double dt);

// yaw_rate - ay/vx. Samples with vx < v_min are masked instead of dividing
// near zero; positive values indicate yaw not explained by path curvature
// (oversteer), negative values understeer.
MaskedSeries attitude_velocity(const std::vector<double>& yaw_rate,
                               const std::vector<double>& ay, const std::vector<double>& vx,
                               double v_min);

struct SlipAngles {
    MaskedSeries alpha_f;
    MaskedSeries alpha_r;
    MaskedSeries d_slip;
};

// Single-track axle slip angles:
//   alpha_f = steer - atan((vy + lf*yaw_rate)/vx)
//   alpha_r = -atan((vy - lr*yaw_rate)/vx)
// and their difference alpha_f - alpha_r (positive = understeer tendency).
SlipAngles slip_angles(const std::vector<double>& steer, const std::vector<double>& vx,
                       const std::vector<double>& vy, const std::vector<double>& yaw_rate,
                       const VehicleParams& params, double v_min);

// clamp(f_long_req / f_long_max, 0, 1); braking (negative) requests map to 0.
std::vector<double> artificial_throttle(const std::vector<double>& f_long_req,
                                        const VehicleParams& params);

// Populates every math channel for one lap.
MathChannels compute_all(const Lap& lap, const VehicleParams& params, const ChannelConfig& cfg);

}  // namespace laptel
