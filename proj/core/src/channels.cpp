#include "laptel/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "laptel/errors.hpp"

namespace laptel {

std::size_t MaskedSeries::valid_count() const {
    std::size_t n = 0;
    for (auto v : valid) n += (v != 0);
    return n;
}

std::vector<double> smooth(const std::vector<double>& signal, double window_s, double dt) {
    if (!(dt > 0)) {
        throw Error(errc::invalid_argument, "dt must be positive");
    }
    if (window_s < dt) {
        throw Error(errc::window_too_small, "window shorter than one sample interval");
    }
    const std::size_t n = signal.size();
    std::size_t taps = static_cast<std::size_t>(window_s / dt);
    taps |= 1;  // force odd tap count
    const std::size_t half = taps / 2;

    // Prefix sums make each output O(1); the edge windows shrink
    // symmetrically so the average stays centered.
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + signal[i];

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t h = std::min({half, i, n - 1 - i});
        const std::size_t lo = i - h;
        const std::size_t hi = i + h;
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<double> derivative(const std::vector<double>& signal, double dt) {
    if (!(dt > 0)) {
        throw Error(errc::invalid_argument, "dt must be positive");
    }
    const std::size_t n = signal.size();
    if (n < 2) {
        throw Error(errc::series_too_short, "derivative needs at least 2 samples");
    }
    std::vector<double> out(n);
    out.front() = (signal[1] - signal[0]) / dt;
    out.back() = (signal[n - 1] - signal[n - 2]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (signal[i + 1] - signal[i - 1]) / (2.0 * dt);
    }
    return out;
}

std::vector<double> steering_smoothness(const std::vector<double>& steer, double window_s,
                                        double dt) {
    std::vector<double> smoothed = smooth(steer, window_s, dt);
    std::vector<double> out(steer.size());
    for (std::size_t i = 0; i < steer.size(); ++i) {
        out[i] = std::abs(steer[i] - smoothed[i]);
    }
    return out;
}

MaskedSeries attitude_velocity(const std::vector<double>& yaw_rate,
                               const std::vector<double>& ay, const std::vector<double>& vx,
                               double v_min) {
    if (yaw_rate.size() != ay.size() || ay.size() != vx.size()) {
        throw Error(errc::invalid_argument, "attitude_velocity inputs differ in length");
    }
    MaskedSeries out;
    const std::size_t n = vx.size();
    out.value.assign(n, 0.0);
    out.valid.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (vx[i] >= v_min && vx[i] > 0.0) {
            out.value[i] = yaw_rate[i] - ay[i] / vx[i];
            out.valid[i] = 1;
        }
    }
    return out;
}

SlipAngles slip_angles(const std::vector<double>& steer, const std::vector<double>& vx,
                       const std::vector<double>& vy, const std::vector<double>& yaw_rate,
                       const VehicleParams& params, double v_min) {
    params.validate();
    const std::size_t n = steer.size();
    if (vx.size() != n || vy.size() != n || yaw_rate.size() != n) {
        throw Error(errc::invalid_argument, "slip_angles inputs differ in length");
    }
    SlipAngles out;
    out.alpha_f.value.assign(n, 0.0);
    out.alpha_f.valid.assign(n, 0);
    out.alpha_r.value.assign(n, 0.0);
    out.alpha_r.valid.assign(n, 0);
    out.d_slip.value.assign(n, 0.0);
    out.d_slip.valid.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (vx[i] >= v_min && vx[i] > 0.0) {
            const double af = steer[i] - std::atan((vy[i] + params.lf * yaw_rate[i]) / vx[i]);
            const double ar = -std::atan((vy[i] - params.lr * yaw_rate[i]) / vx[i]);
            out.alpha_f.value[i] = af;
            out.alpha_f.valid[i] = 1;
            out.alpha_r.value[i] = ar;
            out.alpha_r.valid[i] = 1;
            out.d_slip.value[i] = af - ar;
            out.d_slip.valid[i] = 1;
        }
    }
    return out;
}

std::vector<double> artificial_throttle(const std::vector<double>& f_long_req,
                                        const VehicleParams& params) {
    params.validate();
    std::vector<double> out(f_long_req.size());
    for (std::size_t i = 0; i < f_long_req.size(); ++i) {
        out[i] = std::clamp(f_long_req[i] / params.f_long_max, 0.0, 1.0);
    }
    return out;
}

MathChannels compute_all(const Lap& lap, const VehicleParams& params, const ChannelConfig& cfg) {
    const double dt = lap.dt;
    const auto steer = lap.channel(&TelemetrySample::steer);

    MathChannels ch;
    ch.steer_smooth = smooth(steer, cfg.smooth_window_s, dt);
    ch.k_ss.resize(steer.size());
    for (std::size_t i = 0; i < steer.size(); ++i) {
        ch.k_ss[i] = std::abs(steer[i] - ch.steer_smooth[i]);
    }
    ch.steer_rate = derivative(steer, dt);

    ch.p_brake_total.resize(lap.size());
    for (std::size_t i = 0; i < lap.size(); ++i) {
        ch.p_brake_total[i] = lap.samples[i].p_brake_f + lap.samples[i].p_brake_r;
    }
    ch.p_brake_rate = derivative(ch.p_brake_total, dt);

    ch.ax_smooth = smooth(lap.channel(&TelemetrySample::ax), cfg.smooth_window_s, dt);
    ch.ay_smooth = smooth(lap.channel(&TelemetrySample::ay), cfg.smooth_window_s, dt);

    const auto vx = lap.channel(&TelemetrySample::vx);
    const auto ay = lap.channel(&TelemetrySample::ay);
    const auto yaw_rate = lap.channel(&TelemetrySample::yaw_rate);
    ch.att_vel = attitude_velocity(yaw_rate, ay, vx, cfg.v_min_mps);

    auto slips = slip_angles(steer, vx, lap.channel(&TelemetrySample::vy), yaw_rate, params,
                             cfg.v_min_mps);
    ch.alpha_f = std::move(slips.alpha_f);
    ch.alpha_r = std::move(slips.alpha_r);
    ch.d_slip = std::move(slips.d_slip);

    if (cfg.use_artificial_throttle && lap.has_f_long_req()) {
        ch.throttle_eff = artificial_throttle(lap.f_long_req_channel(), params);
    } else {
        ch.throttle_eff = lap.channel(&TelemetrySample::throttle);
        if (cfg.use_artificial_throttle && lap.driver_tag == DriverTag::software) {
            double peak = 0.0;
            for (double v : ch.throttle_eff) peak = std::max(peak, v);
            if (peak == 0.0) {
                throw Error(errc::missing_channel,
                            "software lap has neither f_long_req nor a measured throttle");
            }
        }
    }
    return ch;
}

}  // namespace laptel
