#include "laptel/autonomy.hpp"

#include <cmath>

#include "laptel/errors.hpp"
#include "laptel/geometry.hpp"

namespace laptel {

namespace {

constexpr double kNoiseWindowS = 0.05;

double rms(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

TrackingDeviation tracking_deviation(const Lap& lap, const ReferenceLine& target,
                                     double sanity_m) {
    target.validate();
    TrackingDeviation dev;
    const std::size_t n = lap.size();
    dev.lateral.resize(n);
    dev.heading.resize(n);
    dev.velocity.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& smp = lap.samples[i];
        const Projection p = project_point(target, smp.x, smp.y);
        if (p.distance > sanity_m) {
            throw Error(errc::ref_too_far, "lap is more than " + std::to_string(sanity_m) +
                                               " m from the target trajectory");
        }
        dev.lateral[i] = p.signed_offset;
        dev.heading[i] = wrap_angle(smp.psi - heading_at(target, p));
        dev.velocity[i] = smp.vx - target_speed_at(target, p);
        dev.lateral_mean_abs += std::abs(dev.lateral[i]);
        dev.heading_mean_abs += std::abs(dev.heading[i]);
        dev.velocity_mean_abs += std::abs(dev.velocity[i]);
    }
    dev.lateral_mean_abs /= static_cast<double>(n);
    dev.heading_mean_abs /= static_cast<double>(n);
    dev.velocity_mean_abs /= static_cast<double>(n);
    return dev;
}

double oscillation_index(const std::vector<double>& signal, double dt, double cutoff_hz) {
    if (!(dt > 0) || !(cutoff_hz > 0)) {
        throw Error(errc::invalid_argument, "dt and cutoff must be positive");
    }
    if (cutoff_hz >= 0.5 / dt) {
        throw Error(errc::cutoff_above_nyquist, "cutoff " + std::to_string(cutoff_hz) +
                                                    " Hz at sample interval " +
                                                    std::to_string(dt) + " s");
    }
    const std::vector<double> base = smooth(signal, 1.0 / cutoff_hz, dt);
    double mean = 0.0;
    for (double x : signal) mean += x;
    mean /= static_cast<double>(signal.size());

    std::vector<double> residual(signal.size()), centered(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        residual[i] = signal[i] - base[i];
        centered[i] = signal[i] - mean;
    }
    const double denom = rms(centered);
    if (denom == 0.0) return 0.0;
    return rms(residual) / denom;
}

SignalQuality signal_quality(const std::vector<double>& signal, double dt) {
    if (signal.size() < 100) {
        throw Error(errc::series_too_short, "signal quality needs at least 100 samples");
    }
    if (!(dt > 0)) {
        throw Error(errc::invalid_argument, "dt must be positive");
    }
    SignalQuality q;

    const std::vector<double> base = smooth(signal, kNoiseWindowS, dt);
    std::vector<double> residual(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) residual[i] = signal[i] - base[i];
    q.noise_rms = rms(residual);

    // Least-squares slope against t = i*dt, centered for stability.
    const double n = static_cast<double>(signal.size());
    const double t_mean = dt * (n - 1.0) / 2.0;
    double y_mean = 0.0;
    for (double y : signal) y_mean += y;
    y_mean /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double tc = dt * static_cast<double>(i) - t_mean;
        num += tc * (signal[i] - y_mean);
        den += tc * tc;
    }
    q.drift_rate = den > 0.0 ? num / den : 0.0;
    return q;
}

std::vector<double> select_channel(const Lap& lap, const MathChannels& channels,
                                   const std::string& name) {
    if (name == "s_m") return lap.channel(&TelemetrySample::s);
    if (name == "x_m") return lap.channel(&TelemetrySample::x);
    if (name == "y_m") return lap.channel(&TelemetrySample::y);
    if (name == "psi_rad") return lap.channel(&TelemetrySample::psi);
    if (name == "vx_mps") return lap.channel(&TelemetrySample::vx);
    if (name == "vy_mps") return lap.channel(&TelemetrySample::vy);
    if (name == "ax_mps2") return lap.channel(&TelemetrySample::ax);
    if (name == "ay_mps2") return lap.channel(&TelemetrySample::ay);
    if (name == "yawrate_radps") return lap.channel(&TelemetrySample::yaw_rate);
    if (name == "steer_rad") return lap.channel(&TelemetrySample::steer);
    if (name == "throttle") return lap.channel(&TelemetrySample::throttle);
    if (name == "p_brake_f_bar") return lap.channel(&TelemetrySample::p_brake_f);
    if (name == "p_brake_r_bar") return lap.channel(&TelemetrySample::p_brake_r);
    if (name == "f_long_req_n") return lap.f_long_req_channel();
    if (name == "p_brake_total_bar") return channels.p_brake_total;
    if (name == "throttle_eff") return channels.throttle_eff;
    if (name == "steer_rate_radps") return channels.steer_rate;
    throw Error(errc::missing_channel, "unknown channel '" + name + "'");
}

std::vector<std::string> selectable_channels() {
    return {"s_m",           "x_m",          "y_m",           "psi_rad",
            "vx_mps",        "vy_mps",       "ax_mps2",       "ay_mps2",
            "yawrate_radps", "steer_rad",    "throttle",      "p_brake_f_bar",
            "p_brake_r_bar", "f_long_req_n", "p_brake_total_bar", "throttle_eff",
            "steer_rate_radps"};
}

}  // namespace laptel
