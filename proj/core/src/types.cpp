#include "laptel/types.hpp"

#include <cmath>
#include <sstream>

#include "laptel/errors.hpp"

namespace laptel {

namespace {

constexpr double kSpacingTol = 1e-9;  // max |gap - dt| [s]

struct NamedChannel {
    const char* name;
    double TelemetrySample::* field;
};

// Order mirrors the canonical CSV column order.
constexpr NamedChannel kChannels[] = {
    {"t_s", &TelemetrySample::t},
    {"s_m", &TelemetrySample::s},
    {"x_m", &TelemetrySample::x},
    {"y_m", &TelemetrySample::y},
    {"psi_rad", &TelemetrySample::psi},
    {"vx_mps", &TelemetrySample::vx},
    {"vy_mps", &TelemetrySample::vy},
    {"ax_mps2", &TelemetrySample::ax},
    {"ay_mps2", &TelemetrySample::ay},
    {"yawrate_radps", &TelemetrySample::yaw_rate},
    {"steer_rad", &TelemetrySample::steer},
    {"throttle", &TelemetrySample::throttle},
    {"p_brake_f_bar", &TelemetrySample::p_brake_f},
    {"p_brake_r_bar", &TelemetrySample::p_brake_r},
};

}  // namespace

const char* to_string(DriverTag tag) {
    switch (tag) {
        case DriverTag::human: return "human";
        case DriverTag::software: return "software";
        case DriverTag::other: return "other";
    }
    return "other";
}

DriverTag driver_tag_from_string(const std::string& s) {
    if (s == "human") return DriverTag::human;
    if (s == "software") return DriverTag::software;
    if (s == "other") return DriverTag::other;
    throw Error(errc::invalid_argument, "unknown driver tag '" + s + "'");
}

bool Lap::has_f_long_req() const {
    return !samples.empty() && samples.front().f_long_req.has_value();
}

std::vector<double> Lap::channel(double TelemetrySample::* field) const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.*field);
    return out;
}

std::vector<double> Lap::f_long_req_channel() const {
    if (!has_f_long_req()) {
        throw Error(errc::missing_channel, "lap has no f_long_req channel");
    }
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(*s.f_long_req);
    return out;
}

double ReferenceLine::length() const {
    if (points.empty()) return 0.0;
    double len = points.back().s - points.front().s;
    if (closed) {
        double dx = points.front().x - points.back().x;
        double dy = points.front().y - points.back().y;
        len += std::hypot(dx, dy);
    }
    return len;
}

void ReferenceLine::validate() const {
    if (points.size() < 2) {
        throw Error(errc::invalid_argument, "reference line needs at least 2 points");
    }
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1].s > points[i].s)) {
            throw Error(errc::invalid_argument,
                        "reference arc length not strictly increasing at index " + std::to_string(i + 1));
        }
        if (points[i + 1].x == points[i].x && points[i + 1].y == points[i].y) {
            throw Error(errc::invalid_argument,
                        "consecutive reference points coincide at index " + std::to_string(i + 1));
        }
    }
    for (const auto& p : points) {
        if (!std::isfinite(p.s) || !std::isfinite(p.x) || !std::isfinite(p.y) ||
            !std::isfinite(p.psi) || !std::isfinite(p.v)) {
            throw Error(errc::non_finite_value, "non-finite reference point");
        }
    }
}

void VehicleParams::validate() const {
    if (!(lf > 0) || !(lr > 0)) {
        throw Error(errc::invalid_argument, "axle distances lf, lr must be positive");
    }
    if (!(f_long_max > 0)) {
        throw Error(errc::invalid_argument, "f_long_max must be positive");
    }
    if (!(p_brake_max > 0)) {
        throw Error(errc::invalid_argument, "p_brake_max must be positive");
    }
}

Lap new_lap(std::vector<TelemetrySample> samples, DriverTag tag, std::string track_id) {
    if (samples.empty()) {
        throw Error(errc::empty_series, "no samples");
    }
    if (samples.size() < 2) {
        throw Error(errc::empty_series, "a lap needs at least 2 samples");
    }

    const std::size_t n = samples.size();
    const double dt = (samples.back().t - samples.front().t) / static_cast<double>(n - 1);
    if (!(dt > 0)) {
        throw Error(errc::non_monotonic_time, "time does not advance");
    }

    double worst_dev = 0.0;
    std::size_t worst_idx = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double gap = samples[i + 1].t - samples[i].t;
        const double dev = std::abs(gap - dt);
        if (dev > worst_dev) {
            worst_dev = dev;
            worst_idx = i;
        }
    }
    if (worst_dev > kSpacingTol) {
        std::ostringstream msg;
        msg << "worst gap " << (samples[worst_idx + 1].t - samples[worst_idx].t)
            << " s at index " << worst_idx << " (expected dt " << dt << " s)";
        throw Error(errc::non_uniform_sampling, msg.str());
    }

    const bool with_force = samples.front().f_long_req.has_value();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& smp = samples[i];
        for (const auto& ch : kChannels) {
            if (!std::isfinite(smp.*ch.field)) {
                throw Error(errc::non_finite_value,
                            std::string(ch.name) + " at index " + std::to_string(i));
            }
        }
        if (smp.f_long_req.has_value() != with_force) {
            throw Error(errc::invalid_argument,
                        "f_long_req present on some samples but not all (index " +
                            std::to_string(i) + ")");
        }
        if (with_force && !std::isfinite(*smp.f_long_req)) {
            throw Error(errc::non_finite_value, "f_long_req_n at index " + std::to_string(i));
        }
        if (smp.throttle < 0.0 || smp.throttle > 1.0) {
            throw Error(errc::invalid_argument,
                        "throttle outside [0, 1] at index " + std::to_string(i));
        }
        if (smp.p_brake_f < 0.0 || smp.p_brake_r < 0.0) {
            throw Error(errc::invalid_argument,
                        "negative brake pressure at index " + std::to_string(i));
        }
        if (i > 0 && smp.s < samples[i - 1].s - kSpacingTol) {
            throw Error(errc::non_monotonic_distance,
                        "lap distance decreases at index " + std::to_string(i));
        }
    }

    Lap lap;
    lap.samples = std::move(samples);
    lap.dt = dt;
    lap.lap_time = lap.samples.back().t - lap.samples.front().t;
    lap.driver_tag = tag;
    lap.track_id = std::move(track_id);
    return lap;
}

}  // namespace laptel
