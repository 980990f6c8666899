#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace laptel {

enum class DriverTag { human, software, other };

const char* to_string(DriverTag tag);
DriverTag driver_tag_from_string(const std::string& s);

// One uniformly sampled telemetry record. Units are SI except brake
// pressure (bar) and throttle (normalized 0..1).
//
// Sign convention is ISO 8855: a left turn gives positive steer, positive
// yaw rate and positive lateral acceleration.
struct TelemetrySample {
    double t = 0.0;         // time [s]
    double s = 0.0;         // lap distance [m]
    double x = 0.0;         // planar position [m]
    double y = 0.0;         // planar position [m]
    double psi = 0.0;       // heading [rad]
    double vx = 0.0;        // longitudinal velocity [m/s]
    double vy = 0.0;        // lateral velocity [m/s]
    double ax = 0.0;        // longitudinal acceleration [m/s^2]
    double ay = 0.0;        // lateral acceleration [m/s^2]
    double yaw_rate = 0.0;  // measured yaw rate [rad/s]
    double steer = 0.0;     // averaged front wheel angle [rad]
    double throttle = 0.0;  // pedal position, 0..1
    double p_brake_f = 0.0; // front brake pressure [bar]
    double p_brake_r = 0.0; // rear brake pressure [bar]

    // Longitudinal force request of a driving software [N]. Only present on
    // autonomous laps; the channel must be present on all samples or none.
    std::optional<double> f_long_req;
};

// An immutable lap of uniformly sampled telemetry. Construct through
// new_lap(), which validates spacing, finiteness and monotonic distance.
struct Lap {
    std::vector<TelemetrySample> samples;
    double dt = 0.0;        // sample interval [s]
    double lap_time = 0.0;  // t[last] - t[first] [s]
    DriverTag driver_tag = DriverTag::other;
    std::string track_id;
    bool out_lap = false;      // partial first/last segment from session splitting
    bool vy_measured = true;   // false when the source file had no vy column

    std::size_t size() const { return samples.size(); }
    bool has_f_long_req() const;

    // Extracts one channel as a contiguous array, e.g.
    // lap.channel(&TelemetrySample::ay).
    std::vector<double> channel(double TelemetrySample::* field) const;
    std::vector<double> f_long_req_channel() const;
};

struct ReferencePoint {
    double s = 0.0;    // arc length [m]
    double x = 0.0;    // [m]
    double y = 0.0;    // [m]
    double psi = 0.0;  // heading [rad]
    double v = 0.0;    // target speed [m/s]
};

// Arc-length parameterized polyline; the planned race trajectory and the
// baseline for driving-line deviation.
struct ReferenceLine {
    std::vector<ReferencePoint> points;
    bool closed = false;

    double length() const;
    void validate() const;  // throws Error on invariant violations
};

struct VehicleParams {
    double lf = 1.4;           // CoG to front axle [m]
    double lr = 1.6;           // CoG to rear axle [m]
    double f_long_max = 8000;  // drive force at full throttle [N]
    double p_brake_max = 160;  // full brake pressure reference [bar]

    void validate() const;
};

// Builds a Lap from a sample sequence. Computes dt and lap_time, and
// rejects empty input, non-uniform spacing (worst gap reported), non-finite
// values (channel and index reported), out-of-range pedal/pressure values
// and decreasing lap distance.
Lap new_lap(std::vector<TelemetrySample> samples, DriverTag tag, std::string track_id);

}  // namespace laptel
