#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laptel/segment.hpp"
#include "laptel/types.hpp"

namespace laptel {

// Track geometry as an ordered chain of straights and circular arcs.
struct TrackSegment {
    enum class Kind { straight, arc };
    Kind kind = Kind::straight;
    double length = 0.0;  // straight length [m]
    double radius = 0.0;  // arc radius [m]
    double angle = 0.0;   // arc angle [rad], positive
    TurnDirection direction = TurnDirection::left;

    double arc_length() const;
};

struct TrackSpec {
    std::vector<TrackSegment> segments;
    bool closed = false;

    double total_length() const;
    // Checks positive lengths/radii and, for closed tracks, that the chain
    // ends where it starts (within 1e-6 m) with matching heading.
    void validate() const;

    static TrackSpec from_json(const std::string& text);
    static TrackSpec from_json_file(const std::string& path);
    std::string to_json() const;
};

enum class GgShape { circle, diamond };

const char* to_string(GgShape s);
GgShape gg_shape_from_string(const std::string& s);

// Driving behavior of a synthetic driver: acceleration limits with the
// combined-acceleration envelope shape, the corner-exit full-throttle point,
// the coasting gap inserted after each brake release, and the brake
// application slope.
struct DriverProfile {
    double ax_max = 5.0;    // [m/s^2]
    double ax_min = -12.0;  // [m/s^2]
    double ay_max = 10.0;   // [m/s^2]
    GgShape gg_shape = GgShape::circle;
    double full_throttle_at_frac = 0.75;  // fraction of a corner's peak |ay|
    double coast_gap_s = 0.0;             // between brake release and throttle
    double brake_ramp_barps = 400.0;      // pressure application slope

    void validate() const;

    static DriverProfile from_json(const std::string& text);
    static DriverProfile from_json_file(const std::string& path);
    std::string to_json() const;
};

struct CornerTruth {
    std::size_t apex_sample = 0;  // earliest sample of peak |ay| within the corner
    double apex_ay = 0.0;         // peak |ay| [m/s^2]
    std::optional<double> throttle_acceptance_pct;  // absent when no trigger fired
};

// Analytic values the generator controls, recorded so the analysis engine
// can be verified end to end against known answers.
struct GroundTruth {
    double lap_time_s = 0.0;       // of the emitted sample grid
    double coasting_time_s = 0.0;  // exact coasting samples * dt
    double coast_gap_s = 0.0;      // profile parameter
    std::optional<double> throttle_acceptance_pct;  // mean over corners
    double brake_ramp_barps = 0.0;
    double ay_max_mps2 = 0.0;
    double v_max_mps = 0.0;
    double ax_max_mps2 = 0.0;
    double ax_min_mps2 = 0.0;
    std::size_t corner_count = 0;
    std::size_t brake_zone_count = 0;
    std::size_t n_laps = 1;
    std::size_t samples_per_lap = 0;
    std::vector<CornerTruth> corners;

    std::string to_json() const;
};

// Samples the track centerline at the given arc-length resolution with exact
// analytic position and heading per segment. Target speeds are zero; the
// lap simulation fills them in. Open tracks include the exact endpoint;
// closed tracks stop one step short of the start they reconnect to.
ReferenceLine build_reference(const TrackSpec& track, double resolution_m);

struct SimResult {
    Lap lap;
    GroundTruth truth;
    ReferenceLine planned;  // reference geometry with the solved speed profile
};

// Quasi-steady point-mass lap: three-pass speed profile (curvature cap,
// backward braking limit, forward traction limit) under the profile's
// combined-acceleration envelope, resampled to a uniform time grid.
// Generated data is kinematically consistent (yaw_rate = ay/vx,
// ay = vx^2 * curvature, vy = 0) and every sample respects the envelope.
// Pedal channels are synthesized from the profile rules; software-tagged
// laps carry an f_long_req channel consistent with the throttle.
SimResult simulate_lap(const ReferenceLine& ref, const DriverProfile& profile,
                       const VehicleParams& params, double rate_hz,
                       DriverTag tag = DriverTag::software, std::string track_id = "synth");

struct SessionResult {
    std::vector<TelemetrySample> samples;  // n_laps identical laps, time continuous
    GroundTruth truth;                     // per-lap truth (laps are identical)
    ReferenceLine planned;
};

SessionResult synth_session(const ReferenceLine& ref, const DriverProfile& profile,
                            const VehicleParams& params, double rate_hz, std::size_t n_laps,
                            DriverTag tag = DriverTag::software, std::string track_id = "synth");

// Adds seeded gaussian noise to one channel (canonical column name).
// Throttle and brake pressures are clamped back into their valid ranges.
void add_noise(std::vector<TelemetrySample>& samples, const std::string& channel, double sigma,
               std::uint64_t seed);

// Serializes samples in the exact CSV format the ingest module reads.
std::string telemetry_csv(const std::vector<TelemetrySample>& samples);

// Closed test circuit: two equal straights joined by two identical 180
// degree corners, each built as a tightening arc chain into a constant
// apex arc and a widening chain out. The gradual curvature change gives
// realistic trail-braking entries and g-g-limited exits.
struct OvalSpec {
    double straight_m = 250.0;
    double apex_radius_m = 30.0;
    double entry_radius_m = 120.0;
    double easing_angle_rad = 0.75;  // heading change per easing chain
    std::size_t easing_steps = 90;
    bool mirrored = false;  // right-hand corners instead of left
};

TrackSpec oval_track(const OvalSpec& spec = {});

}  // namespace laptel
