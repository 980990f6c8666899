#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laptel/channels.hpp"
#include "laptel/segment.hpp"
#include "laptel/types.hpp"

namespace laptel {

// Lap-level KPI identifiers in report row order. Paired rows
// (max/min longitudinal acceleration, attitude velocity, delta slip angle)
// appear as two consecutive entries.
enum class KpiId : std::size_t {
    v_max = 0,
    ax_max,
    ax_min,
    ay_max,
    lap_time,
    throttle_acceptance,
    coasting_time,
    brake_aggression,
    brake_release,
    braking_quickness,
    steering_speed,
    steering_integral,
    att_vel_pos,
    att_vel_neg,
    d_slip_pos,
    d_slip_neg,
    lat_dev,
};

inline constexpr std::size_t kKpiCount = 17;

struct KpiInfo {
    KpiId id;
    const char* key;    // stable JSON/CSV identifier
    const char* label;  // human readable row label
    const char* unit;
    bool sign_fixed_negative;  // KPI is <= 0 by construction (compared by magnitude)
    int pair_row;              // shared row index for paired cells, -1 for single rows
};

// Static table in report row order.
const std::array<KpiInfo, kKpiCount>& kpi_table();
const KpiInfo& kpi_info(KpiId id);
std::optional<KpiId> kpi_from_key(const std::string& key);

struct KpiDiagnostics {
    std::size_t corner_count = 0;
    std::size_t corners_with_full_throttle = 0;
    std::size_t braking_event_count = 0;
    std::size_t coasting_samples = 0;
    std::size_t att_vel_valid = 0;
    std::size_t att_vel_pos_n = 0;
    std::size_t att_vel_neg_n = 0;
    std::size_t d_slip_valid = 0;
    std::size_t d_slip_pos_n = 0;
    std::size_t d_slip_neg_n = 0;
    std::size_t brake_rise_samples = 0;
    std::size_t brake_release_samples = 0;
    double lat_dev_signed_mean = 0.0;
    double lat_dev_max = 0.0;
};

// One lap's KPI row set. Absent KPIs (for example throttle acceptance on a
// lap without corners) carry a reason instead of a value; they are never
// coerced to zero.
struct KpiReport {
    DriverTag driver_tag = DriverTag::other;
    std::string track_id;
    std::optional<std::int64_t> epoch;  // optional reproducibility stamp for the meta block
    std::array<std::optional<double>, kKpiCount> values;
    std::array<std::string, kKpiCount> absent_reason;
    KpiDiagnostics diagnostics;

    std::optional<double>& at(KpiId id) { return values[static_cast<std::size_t>(id)]; }
    const std::optional<double>& at(KpiId id) const {
        return values[static_cast<std::size_t>(id)];
    }
    void mark_absent(KpiId id, std::string reason);
};

struct KpiConfig {
    double full_throttle_thresh = 0.95;     // pedal fraction counting as full throttle
    double brake_rate_floor_barps = 5.0;    // derivative noise floor for the split means
    double ref_sanity_dist_m = 50.0;        // beyond this the lap is on the wrong track
};

// Per-corner: the lateral acceleration at the first full-throttle sample
// from the apex on, as a percentage of the corner's own peak. Lap value is
// the mean over corners that have such a sample; returns nullopt when no
// corner qualifies.
std::optional<double> throttle_acceptance(const Lap& lap, const MathChannels& channels,
                                          const std::vector<CornerSegment>& corners,
                                          double full_throttle_thresh,
                                          KpiDiagnostics* diag = nullptr);

double coasting_time(const ActivityMask& mask, double dt);

struct BrakeStats {
    double aggression = 0.0;  // mean positive pressure rate [bar/s]
    double release = 0.0;     // mean |negative pressure rate| [bar/s]
};

// Conditional means of the total-pressure derivative above/below the rate
// floor; both zero when no samples qualify.
BrakeStats brake_derivative_stats(const MathChannels& channels, double rate_floor_barps,
                                  KpiDiagnostics* diag = nullptr);

// Mean time from braking start to the first deceleration peak.
std::optional<double> braking_quickness(const std::vector<BrakingEvent>& events, double dt);

// Lap mean of |d(steer)/dt|.
double steering_speed(const MathChannels& channels);

// Rectangle-rule integral of |steer| over the lap [rad s].
double steering_integral(const std::vector<double>& steer, double dt);

struct StabilitySplit {
    double att_vel_pos = 0.0;
    double att_vel_neg = 0.0;
    double d_slip_pos = 0.0;
    double d_slip_neg = 0.0;
};

// Conditional means over strictly positive / strictly negative valid
// samples; zero when a side has no samples.
StabilitySplit stability_split_averages(const MathChannels& channels,
                                        KpiDiagnostics* diag = nullptr);

// Mean unsigned perpendicular distance from the lap positions to the
// reference polyline. Throws RefTooFar when any sample exceeds sanity_m.
double lateral_deviation(const Lap& lap, const ReferenceLine& ref, double sanity_m = 50.0,
                         KpiDiagnostics* diag = nullptr);

struct Extrema {
    double v_max = 0.0;
    double ax_max = 0.0;
    double ax_min = 0.0;
    double ay_max = 0.0;
};

Extrema extrema(const Lap& lap);

struct Segmentation {
    std::vector<CornerSegment> corners;
    std::vector<BrakingEvent> braking;
    ActivityMask mask;
};

Segmentation segment_lap(const Lap& lap, const MathChannels& channels, const SegmentConfig& cfg);

// Assembles the full report. ref may be null, in which case the lateral
// deviation KPI is reported absent.
KpiReport compute_report(const Lap& lap, const MathChannels& channels, const Segmentation& seg,
                         const ReferenceLine* ref, const KpiConfig& cfg);

}  // namespace laptel
