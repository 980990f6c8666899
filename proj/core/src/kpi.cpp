#include "laptel/kpi.hpp"

#include <algorithm>
#include <cmath>

#include "laptel/errors.hpp"
#include "laptel/geometry.hpp"

namespace laptel {

namespace {

const std::array<KpiInfo, kKpiCount> kTable = {{
    {KpiId::v_max, "v_max_mps", "max. velocity", "m/s", false, 0},
    {KpiId::ax_max, "ax_max_mps2", "max./min. long. acceleration", "m/s^2", false, 1},
    {KpiId::ax_min, "ax_min_mps2", "max./min. long. acceleration", "m/s^2", true, 1},
    {KpiId::ay_max, "ay_max_mps2", "max. lat. acceleration", "m/s^2", false, 2},
    {KpiId::lap_time, "lap_time_s", "lap time", "s", false, 3},
    {KpiId::throttle_acceptance, "throttle_acceptance_pct", "throttle acceptance", "%", false, 4},
    {KpiId::coasting_time, "coasting_time_s", "coasting time", "s", false, 5},
    {KpiId::brake_aggression, "brake_aggression_barps", "brake pressure aggression", "bar/s",
     false, 6},
    {KpiId::brake_release, "brake_release_barps", "brake release smoothness", "bar/s", false, 7},
    {KpiId::braking_quickness, "braking_quickness_s", "braking quickness", "s", false, 8},
    {KpiId::steering_speed, "steering_speed_radps", "steering speed", "rad/s", false, 9},
    {KpiId::steering_integral, "steering_integral_rads", "steering integral", "rad s", false, 10},
    {KpiId::att_vel_pos, "att_vel_pos_radps", "attitude velocity", "rad/s", false, 11},
    {KpiId::att_vel_neg, "att_vel_neg_radps", "attitude velocity", "rad/s", true, 11},
    {KpiId::d_slip_pos, "d_slip_pos_rad", "delta tire slip angle", "rad", false, 12},
    {KpiId::d_slip_neg, "d_slip_neg_rad", "delta tire slip angle", "rad", true, 12},
    {KpiId::lat_dev, "lat_dev_m", "lateral deviation", "m", false, 13},
}};

}  // namespace

const std::array<KpiInfo, kKpiCount>& kpi_table() { return kTable; }

const KpiInfo& kpi_info(KpiId id) { return kTable[static_cast<std::size_t>(id)]; }

std::optional<KpiId> kpi_from_key(const std::string& key) {
    for (const auto& info : kTable) {
        if (key == info.key) return info.id;
    }
    return std::nullopt;
}

void KpiReport::mark_absent(KpiId id, std::string reason) {
    values[static_cast<std::size_t>(id)] = std::nullopt;
    absent_reason[static_cast<std::size_t>(id)] = std::move(reason);
}

std::optional<double> throttle_acceptance(const Lap& lap, const MathChannels& channels,
                                          const std::vector<CornerSegment>& corners,
                                          double full_throttle_thresh, KpiDiagnostics* diag) {
    if (diag) diag->corner_count = corners.size();
    if (corners.empty()) return std::nullopt;

    const std::size_t n = lap.size();
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t c = 0; c < corners.size(); ++c) {
        const auto& corner = corners[c];
        const std::size_t window_end = (c + 1 < corners.size()) ? corners[c + 1].entry_idx : n;
        for (std::size_t j = corner.apex_idx; j < window_end; ++j) {
            if (channels.throttle_eff[j] >= full_throttle_thresh) {
                sum += 100.0 * std::abs(lap.samples[j].ay) / corner.ay_max;
                ++counted;
                break;
            }
        }
    }
    if (diag) diag->corners_with_full_throttle = counted;
    if (counted == 0) return std::nullopt;
    return sum / static_cast<double>(counted);
}

double coasting_time(const ActivityMask& mask, double dt) {
    std::size_t count = 0;
    for (auto c : mask.coasting) count += (c != 0);
    return dt * static_cast<double>(count);
}

BrakeStats brake_derivative_stats(const MathChannels& channels, double rate_floor_barps,
                                  KpiDiagnostics* diag) {
    double rise_sum = 0.0, fall_sum = 0.0;
    std::size_t rise_n = 0, fall_n = 0;
    for (double r : channels.p_brake_rate) {
        if (r > rate_floor_barps) {
            rise_sum += r;
            ++rise_n;
        } else if (r < -rate_floor_barps) {
            fall_sum += -r;
            ++fall_n;
        }
    }
    if (diag) {
        diag->brake_rise_samples = rise_n;
        diag->brake_release_samples = fall_n;
    }
    BrakeStats stats;
    stats.aggression = rise_n ? rise_sum / static_cast<double>(rise_n) : 0.0;
    stats.release = fall_n ? fall_sum / static_cast<double>(fall_n) : 0.0;
    return stats;
}

std::optional<double> braking_quickness(const std::vector<BrakingEvent>& events, double dt) {
    if (events.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto& ev : events) {
        sum += dt * static_cast<double>(ev.peak_decel_idx - ev.start_idx);
    }
    return sum / static_cast<double>(events.size());
}

double steering_speed(const MathChannels& channels) {
    if (channels.steer_rate.empty()) return 0.0;
    double sum = 0.0;
    for (double r : channels.steer_rate) sum += std::abs(r);
    return sum / static_cast<double>(channels.steer_rate.size());
}

double steering_integral(const std::vector<double>& steer, double dt) {
    double sum = 0.0;
    for (double d : steer) sum += std::abs(d);
    return sum * dt;
}

StabilitySplit stability_split_averages(const MathChannels& channels, KpiDiagnostics* diag) {
    auto split_mean = [](const MaskedSeries& s, double& pos, double& neg, std::size_t& valid_n,
                         std::size_t& pos_n, std::size_t& neg_n) {
        double pos_sum = 0.0, neg_sum = 0.0;
        pos_n = neg_n = valid_n = 0;
        for (std::size_t i = 0; i < s.value.size(); ++i) {
            if (!s.valid[i]) continue;
            ++valid_n;
            if (s.value[i] > 0.0) {
                pos_sum += s.value[i];
                ++pos_n;
            } else if (s.value[i] < 0.0) {
                neg_sum += s.value[i];
                ++neg_n;
            }
        }
        pos = pos_n ? pos_sum / static_cast<double>(pos_n) : 0.0;
        neg = neg_n ? neg_sum / static_cast<double>(neg_n) : 0.0;
    };

    StabilitySplit out;
    std::size_t av_valid = 0, av_pos = 0, av_neg = 0;
    std::size_t ds_valid = 0, ds_pos = 0, ds_neg = 0;
    split_mean(channels.att_vel, out.att_vel_pos, out.att_vel_neg, av_valid, av_pos, av_neg);
    split_mean(channels.d_slip, out.d_slip_pos, out.d_slip_neg, ds_valid, ds_pos, ds_neg);
    if (diag) {
        diag->att_vel_valid = av_valid;
        diag->att_vel_pos_n = av_pos;
        diag->att_vel_neg_n = av_neg;
        diag->d_slip_valid = ds_valid;
        diag->d_slip_pos_n = ds_pos;
        diag->d_slip_neg_n = ds_neg;
    }
    return out;
}

double lateral_deviation(const Lap& lap, const ReferenceLine& ref, double sanity_m,
                         KpiDiagnostics* diag) {
    ref.validate();
    double sum = 0.0;
    double signed_sum = 0.0;
    double max_dev = 0.0;
    for (const auto& smp : lap.samples) {
        const Projection p = project_point(ref, smp.x, smp.y);
        if (p.distance > sanity_m) {
            throw Error(errc::ref_too_far, "lap is more than " + std::to_string(sanity_m) +
                                               " m from the reference line; wrong track?");
        }
        sum += p.distance;
        signed_sum += p.signed_offset;
        max_dev = std::max(max_dev, p.distance);
    }
    const double n = static_cast<double>(lap.size());
    if (diag) {
        diag->lat_dev_signed_mean = signed_sum / n;
        diag->lat_dev_max = max_dev;
    }
    return sum / n;
}

Extrema extrema(const Lap& lap) {
    Extrema e;
    e.v_max = lap.samples.front().vx;
    e.ax_max = lap.samples.front().ax;
    e.ax_min = lap.samples.front().ax;
    e.ay_max = std::abs(lap.samples.front().ay);
    for (const auto& smp : lap.samples) {
        e.v_max = std::max(e.v_max, smp.vx);
        e.ax_max = std::max(e.ax_max, smp.ax);
        e.ax_min = std::min(e.ax_min, smp.ax);
        e.ay_max = std::max(e.ay_max, std::abs(smp.ay));
    }
    return e;
}

Segmentation segment_lap(const Lap& lap, const MathChannels& channels, const SegmentConfig& cfg) {
    Segmentation seg;
    seg.corners = detect_corners(lap, channels, cfg.ay_corner_thresh_mps2, cfg.corner_min_dur_s);
    seg.braking = detect_braking(lap, channels, cfg.brake_on_thresh_bar);
    seg.mask = activity_mask(channels, cfg.throttle_on_thresh, cfg.brake_on_thresh_bar);
    return seg;
}

KpiReport compute_report(const Lap& lap, const MathChannels& channels, const Segmentation& seg,
                         const ReferenceLine* ref, const KpiConfig& cfg) {
    KpiReport report;
    report.driver_tag = lap.driver_tag;
    report.track_id = lap.track_id;

    const Extrema ext = extrema(lap);
    report.at(KpiId::v_max) = ext.v_max;
    report.at(KpiId::ax_max) = ext.ax_max;
    report.at(KpiId::ax_min) = ext.ax_min;
    report.at(KpiId::ay_max) = ext.ay_max;
    report.at(KpiId::lap_time) = lap.lap_time;

    auto ta = throttle_acceptance(lap, channels, seg.corners, cfg.full_throttle_thresh,
                                  &report.diagnostics);
    if (ta) {
        report.at(KpiId::throttle_acceptance) = *ta;
    } else {
        report.mark_absent(KpiId::throttle_acceptance,
                           seg.corners.empty() ? "no corners detected"
                                               : "no full-throttle sample after any apex");
    }

    report.at(KpiId::coasting_time) = coasting_time(seg.mask, lap.dt);
    std::size_t coast_n = 0;
    for (auto c : seg.mask.coasting) coast_n += (c != 0);
    report.diagnostics.coasting_samples = coast_n;

    const BrakeStats bs =
        brake_derivative_stats(channels, cfg.brake_rate_floor_barps, &report.diagnostics);
    report.at(KpiId::brake_aggression) = bs.aggression;
    report.at(KpiId::brake_release) = bs.release;

    report.diagnostics.braking_event_count = seg.braking.size();
    auto quickness = braking_quickness(seg.braking, lap.dt);
    if (quickness) {
        report.at(KpiId::braking_quickness) = *quickness;
    } else {
        report.mark_absent(KpiId::braking_quickness, "no braking events");
    }

    report.at(KpiId::steering_speed) = steering_speed(channels);
    report.at(KpiId::steering_integral) =
        steering_integral(lap.channel(&TelemetrySample::steer), lap.dt);

    const StabilitySplit split = stability_split_averages(channels, &report.diagnostics);
    report.at(KpiId::att_vel_pos) = split.att_vel_pos;
    report.at(KpiId::att_vel_neg) = split.att_vel_neg;
    report.at(KpiId::d_slip_pos) = split.d_slip_pos;
    report.at(KpiId::d_slip_neg) = split.d_slip_neg;

    if (ref != nullptr) {
        report.at(KpiId::lat_dev) =
            lateral_deviation(lap, *ref, cfg.ref_sanity_dist_m, &report.diagnostics);
    } else {
        report.mark_absent(KpiId::lat_dev, "no reference line provided");
    }
    return report;
}

}  // namespace laptel
