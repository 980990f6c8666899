#include "laptel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

#include "laptel/errors.hpp"
#include "laptel/geometry.hpp"
#include "laptel/ingest.hpp"

namespace laptel {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kClosureTolM = 1e-6;
constexpr double kVInf = 1e9;

// Generator-side segmentation rules, aligned with the engine defaults so
// recorded truth matches what the analysis finds on clean data.
constexpr double kCornerAyThresh = 3.0;      // [m/s^2]
constexpr double kCornerMinDurS = 0.5;       // [s]
constexpr double kBrakeZoneAxEps = 0.5;      // [m/s^2]
constexpr double kMaintenanceThrottle = 0.3; // pedal between coast end and full throttle
constexpr double kCoastThrottleThresh = 0.05;
constexpr double kCoastBrakeThreshBar = 1.0;
constexpr double kFullThrottleThresh = 0.95;
constexpr double kBrakeFrontShare = 0.6;

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;  // continuous (not wrapped)
};

Pose advance_pose(const Pose& p, const TrackSegment& seg, double u) {
    Pose out = p;
    if (seg.kind == TrackSegment::Kind::straight) {
        out.x = p.x + u * std::cos(p.psi);
        out.y = p.y + u * std::sin(p.psi);
        return out;
    }
    const double phi = u / seg.radius;
    if (seg.direction == TurnDirection::left) {
        const double cx = p.x - seg.radius * std::sin(p.psi);
        const double cy = p.y + seg.radius * std::cos(p.psi);
        out.x = cx + seg.radius * std::sin(p.psi + phi);
        out.y = cy - seg.radius * std::cos(p.psi + phi);
        out.psi = p.psi + phi;
    } else {
        const double cx = p.x + seg.radius * std::sin(p.psi);
        const double cy = p.y - seg.radius * std::cos(p.psi);
        out.x = cx - seg.radius * std::sin(p.psi - phi);
        out.y = cy + seg.radius * std::cos(p.psi - phi);
        out.psi = p.psi - phi;
    }
    return out;
}

struct Run {
    std::size_t begin = 0;  // inclusive
    std::size_t end = 0;    // inclusive
};

}  // namespace

double TrackSegment::arc_length() const {
    return kind == Kind::straight ? length : radius * angle;
}

double TrackSpec::total_length() const {
    double sum = 0.0;
    for (const auto& seg : segments) sum += seg.arc_length();
    return sum;
}

void TrackSpec::validate() const {
    if (segments.empty()) {
        throw Error(errc::invalid_argument, "track has no segments");
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        if (seg.kind == TrackSegment::Kind::straight) {
            if (!(seg.length > 0)) {
                throw Error(errc::invalid_argument,
                            "segment " + std::to_string(i) + ": straight length must be positive");
            }
        } else {
            if (!(seg.radius > 0) || !(seg.angle > 0)) {
                throw Error(errc::invalid_argument,
                            "segment " + std::to_string(i) +
                                ": arc radius and angle must be positive");
            }
        }
    }
    if (closed) {
        Pose pose;
        for (const auto& seg : segments) pose = advance_pose(pose, seg, seg.arc_length());
        const double gap = std::hypot(pose.x, pose.y);
        if (gap > kClosureTolM) {
            throw Error(errc::invalid_argument,
                        "closed track endpoint misses the start by " + std::to_string(gap) + " m");
        }
        if (std::abs(wrap_angle(pose.psi)) > 1e-9) {
            throw Error(errc::invalid_argument, "closed track heading does not return to start");
        }
    }
}

const char* to_string(GgShape s) {
    return s == GgShape::circle ? "circle" : "diamond";
}

GgShape gg_shape_from_string(const std::string& s) {
    if (s == "circle") return GgShape::circle;
    if (s == "diamond") return GgShape::diamond;
    throw Error(errc::invalid_argument, "unknown gg shape '" + s + "'");
}

void DriverProfile::validate() const {
    if (!(ax_max > 0) || !(ax_min < 0)) {
        throw Error(errc::invalid_argument, "profile needs ax_max > 0 > ax_min");
    }
    if (ay_max < 0) {
        throw Error(errc::invalid_argument, "profile ay_max must not be negative");
    }
    if (full_throttle_at_frac < 0 || full_throttle_at_frac > 1) {
        throw Error(errc::invalid_argument, "full_throttle_at_frac must be within [0, 1]");
    }
    if (coast_gap_s < 0) {
        throw Error(errc::invalid_argument, "coast_gap_s must not be negative");
    }
    if (!(brake_ramp_barps > 0)) {
        throw Error(errc::invalid_argument, "brake_ramp_barps must be positive");
    }
}

TrackSpec TrackSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::unparsable_cell, std::string("track JSON: ") + e.what());
    }
    TrackSpec spec;
    spec.closed = j.value("closed", false);
    if (!j.contains("segments") || !j.at("segments").is_array()) {
        throw Error(errc::invalid_argument, "track JSON needs a 'segments' array");
    }
    for (const auto& s : j.at("segments")) {
        TrackSegment seg;
        const std::string type = s.value("type", "");
        if (type == "straight") {
            seg.kind = TrackSegment::Kind::straight;
            seg.length = s.value("length_m", 0.0);
        } else if (type == "arc") {
            seg.kind = TrackSegment::Kind::arc;
            seg.radius = s.value("radius_m", 0.0);
            seg.angle = s.value("angle_rad", 0.0);
            const std::string dir = s.value("direction", "left");
            if (dir == "left") {
                seg.direction = TurnDirection::left;
            } else if (dir == "right") {
                seg.direction = TurnDirection::right;
            } else {
                throw Error(errc::invalid_argument, "arc direction must be left or right");
            }
        } else {
            throw Error(errc::invalid_argument, "segment type must be straight or arc");
        }
        spec.segments.push_back(seg);
    }
    spec.validate();
    return spec;
}

TrackSpec TrackSpec::from_json_file(const std::string& path) {
    return from_json(read_file(path));
}

std::string TrackSpec::to_json() const {
    json segs = json::array();
    for (const auto& seg : segments) {
        if (seg.kind == TrackSegment::Kind::straight) {
            segs.push_back({{"type", "straight"}, {"length_m", seg.length}});
        } else {
            segs.push_back({{"type", "arc"},
                            {"radius_m", seg.radius},
                            {"angle_rad", seg.angle},
                            {"direction", seg.direction == TurnDirection::left ? "left" : "right"}});
        }
    }
    return json{{"closed", closed}, {"segments", segs}}.dump(2) + "\n";
}

DriverProfile DriverProfile::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::unparsable_cell, std::string("profile JSON: ") + e.what());
    }
    DriverProfile p;
    auto get = [&j](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    get("ax_max_mps2", p.ax_max);
    get("ax_min_mps2", p.ax_min);
    get("ay_max_mps2", p.ay_max);
    if (j.contains("gg_shape")) p.gg_shape = gg_shape_from_string(j.at("gg_shape"));
    get("full_throttle_at_frac", p.full_throttle_at_frac);
    get("coast_gap_s", p.coast_gap_s);
    get("brake_ramp_barps", p.brake_ramp_barps);
    p.validate();
    return p;
}

DriverProfile DriverProfile::from_json_file(const std::string& path) {
    return from_json(read_file(path));
}

std::string DriverProfile::to_json() const {
    return json{{"ax_max_mps2", ax_max},
                {"ax_min_mps2", ax_min},
                {"ay_max_mps2", ay_max},
                {"gg_shape", to_string(gg_shape)},
                {"full_throttle_at_frac", full_throttle_at_frac},
                {"coast_gap_s", coast_gap_s},
                {"brake_ramp_barps", brake_ramp_barps}}
               .dump(2) +
           "\n";
}

std::string GroundTruth::to_json() const {
    json corners_json = json::array();
    for (const auto& c : corners) {
        json cj{{"apex_sample", c.apex_sample}, {"apex_ay_mps2", c.apex_ay}};
        if (c.throttle_acceptance_pct) {
            cj["throttle_acceptance_pct"] = *c.throttle_acceptance_pct;
        } else {
            cj["throttle_acceptance_pct"] = nullptr;
        }
        corners_json.push_back(cj);
    }
    json j{{"lap_time_s", lap_time_s},
           {"coasting_time_s", coasting_time_s},
           {"coast_gap_s", coast_gap_s},
           {"brake_ramp_barps", brake_ramp_barps},
           {"ay_max_mps2", ay_max_mps2},
           {"v_max_mps", v_max_mps},
           {"ax_max_mps2", ax_max_mps2},
           {"ax_min_mps2", ax_min_mps2},
           {"corner_count", corner_count},
           {"brake_zone_count", brake_zone_count},
           {"n_laps", n_laps},
           {"samples_per_lap", samples_per_lap},
           {"corners", corners_json}};
    if (throttle_acceptance_pct) {
        j["throttle_acceptance_pct"] = *throttle_acceptance_pct;
    } else {
        j["throttle_acceptance_pct"] = nullptr;
    }
    return j.dump(2) + "\n";
}

ReferenceLine build_reference(const TrackSpec& track, double resolution_m) {
    track.validate();
    if (!(resolution_m > 0)) {
        throw Error(errc::invalid_argument, "resolution must be positive");
    }
    const double total = track.total_length();

    ReferenceLine ref;
    ref.closed = track.closed;

    std::size_t seg_idx = 0;
    double seg_start_s = 0.0;
    Pose seg_pose;

    auto emit = [&](double s) {
        while (seg_idx + 1 < track.segments.size() &&
               s >= seg_start_s + track.segments[seg_idx].arc_length() - 1e-12) {
            seg_pose = advance_pose(seg_pose, track.segments[seg_idx],
                                    track.segments[seg_idx].arc_length());
            seg_start_s += track.segments[seg_idx].arc_length();
            ++seg_idx;
        }
        const Pose p = advance_pose(seg_pose, track.segments[seg_idx], s - seg_start_s);
        ref.points.push_back({s, p.x, p.y, wrap_angle(p.psi), 0.0});
    };

    for (double s = 0.0; s < total - 1e-9; s += resolution_m) emit(s);
    if (!track.closed) emit(total);

    ref.validate();
    return ref;
}

namespace {

// Combined-acceleration envelope: fraction of the longitudinal limit still
// available at a given |ay|.
double shape_factor(const DriverProfile& profile, double ay_abs) {
    if (profile.ay_max <= 0) return 1.0;  // straight-line driving only
    const double r = ay_abs / profile.ay_max;
    if (profile.gg_shape == GgShape::circle) {
        return std::sqrt(std::max(0.0, 1.0 - r * r));
    }
    return std::max(0.0, 1.0 - r);
}

std::vector<Run> find_runs(const std::vector<std::uint8_t>& flag, std::size_t min_len) {
    std::vector<Run> runs;
    std::size_t i = 0;
    const std::size_t n = flag.size();
    while (i < n) {
        if (!flag[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && flag[j + 1]) ++j;
        if (j - i + 1 >= min_len) runs.push_back({i, j});
        i = j + 1;
    }
    return runs;
}

// Same-sign corner runs of |ay| above the corner threshold.
std::vector<Run> corner_runs(const std::vector<double>& ay, double dt) {
    const std::size_t min_len = static_cast<std::size_t>(std::ceil(kCornerMinDurS / dt - 1e-9));
    std::vector<Run> runs;
    std::size_t i = 0;
    const std::size_t n = ay.size();
    while (i < n) {
        if (std::abs(ay[i]) <= kCornerAyThresh) {
            ++i;
            continue;
        }
        const bool positive = ay[i] > 0.0;
        std::size_t j = i;
        while (j + 1 < n && std::abs(ay[j + 1]) > kCornerAyThresh && (ay[j + 1] > 0.0) == positive) {
            ++j;
        }
        if (j - i + 1 >= min_len) runs.push_back({i, j});
        i = j + 1;
    }
    return runs;
}

}  // namespace

SimResult simulate_lap(const ReferenceLine& ref, const DriverProfile& profile,
                       const VehicleParams& params, double rate_hz, DriverTag tag,
                       std::string track_id) {
    ref.validate();
    profile.validate();
    params.validate();
    if (!(rate_hz > 0)) {
        throw Error(errc::invalid_argument, "rate must be positive");
    }

    const auto& pts = ref.points;
    const std::size_t n = pts.size();
    const bool closed = ref.closed;
    const std::size_t n_cells = closed ? n : n - 1;

    // Cell lengths along arc; the closing cell uses the reconnect chord.
    std::vector<double> h(n_cells);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = pts[i + 1].s - pts[i].s;
    if (closed) {
        h[n - 1] = std::hypot(pts.front().x - pts.back().x, pts.front().y - pts.back().y);
        if (h[n - 1] <= 0) {
            throw Error(errc::invalid_argument, "closed reference reconnects with zero gap");
        }
    }

    // Signed curvature from heading differences.
    std::vector<double> kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (closed) {
            const std::size_t prev = (i + n - 1) % n;
            const std::size_t next = (i + 1) % n;
            const double ds = h[prev] + h[i];
            kappa[i] = wrap_angle(pts[next].psi - pts[prev].psi) / ds;
        } else if (i == 0) {
            kappa[i] = wrap_angle(pts[1].psi - pts[0].psi) / h[0];
        } else if (i + 1 == n) {
            kappa[i] = wrap_angle(pts[n - 1].psi - pts[n - 2].psi) / h[n - 2];
        } else {
            kappa[i] = wrap_angle(pts[i + 1].psi - pts[i - 1].psi) / (h[i - 1] + h[i]);
        }
    }

    bool curved = false;
    for (double k : kappa) curved = curved || std::abs(k) > 1e-9;
    if (curved && profile.ay_max <= 0) {
        throw Error(errc::infeasible_profile, "ay_max = 0 on a curved track");
    }

    auto cap_at = [&](std::size_t i) {
        const double k = std::abs(kappa[i]);
        return k > 1e-12 ? std::sqrt(profile.ay_max / k) : kVInf;
    };
    auto drive_avail = [&](double v, double k) {
        return profile.ax_max * shape_factor(profile, v * v * std::abs(k));
    };
    auto brake_avail = [&](double v, double k) {
        return -profile.ax_min * shape_factor(profile, v * v * std::abs(k));
    };

    // Solve the speed profile on a tiled grid so closed tracks see cyclic
    // constraints; the middle copy is the steady lap.
    const std::size_t copies = closed ? 3 : 1;
    const std::size_t N = n * copies;
    std::vector<double> v(N), kk(N), hh(N - 1);
    for (std::size_t i = 0; i < N; ++i) {
        v[i] = cap_at(i % n);
        kk[i] = kappa[i % n];
    }
    for (std::size_t i = 0; i + 1 < N; ++i) hh[i] = h[i % n];
    if (!closed) v[0] = 0.0;  // standing start on open tracks

    const std::size_t cells = hh.size();
    for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;
        for (std::size_t i = cells; i-- > 0;) {
            const double lim =
                std::sqrt(v[i + 1] * v[i + 1] + 2.0 * brake_avail(v[i + 1], kk[i + 1]) * hh[i]);
            if (v[i] > lim + 1e-12) {
                v[i] = lim;
                changed = true;
            }
        }
        for (std::size_t i = 0; i < cells; ++i) {
            const double lim = std::sqrt(v[i] * v[i] + 2.0 * drive_avail(v[i], kk[i]) * hh[i]);
            if (v[i + 1] > lim + 1e-12) {
                v[i + 1] = lim;
                changed = true;
            }
        }
        if (!changed) break;
    }

    // Per-lap speeds: middle copy for closed tracks.
    const std::size_t base = closed ? n : 0;
    std::vector<double> v_lap(n + 1);
    for (std::size_t i = 0; i < n; ++i) v_lap[i] = v[base + i];
    v_lap[n] = closed ? v[base + n] : v_lap[n - 1];

    // Cell kinematics (constant acceleration per cell) and cumulative time.
    std::vector<double> accel(n_cells), tau(n_cells), ctime(n_cells + 1, 0.0);
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double v1 = v_lap[i];
        const double v2 = v_lap[i + 1];
        accel[i] = (v2 * v2 - v1 * v1) / (2.0 * h[i]);
        if (std::abs(accel[i]) > 1e-9) {
            tau[i] = (v2 - v1) / accel[i];
        } else if (v1 > 1e-9) {
            tau[i] = h[i] / v1;
        } else {
            throw Error(errc::infeasible_profile, "vehicle never gets moving");
        }
        ctime[i + 1] = ctime[i] + tau[i];
    }
    const double total_time = ctime[n_cells];

    const double dt = 1.0 / rate_hz;
    const std::size_t K = static_cast<std::size_t>(std::floor(total_time / dt + 1e-9)) + 1;
    if (K < 2) {
        throw Error(errc::infeasible_profile, "lap shorter than two samples at this rate");
    }

    std::vector<double> vx(K), s_arr(K), x_arr(K), y_arr(K), psi_arr(K), ax_arr(K), ay_arr(K),
        yaw_arr(K), steer_arr(K);
    {
        std::size_t cell = 0;
        const double wheelbase = params.lf + params.lr;
        for (std::size_t k = 0; k < K; ++k) {
            const double t = static_cast<double>(k) * dt;
            while (cell + 1 < n_cells && ctime[cell + 1] <= t) ++cell;
            const double tloc = t - ctime[cell];
            const double v1 = v_lap[cell];
            const double a = accel[cell];
            const double vk = v1 + a * tloc;
            double ds = v1 * tloc + 0.5 * a * tloc * tloc;
            ds = std::clamp(ds, 0.0, h[cell]);
            const double frac = ds / h[cell];

            const std::size_t ia = cell;
            const std::size_t ib = (cell + 1) % n;
            const double s_b = (cell + 1 < n) ? pts[cell + 1].s : pts[cell].s + h[cell];

            vx[k] = vk;
            s_arr[k] = pts[ia].s + frac * (s_b - pts[ia].s);
            x_arr[k] = pts[ia].x + frac * (pts[ib].x - pts[ia].x);
            y_arr[k] = pts[ia].y + frac * (pts[ib].y - pts[ia].y);
            psi_arr[k] = wrap_angle(pts[ia].psi + frac * wrap_angle(pts[ib].psi - pts[ia].psi));

            const double k_cell = kappa[ia];
            ay_arr[k] = vk * vk * k_cell;
            yaw_arr[k] = vk * k_cell;
            steer_arr[k] = std::atan(wheelbase * k_cell);

            double ax = a;
            if (ax > 0) {
                ax = std::min(ax, profile.ax_max * shape_factor(profile, std::abs(ay_arr[k])));
            } else if (ax < 0) {
                ax = std::max(ax, profile.ax_min * shape_factor(profile, std::abs(ay_arr[k])));
            }
            ax_arr[k] = ax;
        }
    }

    // Pedal synthesis runs on a doubled timeline so rules spilling over the
    // lap boundary wrap correctly on closed tracks; the second copy is kept.
    const std::size_t M = closed ? 2 * K : K;
    auto ext = [&](const std::vector<double>& src) {
        std::vector<double> out(M);
        for (std::size_t k = 0; k < M; ++k) out[k] = src[k % K];
        return out;
    };
    const std::vector<double> ay_ext = ext(ay_arr);
    const std::vector<double> ax_ext = ext(ax_arr);

    std::vector<double> throttle(M, 1.0), p_total(M, 0.0);

    // Corner rule: partial throttle from corner entry until |ay| has decayed
    // to the profile's full-throttle fraction of the corner's peak.
    const std::vector<Run> corners_ext = corner_runs(ay_ext, dt);
    std::vector<std::size_t> trigger_ext;
    for (std::size_t c = 0; c < corners_ext.size(); ++c) {
        const Run& run = corners_ext[c];
        std::size_t peak = run.begin;
        for (std::size_t k = run.begin; k <= run.end; ++k) {
            if (std::abs(ay_ext[k]) > std::abs(ay_ext[peak])) peak = k;
        }
        const double target = profile.full_throttle_at_frac * std::abs(ay_ext[peak]);
        const std::size_t search_end =
            (c + 1 < corners_ext.size()) ? corners_ext[c + 1].begin : M;
        std::size_t trig = search_end;  // no trigger: partial throttle to corner end
        for (std::size_t k = peak; k < search_end; ++k) {
            if (std::abs(ay_ext[k]) <= target) {
                trig = k;
                break;
            }
        }
        trigger_ext.push_back(trig);
        const std::size_t partial_end = std::min(trig, run.end + 1);
        for (std::size_t k = run.begin; k < partial_end; ++k) throttle[k] = kMaintenanceThrottle;
    }

    // Brake zones: triangular pressure pulses with the profile's ramp slope,
    // sample aligned, capped at the reference full pressure. Throttle drops
    // the sample after pressure starts building.
    std::vector<std::uint8_t> braking_flag(M);
    for (std::size_t k = 0; k < M; ++k) braking_flag[k] = ax_ext[k] < -kBrakeZoneAxEps;
    const std::vector<Run> zones_ext = find_runs(braking_flag, 3);
    const double ramp_step = profile.brake_ramp_barps * dt;
    for (const Run& z : zones_ext) {
        const double len = static_cast<double>(z.end - z.begin + 1);
        const double peak_p = std::min(params.p_brake_max, ramp_step * 0.5 * len);
        for (std::size_t k = z.begin; k <= z.end; ++k) {
            const double rise = ramp_step * static_cast<double>(k - z.begin);
            const double fall = ramp_step * static_cast<double>(z.end - k + 1);
            p_total[k] = std::min({peak_p, rise, fall});
            if (k > z.begin) throttle[k] = 0.0;
        }
    }

    // Coasting gap after each brake release.
    const std::size_t gap_n = static_cast<std::size_t>(std::llround(profile.coast_gap_s / dt));
    for (const Run& z : zones_ext) {
        for (std::size_t k = z.end + 1; k <= z.end + gap_n && k < M; ++k) {
            if (p_total[k] > 0.0) break;  // ran into the next zone
            throttle[k] = 0.0;
        }
    }

    const std::size_t off = closed ? K : 0;

    std::vector<TelemetrySample> samples(K);
    for (std::size_t k = 0; k < K; ++k) {
        TelemetrySample& smp = samples[k];
        smp.t = static_cast<double>(k) * dt;
        smp.s = s_arr[k];
        smp.x = x_arr[k];
        smp.y = y_arr[k];
        smp.psi = psi_arr[k];
        smp.vx = vx[k];
        smp.vy = 0.0;
        smp.ax = ax_arr[k];
        smp.ay = ay_arr[k];
        smp.yaw_rate = yaw_arr[k];
        smp.steer = steer_arr[k];
        smp.throttle = throttle[off + k];
        const double p = p_total[off + k];
        smp.p_brake_f = kBrakeFrontShare * p;
        smp.p_brake_r = (1.0 - kBrakeFrontShare) * p;
        if (tag == DriverTag::software) {
            smp.f_long_req = smp.throttle > 0.0
                                 ? smp.throttle * params.f_long_max
                                 : -(p / params.p_brake_max) * params.f_long_max;
        }
    }

    SimResult result;
    result.lap = new_lap(std::move(samples), tag, std::move(track_id));

    // Ground truth from the emitted lap arrays.
    GroundTruth& truth = result.truth;
    truth.lap_time_s = static_cast<double>(K - 1) * dt;
    truth.coast_gap_s = profile.coast_gap_s;
    truth.brake_ramp_barps = profile.brake_ramp_barps;
    truth.samples_per_lap = K;

    std::size_t coast_n = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const bool t_on = result.lap.samples[k].throttle > kCoastThrottleThresh;
        const bool b_on =
            result.lap.samples[k].p_brake_f + result.lap.samples[k].p_brake_r >
            kCoastBrakeThreshBar;
        coast_n += (!t_on && !b_on);
    }
    truth.coasting_time_s = static_cast<double>(coast_n) * dt;

    truth.v_max_mps = *std::max_element(vx.begin(), vx.end());
    truth.ax_max_mps2 = *std::max_element(ax_arr.begin(), ax_arr.end());
    truth.ax_min_mps2 = *std::min_element(ax_arr.begin(), ax_arr.end());
    truth.ay_max_mps2 = 0.0;
    for (double a : ay_arr) truth.ay_max_mps2 = std::max(truth.ay_max_mps2, std::abs(a));

    const std::vector<Run> lap_corners = corner_runs(ay_arr, dt);
    truth.corner_count = lap_corners.size();
    double ta_sum = 0.0;
    std::size_t ta_n = 0;
    for (std::size_t c = 0; c < lap_corners.size(); ++c) {
        const Run& run = lap_corners[c];
        CornerTruth ct;
        ct.apex_sample = run.begin;
        for (std::size_t k = run.begin; k <= run.end; ++k) {
            if (std::abs(ay_arr[k]) > std::abs(ay_arr[ct.apex_sample])) ct.apex_sample = k;
        }
        ct.apex_ay = std::abs(ay_arr[ct.apex_sample]);
        const std::size_t search_end = (c + 1 < lap_corners.size()) ? lap_corners[c + 1].begin : K;
        for (std::size_t k = ct.apex_sample; k < search_end; ++k) {
            if (result.lap.samples[k].throttle >= kFullThrottleThresh) {
                ct.throttle_acceptance_pct = 100.0 * std::abs(ay_arr[k]) / ct.apex_ay;
                break;
            }
        }
        if (ct.throttle_acceptance_pct) {
            ta_sum += *ct.throttle_acceptance_pct;
            ++ta_n;
        }
        truth.corners.push_back(ct);
    }
    if (ta_n > 0) truth.throttle_acceptance_pct = ta_sum / static_cast<double>(ta_n);

    std::vector<std::uint8_t> lap_braking(K);
    for (std::size_t k = 0; k < K; ++k) lap_braking[k] = ax_arr[k] < -kBrakeZoneAxEps;
    truth.brake_zone_count = find_runs(lap_braking, 3).size();

    result.planned = ref;
    for (std::size_t i = 0; i < n; ++i) result.planned.points[i].v = v_lap[i];
    return result;
}

SessionResult synth_session(const ReferenceLine& ref, const DriverProfile& profile,
                            const VehicleParams& params, double rate_hz, std::size_t n_laps,
                            DriverTag tag, std::string track_id) {
    if (n_laps == 0) {
        throw Error(errc::invalid_argument, "session needs at least one lap");
    }
    SimResult sim = simulate_lap(ref, profile, params, rate_hz, tag, std::move(track_id));
    const std::size_t K = sim.lap.size();
    const double dt = sim.lap.dt;

    SessionResult session;
    session.samples.reserve(K * n_laps);
    for (std::size_t lap = 0; lap < n_laps; ++lap) {
        for (std::size_t k = 0; k < K; ++k) {
            TelemetrySample smp = sim.lap.samples[k];
            smp.t = static_cast<double>(lap * K + k) * dt;
            session.samples.push_back(smp);
        }
    }
    session.truth = sim.truth;
    session.truth.n_laps = n_laps;
    session.planned = std::move(sim.planned);
    return session;
}

void add_noise(std::vector<TelemetrySample>& samples, const std::string& channel, double sigma,
               std::uint64_t seed) {
    if (!(sigma >= 0)) {
        throw Error(errc::invalid_argument, "noise sigma must not be negative");
    }
    double TelemetrySample::* field = nullptr;
    if (channel == "s_m") field = &TelemetrySample::s;
    else if (channel == "x_m") field = &TelemetrySample::x;
    else if (channel == "y_m") field = &TelemetrySample::y;
    else if (channel == "psi_rad") field = &TelemetrySample::psi;
    else if (channel == "vx_mps") field = &TelemetrySample::vx;
    else if (channel == "vy_mps") field = &TelemetrySample::vy;
    else if (channel == "ax_mps2") field = &TelemetrySample::ax;
    else if (channel == "ay_mps2") field = &TelemetrySample::ay;
    else if (channel == "yawrate_radps") field = &TelemetrySample::yaw_rate;
    else if (channel == "steer_rad") field = &TelemetrySample::steer;
    else if (channel == "throttle") field = &TelemetrySample::throttle;
    else if (channel == "p_brake_f_bar") field = &TelemetrySample::p_brake_f;
    else if (channel == "p_brake_r_bar") field = &TelemetrySample::p_brake_r;
    else if (channel != "f_long_req_n") {
        throw Error(errc::missing_channel, "unknown channel '" + channel + "'");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (auto& smp : samples) {
        if (field != nullptr) {
            smp.*field += dist(rng);
        } else if (smp.f_long_req) {
            smp.f_long_req = *smp.f_long_req + dist(rng);
        }
        smp.throttle = std::clamp(smp.throttle, 0.0, 1.0);
        smp.p_brake_f = std::max(0.0, smp.p_brake_f);
        smp.p_brake_r = std::max(0.0, smp.p_brake_r);
    }
}

std::string telemetry_csv(const std::vector<TelemetrySample>& samples) {
    const bool with_force = !samples.empty() && samples.front().f_long_req.has_value();
    std::ostringstream out;
    out << "t_s,s_m,x_m,y_m,psi_rad,vx_mps,vy_mps,ax_mps2,ay_mps2,yawrate_radps,"
           "steer_rad,throttle,p_brake_f_bar,p_brake_r_bar";
    if (with_force) out << ",f_long_req_n";
    out << "\n";
    char line[512];
    for (const auto& s : samples) {
        std::snprintf(line, sizeof(line),
                      "%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,"
                      "%.15g,%.15g",
                      s.t, s.s, s.x, s.y, s.psi, s.vx, s.vy, s.ax, s.ay, s.yaw_rate, s.steer,
                      s.throttle, s.p_brake_f, s.p_brake_r);
        out << line;
        if (with_force) {
            std::snprintf(line, sizeof(line), ",%.15g", s.f_long_req.value_or(0.0));
            out << line;
        }
        out << "\n";
    }
    return out.str();
}

TrackSpec oval_track(const OvalSpec& spec) {
    if (!(spec.apex_radius_m > 0) || !(spec.entry_radius_m > spec.apex_radius_m) ||
        !(spec.straight_m > 0) || spec.easing_steps == 0) {
        throw Error(errc::invalid_argument, "invalid oval parameters");
    }
    const double apex_angle = kPi - 2.0 * spec.easing_angle_rad;
    if (!(apex_angle > 0)) {
        throw Error(errc::invalid_argument, "easing angle leaves no apex arc");
    }
    const TurnDirection dir = spec.mirrored ? TurnDirection::right : TurnDirection::left;
    const double m = static_cast<double>(spec.easing_steps);
    const double step_angle = spec.easing_angle_rad / m;

    auto easing_radius = [&](std::size_t k) {
        // Geometric taper from entry radius down to the apex radius.
        return spec.entry_radius_m *
               std::pow(spec.apex_radius_m / spec.entry_radius_m, static_cast<double>(k) / m);
    };

    TrackSpec track;
    track.closed = true;
    auto add_corner = [&] {
        for (std::size_t k = 1; k <= spec.easing_steps; ++k) {
            track.segments.push_back(
                {TrackSegment::Kind::arc, 0.0, easing_radius(k), step_angle, dir});
        }
        track.segments.push_back({TrackSegment::Kind::arc, 0.0, spec.apex_radius_m, apex_angle, dir});
        for (std::size_t k = spec.easing_steps; k >= 1; --k) {
            track.segments.push_back(
                {TrackSegment::Kind::arc, 0.0, easing_radius(k), step_angle, dir});
        }
    };

    track.segments.push_back({TrackSegment::Kind::straight, spec.straight_m, 0.0, 0.0, dir});
    add_corner();
    track.segments.push_back({TrackSegment::Kind::straight, spec.straight_m, 0.0, 0.0, dir});
    add_corner();
    track.validate();
    return track;
}

}  // namespace laptel
