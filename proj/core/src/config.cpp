#include "laptel/config.hpp"

#include <json.hpp>

#include "laptel/errors.hpp"
#include "laptel/ingest.hpp"

namespace laptel {

namespace {
using nlohmann::json;
}

void EngineConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0)) {
            throw Error(errc::invalid_argument, std::string(name) + " must be positive");
        }
    };
    positive(rate_hz, "rate_hz");
    if (rate_hz > 1000.0) {
        throw Error(errc::invalid_argument, "rate_hz must not exceed 1000");
    }
    positive(max_gap_s, "max_gap_s");
    positive(channels.smooth_window_s, "smooth_window_s");
    positive(channels.v_min_mps, "v_min_mps");
    positive(segment.ay_corner_thresh_mps2, "ay_corner_thresh_mps2");
    positive(segment.corner_min_dur_s, "corner_min_dur_s");
    positive(segment.brake_on_thresh_bar, "brake_on_thresh_bar");
    positive(segment.throttle_on_thresh, "throttle_on_thresh");
    positive(kpi.full_throttle_thresh, "full_throttle_thresh");
    positive(kpi.brake_rate_floor_barps, "brake_rate_floor_barps");
    positive(kpi.ref_sanity_dist_m, "ref_sanity_dist_m");
    positive(osc_cutoff_hz, "osc_cutoff_hz");
    if (gg_bins < 4) {
        throw Error(errc::invalid_argument, "gg_bins must be at least 4");
    }
    vehicle.validate();
}

EngineConfig EngineConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::unparsable_cell, std::string("config JSON: ") + e.what());
    }
    EngineConfig cfg;
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("rate_hz", cfg.rate_hz);
    get("max_gap_s", cfg.max_gap_s);
    get("smooth_window_s", cfg.channels.smooth_window_s);
    get("v_min_mps", cfg.channels.v_min_mps);
    get("use_artificial_throttle", cfg.channels.use_artificial_throttle);
    get("ay_corner_thresh_mps2", cfg.segment.ay_corner_thresh_mps2);
    get("corner_min_dur_s", cfg.segment.corner_min_dur_s);
    get("brake_on_thresh_bar", cfg.segment.brake_on_thresh_bar);
    get("throttle_on_thresh", cfg.segment.throttle_on_thresh);
    get("full_throttle_thresh", cfg.kpi.full_throttle_thresh);
    get("brake_rate_floor_barps", cfg.kpi.brake_rate_floor_barps);
    get("ref_sanity_dist_m", cfg.kpi.ref_sanity_dist_m);
    get("osc_cutoff_hz", cfg.osc_cutoff_hz);
    get("gg_bins", cfg.gg_bins);
    if (j.contains("vehicle")) {
        const auto& v = j.at("vehicle");
        auto getv = [&v](const char* key, double& field) {
            if (v.contains(key)) field = v.at(key).get<double>();
        };
        getv("lf_m", cfg.vehicle.lf);
        getv("lr_m", cfg.vehicle.lr);
        getv("f_long_max_n", cfg.vehicle.f_long_max);
        getv("p_brake_max_bar", cfg.vehicle.p_brake_max);
    }
    cfg.validate();
    return cfg;
}

EngineConfig EngineConfig::from_json_file(const std::string& path) {
    return from_json(read_file(path));
}

std::string EngineConfig::to_json() const {
    json j{{"rate_hz", rate_hz},
           {"max_gap_s", max_gap_s},
           {"smooth_window_s", channels.smooth_window_s},
           {"v_min_mps", channels.v_min_mps},
           {"use_artificial_throttle", channels.use_artificial_throttle},
           {"ay_corner_thresh_mps2", segment.ay_corner_thresh_mps2},
           {"corner_min_dur_s", segment.corner_min_dur_s},
           {"brake_on_thresh_bar", segment.brake_on_thresh_bar},
           {"throttle_on_thresh", segment.throttle_on_thresh},
           {"full_throttle_thresh", kpi.full_throttle_thresh},
           {"brake_rate_floor_barps", kpi.brake_rate_floor_barps},
           {"ref_sanity_dist_m", kpi.ref_sanity_dist_m},
           {"osc_cutoff_hz", osc_cutoff_hz},
           {"gg_bins", gg_bins},
           {"vehicle",
            {{"lf_m", vehicle.lf},
             {"lr_m", vehicle.lr},
             {"f_long_max_n", vehicle.f_long_max},
             {"p_brake_max_bar", vehicle.p_brake_max}}}};
    return j.dump(2) + "\n";
}

}  // namespace laptel
