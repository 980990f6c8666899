#include "laptel/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "laptel/errors.hpp"

namespace laptel {

namespace {

using nlohmann::json;

struct ColumnSpec {
    const char* name;
    double TelemetrySample::* field;
    bool required;
};

// Canonical telemetry columns. t_s is handled separately.
constexpr ColumnSpec kColumnSpecs[] = {
    {"s_m", &TelemetrySample::s, true},
    {"x_m", &TelemetrySample::x, true},
    {"y_m", &TelemetrySample::y, true},
    {"psi_rad", &TelemetrySample::psi, true},
    {"vx_mps", &TelemetrySample::vx, true},
    {"vy_mps", &TelemetrySample::vy, false},
    {"ax_mps2", &TelemetrySample::ax, true},
    {"ay_mps2", &TelemetrySample::ay, true},
    {"yawrate_radps", &TelemetrySample::yaw_rate, true},
    {"steer_rad", &TelemetrySample::steer, true},
    {"throttle", &TelemetrySample::throttle, true},
    {"p_brake_f_bar", &TelemetrySample::p_brake_f, true},
    {"p_brake_r_bar", &TelemetrySample::p_brake_r, true},
};

constexpr const char* kTimeColumn = "t_s";
constexpr const char* kForceColumn = "f_long_req_n";

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

double interp(const std::vector<double>& t, const std::vector<double>& y, std::size_t hint,
              double tq) {
    // hint indexes the interval [t[hint], t[hint+1]] containing tq.
    if (tq <= t[hint]) return y[hint];
    if (tq >= t[hint + 1]) return y[hint + 1];
    const double frac = (tq - t[hint]) / (t[hint + 1] - t[hint]);
    return y[hint] + frac * (y[hint + 1] - y[hint]);
}

}  // namespace

std::vector<std::string> required_columns() {
    std::vector<std::string> out{kTimeColumn};
    for (const auto& c : kColumnSpecs) {
        if (c.required) out.push_back(c.name);
    }
    return out;
}

std::vector<std::string> optional_columns() {
    std::vector<std::string> out;
    for (const auto& c : kColumnSpecs) {
        if (!c.required) out.push_back(c.name);
    }
    out.push_back(kForceColumn);
    return out;
}

SchemaMap schema_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::unparsable_cell, std::string("schema JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw Error(errc::invalid_argument, "schema mapping must be a JSON object");
    }
    SchemaMap map;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) {
            throw Error(errc::invalid_argument, "schema value for '" + key + "' must be a string");
        }
        map[key] = value.get<std::string>();
    }
    return map;
}

SchemaMap schema_from_json_file(const std::string& path) {
    return schema_from_json(read_file(path));
}

RawSeries parse_csv(std::istream& in, const SchemaMap& schema, std::string source) {
    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw Error(errc::empty_series, "empty CSV stream" +
                                            (source.empty() ? "" : " (" + source + ")"));
    }
    const std::vector<std::string> headers = split_line(header_line);

    auto file_header = [&schema](const std::string& canonical) {
        auto it = schema.find(canonical);
        return it != schema.end() ? it->second : canonical;
    };
    auto column_index = [&headers](const std::string& name) -> int {
        for (std::size_t i = 0; i < headers.size(); ++i) {
            if (headers[i] == name) return static_cast<int>(i);
        }
        return -1;
    };

    const int t_idx = column_index(file_header(kTimeColumn));
    if (t_idx < 0) {
        throw Error(errc::missing_required_column, std::string(kTimeColumn));
    }

    struct BoundColumn {
        std::string canonical;
        int index;
    };
    std::vector<BoundColumn> bound;
    for (const auto& spec : kColumnSpecs) {
        const int idx = column_index(file_header(spec.name));
        if (idx < 0) {
            if (spec.required) {
                throw Error(errc::missing_required_column, spec.name);
            }
            continue;
        }
        bound.push_back({spec.name, idx});
    }
    if (const int idx = column_index(file_header(kForceColumn)); idx >= 0) {
        bound.push_back({kForceColumn, idx});
    }

    RawSeries raw;
    raw.source = std::move(source);
    for (const auto& b : bound) raw.columns[b.canonical] = {};

    std::string line;
    std::size_t row = 0;  // data row number, 1-based in messages
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);

        auto cell_value = [&](int idx, const std::string& col) -> double {
            if (idx >= static_cast<int>(cells.size())) {
                throw Error(errc::unparsable_cell,
                            "row " + std::to_string(row) + ", column '" + col + "': missing cell");
            }
            double v = 0.0;
            if (!parse_double(cells[idx], v)) {
                throw Error(errc::unparsable_cell, "row " + std::to_string(row) + ", column '" +
                                                       col + "': '" + cells[idx] + "'");
            }
            return v;
        };

        const double tv = cell_value(t_idx, kTimeColumn);
        if (!raw.t.empty()) {
            if (tv == raw.t.back()) {
                ++raw.diagnostics.dropped_rows;  // duplicate timestamp: keep first
                continue;
            }
            if (tv < raw.t.back()) {
                throw Error(errc::non_monotonic_time,
                            "row " + std::to_string(row) + ": t goes backwards");
            }
        }
        raw.t.push_back(tv);
        for (const auto& b : bound) {
            double v = cell_value(b.index, b.canonical);
            if (b.canonical == "throttle") {
                const double clipped = std::clamp(v, 0.0, 1.0);
                if (clipped != v) ++raw.diagnostics.clipped["throttle"];
                v = clipped;
            } else if (b.canonical == "p_brake_f_bar" || b.canonical == "p_brake_r_bar") {
                if (v < 0.0) {
                    ++raw.diagnostics.clipped[b.canonical];
                    v = 0.0;
                }
            }
            raw.columns[b.canonical].push_back(v);
        }
    }

    if (raw.t.size() >= 2) {
        const double span = raw.t.back() - raw.t.front();
        raw.diagnostics.detected_rate_hz = static_cast<double>(raw.t.size() - 1) / span;
        std::vector<double> gaps(raw.t.size() - 1);
        for (std::size_t i = 0; i + 1 < raw.t.size(); ++i) gaps[i] = raw.t[i + 1] - raw.t[i];
        std::vector<double> sorted = gaps;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        const double median = sorted[sorted.size() / 2];
        for (double g : gaps) {
            if (g > 1.5 * median) ++raw.diagnostics.interpolated_gaps;
        }
    }
    return raw;
}

RawSeries parse_csv_file(const std::string& path, const SchemaMap& schema) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw Error(errc::io_error, "cannot open '" + path + "'");
    }
    return parse_csv(in, schema, path);
}

std::vector<TelemetrySample> resample(const RawSeries& raw, double rate_hz, double max_gap_s) {
    if (!(rate_hz > 0)) {
        throw Error(errc::invalid_argument, "rate must be positive");
    }
    if (raw.t.size() < 2) {
        throw Error(errc::span_too_short, "need at least 2 input samples");
    }
    const double span = raw.t.back() - raw.t.front();
    if (span < 2.0 / rate_hz) {
        throw Error(errc::span_too_short, "input spans " + std::to_string(span) +
                                              " s, need at least " +
                                              std::to_string(2.0 / rate_hz) + " s");
    }
    for (std::size_t i = 0; i + 1 < raw.t.size(); ++i) {
        const double gap = raw.t[i + 1] - raw.t[i];
        if (gap > max_gap_s) {
            throw Error(errc::gap_too_large,
                        std::to_string(gap) + " s gap at t=" + std::to_string(raw.t[i]) +
                            " (limit " + std::to_string(max_gap_s) + " s); possible sensor failure");
        }
    }

    const double dt = 1.0 / rate_hz;
    const double t0 = raw.t.front();
    // Number of grid points inside [t0, t_end]; tiny epsilon admits exact ends.
    const std::size_t n_out =
        static_cast<std::size_t>(std::floor(span / dt + 1e-9)) + 1;

    const bool has_force = raw.columns.count(kForceColumn) > 0;

    std::vector<TelemetrySample> out(n_out);
    std::size_t hint = 0;
    for (std::size_t k = 0; k < n_out; ++k) {
        const double tq = t0 + static_cast<double>(k) * dt;
        while (hint + 2 < raw.t.size() && raw.t[hint + 1] < tq) ++hint;
        TelemetrySample& smp = out[k];
        smp.t = tq;
        for (const auto& spec : kColumnSpecs) {
            auto it = raw.columns.find(spec.name);
            if (it == raw.columns.end()) continue;
            smp.*spec.field = interp(raw.t, it->second, hint, tq);
        }
        if (has_force) {
            smp.f_long_req = interp(raw.t, raw.columns.at(kForceColumn), hint, tq);
        }
    }
    return out;
}

const std::vector<Lap>& SplitResult::require_full_laps() const {
    if (laps.empty()) {
        throw Error(errc::no_lap_boundary,
                    "no full lap detected (" + std::to_string(out_laps.size()) +
                        " partial segment(s) found)");
    }
    return laps;
}

SplitResult split_laps(const std::vector<TelemetrySample>& samples, SplitMode mode,
                       const ReferenceLine* start_line, DriverTag tag, std::string track_id) {
    if (samples.size() < 2) {
        throw Error(errc::empty_series, "need at least 2 samples to split");
    }

    // Boundary indices: each marks the first sample of a new lap.
    std::vector<std::size_t> boundaries;

    if (mode == SplitMode::distance_reset) {
        double s_min = samples.front().s, s_max = samples.front().s;
        for (const auto& smp : samples) {
            s_min = std::min(s_min, smp.s);
            s_max = std::max(s_max, smp.s);
        }
        const double track_len = s_max - s_min;
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (samples[i].s < samples[i - 1].s - 0.5 * track_len) {
                boundaries.push_back(i);
            }
        }
    } else {
        if (start_line == nullptr || start_line->points.empty()) {
            throw Error(errc::invalid_argument,
                        "line_crossing mode needs a reference line with a start point");
        }
        const ReferencePoint& start = start_line->points.front();
        const double hx = std::cos(start.psi);
        const double hy = std::sin(start.psi);
        auto along = [&](const TelemetrySample& smp) {
            return (smp.x - start.x) * hx + (smp.y - start.y) * hy;
        };
        auto near_start = [&](const TelemetrySample& smp) {
            return std::hypot(smp.x - start.x, smp.y - start.y) <= 10.0;
        };
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (along(samples[i - 1]) < 0.0 && along(samples[i]) >= 0.0 &&
                near_start(samples[i])) {
                boundaries.push_back(i);
            }
        }
    }

    SplitResult result;
    auto make_lap = [&](std::size_t begin, std::size_t end, bool out) {
        if (end - begin < 2) return;  // degenerate sliver at a boundary
        std::vector<TelemetrySample> part(samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                          samples.begin() + static_cast<std::ptrdiff_t>(end));
        Lap lap = new_lap(std::move(part), tag, track_id);
        lap.out_lap = out;
        (out ? result.out_laps : result.laps).push_back(std::move(lap));
    };

    if (boundaries.empty()) {
        make_lap(0, samples.size(), true);
        return result;
    }

    // In distance mode the first and last segments still count as full laps
    // when they cover the whole track length; a session written lap-aligned
    // starts exactly at the line. Line crossings are explicit boundaries, so
    // there segments outside the crossings are always out-laps.
    double session_s_min = samples.front().s, session_s_max = samples.front().s;
    for (const auto& smp : samples) {
        session_s_min = std::min(session_s_min, smp.s);
        session_s_max = std::max(session_s_max, smp.s);
    }
    auto covers_track = [&](std::size_t begin, std::size_t end) {
        if (mode != SplitMode::distance_reset) return false;
        double lo = samples[begin].s, hi = samples[begin].s;
        for (std::size_t i = begin; i < end; ++i) {
            lo = std::min(lo, samples[i].s);
            hi = std::max(hi, samples[i].s);
        }
        return (hi - lo) >= 0.98 * (session_s_max - session_s_min);
    };

    make_lap(0, boundaries.front(), !covers_track(0, boundaries.front()));
    for (std::size_t b = 0; b + 1 < boundaries.size(); ++b) {
        make_lap(boundaries[b], boundaries[b + 1], false);
    }
    make_lap(boundaries.back(), samples.size(),
             !covers_track(boundaries.back(), samples.size()));
    return result;
}

ReferenceLine reference_line_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::unparsable_cell, std::string("reference JSON: ") + e.what());
    }
    ReferenceLine ref;
    if (!j.contains("points") || !j.at("points").is_array()) {
        throw Error(errc::invalid_argument, "reference JSON needs a 'points' array");
    }
    ref.closed = j.value("closed", false);
    for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() < 5) {
            throw Error(errc::invalid_argument,
                        "reference point must be [s_m, x_m, y_m, psi_rad, v_mps]");
        }
        ref.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
                              p[3].get<double>(), p[4].get<double>()});
    }
    ref.validate();
    return ref;
}

ReferenceLine reference_line_from_json_file(const std::string& path) {
    return reference_line_from_json(read_file(path));
}

std::string reference_line_to_json(const ReferenceLine& ref) {
    json pts = json::array();
    for (const auto& p : ref.points) {
        pts.push_back({p.s, p.x, p.y, p.psi, p.v});
    }
    json j{{"closed", ref.closed}, {"points", pts}};
    return j.dump() + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        throw Error(errc::io_error, "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) {
        throw Error(errc::io_error, "cannot write '" + path + "'");
    }
    out << content;
    if (!out.good()) {
        throw Error(errc::io_error, "write failed for '" + path + "'");
    }
}

}  // namespace laptel
