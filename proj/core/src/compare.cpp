#include "laptel/compare.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "laptel/errors.hpp"

namespace laptel {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_rel(double pct) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+.0f%%", pct);
    return buf;
}

// Rows of the rendered table: one entry per pair_row, two KPI ids for
// paired cells.
struct TableRow {
    int pair_row;
    std::vector<KpiId> ids;
};

std::vector<TableRow> table_rows() {
    std::vector<TableRow> rows;
    for (const auto& info : kpi_table()) {
        if (!rows.empty() && rows.back().pair_row == info.pair_row) {
            rows.back().ids.push_back(info.id);
        } else {
            rows.push_back({info.pair_row, {info.id}});
        }
    }
    return rows;
}

std::string row_key(const TableRow& row) {
    if (row.ids.size() == 1) return kpi_info(row.ids[0]).key;
    switch (row.ids[0]) {
        case KpiId::ax_max: return "ax_max_min_mps2";
        case KpiId::att_vel_pos: return "att_vel_pos_neg_radps";
        case KpiId::d_slip_pos: return "d_slip_pos_neg_rad";
        default: return kpi_info(row.ids[0]).key;
    }
}

std::string cells_from_report(const KpiReport& r, const TableRow& row) {
    std::string out;
    for (std::size_t i = 0; i < row.ids.size(); ++i) {
        if (i > 0) out += "/ ";
        const auto& val = r.at(row.ids[i]);
        out += val ? fmt_value(*val) : std::string("-");
    }
    return out;
}

std::string rel_cells(const ComparisonReport& c, const TableRow& row) {
    std::string out;
    for (std::size_t i = 0; i < row.ids.size(); ++i) {
        if (i > 0) out += "/ ";
        const auto& val = c.rel_diff_pct[static_cast<std::size_t>(row.ids[i])];
        out += val ? fmt_rel(*val) : std::string("-");
    }
    return out;
}

json kpis_to_json(const KpiReport& r) {
    json out = json::object();
    for (const auto& info : kpi_table()) {
        const auto& val = r.at(info.id);
        if (val) {
            out[info.key] = *val;
        } else {
            out[info.key] = nullptr;
            out[std::string(info.key) + "_reason"] =
                r.absent_reason[static_cast<std::size_t>(info.id)];
        }
    }
    return out;
}

void kpis_from_json(const json& j, KpiReport& r) {
    for (const auto& info : kpi_table()) {
        if (!j.contains(info.key)) {
            r.mark_absent(info.id, "missing from file");
            continue;
        }
        const auto& v = j.at(info.key);
        if (v.is_null()) {
            std::string reason = "absent";
            const std::string rk = std::string(info.key) + "_reason";
            if (j.contains(rk) && j.at(rk).is_string()) reason = j.at(rk).get<std::string>();
            r.mark_absent(info.id, reason);
        } else {
            r.at(info.id) = v.get<double>();
        }
    }
}

json diagnostics_to_json(const KpiDiagnostics& d) {
    return json{{"corner_count", d.corner_count},
                {"corners_with_full_throttle", d.corners_with_full_throttle},
                {"braking_event_count", d.braking_event_count},
                {"coasting_samples", d.coasting_samples},
                {"att_vel_valid", d.att_vel_valid},
                {"att_vel_pos_n", d.att_vel_pos_n},
                {"att_vel_neg_n", d.att_vel_neg_n},
                {"d_slip_valid", d.d_slip_valid},
                {"d_slip_pos_n", d.d_slip_pos_n},
                {"d_slip_neg_n", d.d_slip_neg_n},
                {"brake_rise_samples", d.brake_rise_samples},
                {"brake_release_samples", d.brake_release_samples},
                {"lat_dev_signed_mean", d.lat_dev_signed_mean},
                {"lat_dev_max", d.lat_dev_max}};
}

void diagnostics_from_json(const json& j, KpiDiagnostics& d) {
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("corner_count", d.corner_count);
    get("corners_with_full_throttle", d.corners_with_full_throttle);
    get("braking_event_count", d.braking_event_count);
    get("coasting_samples", d.coasting_samples);
    get("att_vel_valid", d.att_vel_valid);
    get("att_vel_pos_n", d.att_vel_pos_n);
    get("att_vel_neg_n", d.att_vel_neg_n);
    get("d_slip_valid", d.d_slip_valid);
    get("d_slip_pos_n", d.d_slip_pos_n);
    get("d_slip_neg_n", d.d_slip_neg_n);
    get("brake_rise_samples", d.brake_rise_samples);
    get("brake_release_samples", d.brake_release_samples);
    get("lat_dev_signed_mean", d.lat_dev_signed_mean);
    get("lat_dev_max", d.lat_dev_max);
}

}  // namespace

double relative_difference(double candidate, double baseline) {
    if (baseline == 0.0) {
        throw Error(errc::baseline_zero, "relative difference undefined for zero baseline");
    }
    return 100.0 * (candidate - baseline) / std::abs(baseline);
}

ComparisonReport compare(const KpiReport& baseline, const KpiReport& candidate) {
    if (baseline.track_id != candidate.track_id) {
        throw Error(errc::track_mismatch, "baseline track '" + baseline.track_id +
                                              "' vs candidate track '" + candidate.track_id + "'");
    }
    ComparisonReport out;
    out.baseline = baseline;
    out.candidate = candidate;
    for (const auto& info : kpi_table()) {
        const std::size_t i = static_cast<std::size_t>(info.id);
        const auto& b = baseline.values[i];
        const auto& c = candidate.values[i];
        if (!b || !c) {
            std::string reason;
            if (!b) reason = "baseline: " + baseline.absent_reason[i];
            if (!c) {
                if (!reason.empty()) reason += "; ";
                reason += "candidate: " + candidate.absent_reason[i];
            }
            out.missing.push_back({info.id, reason});
            continue;
        }
        const double bv = info.sign_fixed_negative ? std::abs(*b) : *b;
        const double cv = info.sign_fixed_negative ? std::abs(*c) : *c;
        if (bv == 0.0) {
            out.missing.push_back({info.id, "baseline zero; relative difference undefined"});
            continue;
        }
        out.rel_diff_pct[i] = relative_difference(cv, bv);
    }
    return out;
}

RenderFormat render_format_from_string(const std::string& s) {
    if (s == "text") return RenderFormat::text;
    if (s == "csv") return RenderFormat::csv;
    if (s == "json") return RenderFormat::json;
    throw Error(errc::invalid_argument, "unknown format '" + s + "' (expected text, csv or json)");
}

std::string render(const KpiReport& report, RenderFormat format) {
    if (format == RenderFormat::json) {
        json out;
        out["meta"] = {{"type", "kpi_report"},
                       {"schema_version", kSchemaVersion},
                       {"driver_tag", to_string(report.driver_tag)},
                       {"track_id", report.track_id}};
        if (report.epoch) out["meta"]["epoch"] = *report.epoch;
        out["kpis"] = kpis_to_json(report);
        out["diagnostics"] = diagnostics_to_json(report.diagnostics);
        return out.dump(2) + "\n";
    }

    if (format == RenderFormat::csv) {
        std::ostringstream out;
        out << "kpi,value\n";
        for (const auto& row : table_rows()) {
            out << row_key(row) << "," << cells_from_report(report, row) << "\n";
        }
        return out.str();
    }

    std::ostringstream out;
    out << "KPI report  driver=" << to_string(report.driver_tag)
        << "  track=" << report.track_id << "\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-38s %16s\n", "KPI (lap average)", "value");
    out << line;
    out << std::string(55, '-') << "\n";
    for (const auto& row : table_rows()) {
        const auto& info = kpi_info(row.ids[0]);
        std::string label = std::string(info.label) + " [" + info.unit + "]";
        std::snprintf(line, sizeof(line), "%-38s %16s\n", label.c_str(),
                      cells_from_report(report, row).c_str());
        out << line;
    }
    return out.str();
}

std::string render(const ComparisonReport& report, RenderFormat format) {
    if (format == RenderFormat::json) {
        json out;
        out["meta"] = {{"type", "comparison"},
                       {"schema_version", kSchemaVersion},
                       {"track_id", report.baseline.track_id},
                       {"baseline_driver", to_string(report.baseline.driver_tag)},
                       {"candidate_driver", to_string(report.candidate.driver_tag)}};
        if (report.epoch) out["meta"]["epoch"] = *report.epoch;
        out["kpis"] = {{"baseline", kpis_to_json(report.baseline)},
                       {"candidate", kpis_to_json(report.candidate)}};
        json rel = json::object();
        for (const auto& info : kpi_table()) {
            const auto& v = report.rel_diff_pct[static_cast<std::size_t>(info.id)];
            if (v) rel[info.key] = *v;
        }
        out["rel_diff"] = rel;
        json missing = json::array();
        for (const auto& m : report.missing) {
            missing.push_back({{"kpi", kpi_info(m.id).key}, {"reason", m.reason}});
        }
        out["missing"] = missing;
        return out.dump(2) + "\n";
    }

    if (format == RenderFormat::csv) {
        std::ostringstream out;
        out << "kpi,baseline,candidate,rel_diff_pct\n";
        for (const auto& row : table_rows()) {
            out << row_key(row) << "," << cells_from_report(report.baseline, row) << ","
                << cells_from_report(report.candidate, row) << ",";
            std::string rel;
            for (std::size_t i = 0; i < row.ids.size(); ++i) {
                const auto& v = report.rel_diff_pct[static_cast<std::size_t>(row.ids[i])];
                if (i > 0) rel += "/ ";
                rel += v ? fmt_value(*v) : std::string("-");
            }
            out << rel << "\n";
        }
        return out.str();
    }

    std::ostringstream out;
    out << "Driver comparison  track=" << report.baseline.track_id
        << "  baseline=" << to_string(report.baseline.driver_tag)
        << "  candidate=" << to_string(report.candidate.driver_tag) << "\n";
    char line[200];
    std::snprintf(line, sizeof(line), "%-38s %14s %14s %12s\n", "KPI (lap average)", "baseline",
                  "candidate", "rel. diff");
    out << line;
    out << std::string(81, '-') << "\n";
    for (const auto& row : table_rows()) {
        const auto& info = kpi_info(row.ids[0]);
        std::string label = std::string(info.label) + " [" + info.unit + "]";
        std::snprintf(line, sizeof(line), "%-38s %14s %14s %12s\n", label.c_str(),
                      cells_from_report(report.baseline, row).c_str(),
                      cells_from_report(report.candidate, row).c_str(),
                      rel_cells(report, row).c_str());
        out << line;
    }
    if (!report.missing.empty()) {
        out << "not comparable:\n";
        for (const auto& m : report.missing) {
            out << "  " << kpi_info(m.id).key << ": " << m.reason << "\n";
        }
    }
    return out.str();
}

KpiReport kpi_report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::unparsable_cell, std::string("report JSON: ") + e.what());
    }
    KpiReport r;
    if (j.contains("meta")) {
        const auto& meta = j.at("meta");
        if (meta.contains("driver_tag")) {
            r.driver_tag = driver_tag_from_string(meta.at("driver_tag").get<std::string>());
        }
        if (meta.contains("track_id")) r.track_id = meta.at("track_id").get<std::string>();
        if (meta.contains("epoch")) r.epoch = meta.at("epoch").get<std::int64_t>();
    }
    if (!j.contains("kpis")) {
        throw Error(errc::unparsable_cell, "report JSON has no 'kpis' object");
    }
    kpis_from_json(j.at("kpis"), r);
    if (j.contains("diagnostics")) diagnostics_from_json(j.at("diagnostics"), r.diagnostics);
    return r;
}

ComparisonReport comparison_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::unparsable_cell, std::string("comparison JSON: ") + e.what());
    }
    ComparisonReport c;
    if (!j.contains("kpis") || !j.at("kpis").contains("baseline") ||
        !j.at("kpis").contains("candidate")) {
        throw Error(errc::unparsable_cell, "comparison JSON lacks kpis.baseline/candidate");
    }
    if (j.contains("meta")) {
        const auto& meta = j.at("meta");
        if (meta.contains("track_id")) {
            c.baseline.track_id = meta.at("track_id").get<std::string>();
            c.candidate.track_id = c.baseline.track_id;
        }
        if (meta.contains("baseline_driver")) {
            c.baseline.driver_tag =
                driver_tag_from_string(meta.at("baseline_driver").get<std::string>());
        }
        if (meta.contains("candidate_driver")) {
            c.candidate.driver_tag =
                driver_tag_from_string(meta.at("candidate_driver").get<std::string>());
        }
        if (meta.contains("epoch")) c.epoch = meta.at("epoch").get<std::int64_t>();
    }
    kpis_from_json(j.at("kpis").at("baseline"), c.baseline);
    kpis_from_json(j.at("kpis").at("candidate"), c.candidate);
    if (j.contains("rel_diff")) {
        for (const auto& [key, value] : j.at("rel_diff").items()) {
            if (auto id = kpi_from_key(key); id && value.is_number()) {
                c.rel_diff_pct[static_cast<std::size_t>(*id)] = value.get<double>();
            }
        }
    }
    if (j.contains("missing")) {
        for (const auto& m : j.at("missing")) {
            if (auto id = kpi_from_key(m.at("kpi").get<std::string>())) {
                c.missing.push_back({*id, m.value("reason", std::string())});
            }
        }
    }
    return c;
}

}  // namespace laptel
