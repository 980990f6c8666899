#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "laptel/kpi.hpp"

namespace laptel {

struct MissingKpi {
    KpiId id;
    std::string reason;
};

// Two-driver diff. rel_diff_pct is populated exactly for KPIs present and
// comparable in both reports; everything else is listed under missing.
struct ComparisonReport {
    KpiReport baseline;
    KpiReport candidate;
    std::array<std::optional<double>, kKpiCount> rel_diff_pct;
    std::vector<MissingKpi> missing;
    std::optional<std::int64_t> epoch;
};

// 100 * (candidate - baseline) / |baseline|. Throws BaselineZero.
double relative_difference(double candidate, double baseline);

// Builds the comparison. Requires matching track ids. Sign-fixed negative
// KPIs (minimum longitudinal acceleration, the negative stability averages)
// are diffed on magnitudes so that "less of the effect" reads as a negative
// difference, matching the sign convention of positive-valued rows.
ComparisonReport compare(const KpiReport& baseline, const KpiReport& candidate);

enum class RenderFormat { text, csv, json };

RenderFormat render_format_from_string(const std::string& s);

// Deterministic serialization. Text and CSV mirror the report row order with
// paired cells joined as "a/ b"; JSON keeps one key per scalar KPI with
// absent values encoded as null plus a sibling <key>_reason string.
std::string render(const KpiReport& report, RenderFormat format);
std::string render(const ComparisonReport& report, RenderFormat format);

KpiReport kpi_report_from_json(const std::string& text);
ComparisonReport comparison_from_json(const std::string& text);

}  // namespace laptel
