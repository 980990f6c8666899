#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "laptel/types.hpp"

namespace laptel {

struct IngestDiagnostics {
    std::size_t dropped_rows = 0;                    // duplicate-timestamp rows collapsed
    std::map<std::string, std::size_t> clipped;      // per-channel out-of-range values clipped
    std::size_t interpolated_gaps = 0;               // input intervals > 1.5x the median spacing
    double detected_rate_hz = 0.0;
};

// Parsed but not yet resampled telemetry: one time array plus named channel
// columns of equal length. Optional channels (vy_mps, f_long_req_n) are
// simply absent from the map when the file has no such column.
struct RawSeries {
    std::vector<double> t;
    std::map<std::string, std::vector<double>> columns;
    std::string source;
    IngestDiagnostics diagnostics;
};

// Maps canonical channel names to the headers used by a specific logger.
// Canonical names not present in the map are looked up verbatim.
using SchemaMap = std::map<std::string, std::string>;

SchemaMap schema_from_json(const std::string& text);
SchemaMap schema_from_json_file(const std::string& path);

std::vector<std::string> required_columns();
std::vector<std::string> optional_columns();

// Parses a telemetry CSV (header row, comma separator, '.' decimal point).
// Duplicate timestamps keep the first row; time must otherwise be strictly
// increasing. Throttle is clipped to [0, 1] and pressures to >= 0, counted
// in the diagnostics.
RawSeries parse_csv(std::istream& in, const SchemaMap& schema = {}, std::string source = "");
RawSeries parse_csv_file(const std::string& path, const SchemaMap& schema = {});

// Linear interpolation of every channel onto the uniform grid
// t0, t0 + 1/rate, ... within the raw time range (no extrapolation).
// Input gaps longer than max_gap_s are an error, not silently bridged.
std::vector<TelemetrySample> resample(const RawSeries& raw, double rate_hz,
                                      double max_gap_s = 0.2);

enum class SplitMode { distance_reset, line_crossing };

// Result of splitting a session. Full laps run boundary to boundary;
// partial segments before the first and after the last boundary are
// returned as flagged out-laps and excluded from KPI runs by default.
struct SplitResult {
    std::vector<Lap> laps;
    std::vector<Lap> out_laps;

    // Throws NoLapBoundaryFound when no full lap was detected.
    const std::vector<Lap>& require_full_laps() const;
};

// distance_reset: a new lap starts where the distance channel drops by more
// than half the observed track length. line_crossing: a new lap starts at
// each forward crossing of the start line's normal plane within 10 m of the
// reference start point (start_line required in that mode).
SplitResult split_laps(const std::vector<TelemetrySample>& samples, SplitMode mode,
                       const ReferenceLine* start_line, DriverTag tag, std::string track_id);

ReferenceLine reference_line_from_json(const std::string& text);
ReferenceLine reference_line_from_json_file(const std::string& path);
std::string reference_line_to_json(const ReferenceLine& ref);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace laptel
