#pragma once

#include <cstddef>
#include <string>

#include "laptel/channels.hpp"
#include "laptel/kpi.hpp"
#include "laptel/segment.hpp"
#include "laptel/types.hpp"

namespace laptel {

// All engine tunables with their defaults. Loaded from a flat JSON config
// file; command line flags override individual values on top.
struct EngineConfig {
    double rate_hz = 100.0;     // analysis sample rate
    double max_gap_s = 0.2;     // longer input gaps are treated as sensor failure
    ChannelConfig channels;
    SegmentConfig segment;
    KpiConfig kpi;
    VehicleParams vehicle;
    double osc_cutoff_hz = 2.0;
    std::size_t gg_bins = 72;

    void validate() const;

    static EngineConfig from_json(const std::string& text);
    static EngineConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

}  // namespace laptel
