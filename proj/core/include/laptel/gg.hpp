#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "laptel/types.hpp"

namespace laptel {

struct GgPoint {
    double ay = 0.0;  // lateral acceleration [m/s^2]
    double ax = 0.0;  // longitudinal acceleration [m/s^2]
};

struct GgBin {
    double angle_lo = 0.0;  // [rad], sector start
    double angle_hi = 0.0;  // [rad], sector end
    std::size_t count = 0;
    std::optional<double> max_radius;  // absent for empty bins
};

// Polar acceleration envelope: equal angular sectors over [0, 2pi) in the
// (ay, ax) plane, each holding the largest point radius seen.
struct GgEnvelope {
    std::vector<GgBin> bins;
};

// One (ay, ax) point per sample.
std::vector<GgPoint> gg_points(const Lap& lap);

// Bins points by atan2(ax, ay) mapped to [0, 2pi). Requires n_bins >= 4.
GgEnvelope gg_envelope(const std::vector<GgPoint>& points, std::size_t n_bins);

// Plot-ready CSV exports.
std::string gg_points_csv(const std::vector<GgPoint>& points);
std::string gg_envelope_csv(const GgEnvelope& envelope);

}  // namespace laptel
