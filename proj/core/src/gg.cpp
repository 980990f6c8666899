#include "laptel/gg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "laptel/errors.hpp"

namespace laptel {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

std::vector<GgPoint> gg_points(const Lap& lap) {
    std::vector<GgPoint> pts;
    pts.reserve(lap.size());
    for (const auto& smp : lap.samples) {
        pts.push_back({smp.ay, smp.ax});
    }
    return pts;
}

GgEnvelope gg_envelope(const std::vector<GgPoint>& points, std::size_t n_bins) {
    if (n_bins < 4) {
        throw Error(errc::invalid_argument, "gg envelope needs at least 4 bins");
    }
    GgEnvelope env;
    env.bins.resize(n_bins);
    const double width = kTwoPi / static_cast<double>(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        env.bins[i].angle_lo = width * static_cast<double>(i);
        env.bins[i].angle_hi = width * static_cast<double>(i + 1);
    }
    for (const auto& p : points) {
        const double r = std::hypot(p.ay, p.ax);
        double angle = std::atan2(p.ax, p.ay);
        if (angle < 0.0) angle += kTwoPi;
        std::size_t bin = static_cast<std::size_t>(angle / width);
        if (bin >= n_bins) bin = n_bins - 1;
        auto& b = env.bins[bin];
        ++b.count;
        if (!b.max_radius || r > *b.max_radius) b.max_radius = r;
    }
    return env;
}

std::string gg_points_csv(const std::vector<GgPoint>& points) {
    std::ostringstream out;
    out << "ay_mps2,ax_mps2\n";
    char line[80];
    for (const auto& p : points) {
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", p.ay, p.ax);
        out << line;
    }
    return out.str();
}

std::string gg_envelope_csv(const GgEnvelope& envelope) {
    std::ostringstream out;
    out << "angle_rad,radius_mps2,count\n";
    char line[96];
    for (const auto& b : envelope.bins) {
        const double center = 0.5 * (b.angle_lo + b.angle_hi);
        if (b.max_radius) {
            std::snprintf(line, sizeof(line), "%.12g,%.12g,%zu\n", center, *b.max_radius, b.count);
        } else {
            std::snprintf(line, sizeof(line), "%.12g,,0\n", center);
        }
        out << line;
    }
    return out.str();
}

}  // namespace laptel
