#include "laptel/geometry.hpp"

#include <cmath>
#include <limits>

#include "laptel/errors.hpp"

namespace laptel {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SegmentRef {
    const ReferencePoint* a;
    const ReferencePoint* b;
    double s_len;  // arc length covered by this segment
};

}  // namespace

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

Projection project_point(const ReferenceLine& ref, double x, double y) {
    const auto& pts = ref.points;
    if (pts.size() < 2) {
        throw Error(errc::invalid_argument, "reference line needs at least 2 points");
    }

    const std::size_t n_segments = pts.size() - 1 + (ref.closed ? 1 : 0);
    double best_d2 = std::numeric_limits<double>::infinity();
    Projection best;

    for (std::size_t i = 0; i < n_segments; ++i) {
        const ReferencePoint& a = pts[i];
        const ReferencePoint& b = pts[(i + 1) % pts.size()];
        const double ex = b.x - a.x;
        const double ey = b.y - a.y;
        const double len2 = ex * ex + ey * ey;
        double t = 0.0;
        if (len2 > 0.0) {
            t = ((x - a.x) * ex + (y - a.y) * ey) / len2;
            t = std::fmin(1.0, std::fmax(0.0, t));
        }
        const double fx = a.x + t * ex;
        const double fy = a.y + t * ey;
        const double dx = x - fx;
        const double dy = y - fy;
        const double d2 = dx * dx + dy * dy;
        // Strict comparison keeps the earliest (lowest arc length) winner on ties.
        if (d2 < best_d2) {
            best_d2 = d2;
            const double seg_len = std::sqrt(len2);
            const double s_a = a.s;
            const double s_b = (i + 1 < pts.size()) ? b.s : a.s + seg_len;
            best.distance = std::sqrt(d2);
            best.s = s_a + t * (s_b - s_a);
            best.segment = i;
            best.frac = t;
            // Cross product of segment direction and offset vector: positive
            // when the point lies left of the direction of travel.
            const double cross = ex * dy - ey * dx;
            best.signed_offset = (cross >= 0.0 ? 1.0 : -1.0) * best.distance;
        }
    }
    return best;
}

double heading_at(const ReferenceLine& ref, const Projection& p) {
    const auto& pts = ref.points;
    const ReferencePoint& a = pts[p.segment];
    const ReferencePoint& b = pts[(p.segment + 1) % pts.size()];
    const double dpsi = wrap_angle(b.psi - a.psi);
    return wrap_angle(a.psi + p.frac * dpsi);
}

double target_speed_at(const ReferenceLine& ref, const Projection& p) {
    const auto& pts = ref.points;
    const ReferencePoint& a = pts[p.segment];
    const ReferencePoint& b = pts[(p.segment + 1) % pts.size()];
    return a.v + p.frac * (b.v - a.v);
}

}  // namespace laptel
