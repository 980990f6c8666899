#pragma once

#include <cstddef>

#include "laptel/types.hpp"

namespace laptel {

// Foot point of a perpendicular projection onto a reference polyline.
struct Projection {
    double distance = 0.0;       // unsigned point-to-polyline distance [m]
    double signed_offset = 0.0;  // positive when left of the travel direction [m]
    double s = 0.0;              // arc length of the foot point [m]
    std::size_t segment = 0;     // polyline segment index (closing segment = points.size()-1)
    double frac = 0.0;           // position along the segment, 0..1
};

// Nearest-segment projection; ties resolved toward the lower arc length.
// Closed lines include the segment from the last point back to the first.
Projection project_point(const ReferenceLine& ref, double x, double y);

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// Reference heading at a projection foot point, interpolated along the
// shortest angular path between the segment endpoints.
double heading_at(const ReferenceLine& ref, const Projection& p);

// Target speed at a projection foot point, linearly interpolated.
double target_speed_at(const ReferenceLine& ref, const Projection& p);

}  // namespace laptel
