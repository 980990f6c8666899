#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "laptel/channels.hpp"
#include "laptel/types.hpp"

namespace laptel {

enum class TurnDirection { left, right };

struct CornerSegment {
    std::size_t entry_idx = 0;
    std::size_t apex_idx = 0;  // sample of max |ay| within the segment (earliest on ties)
    std::size_t exit_idx = 0;  // inclusive
    TurnDirection direction = TurnDirection::left;
    double ay_max = 0.0;  // peak |ay| in the segment [m/s^2]
};

struct BrakingEvent {
    std::size_t start_idx = 0;       // first sample above the pressure threshold
    std::size_t peak_decel_idx = 0;  // first local minimum of smoothed ax after start
    std::size_t end_idx = 0;         // last sample above the pressure threshold (inclusive)
    double p_max = 0.0;              // peak total pressure [bar]
};

// Per-sample pedal activity. coasting is the exact complement of
// throttle_on and brake_on; samples with both pedals applied count as
// non-coasting with both flags set.
struct ActivityMask {
    std::vector<std::uint8_t> throttle_on;
    std::vector<std::uint8_t> brake_on;
    std::vector<std::uint8_t> coasting;
};

struct SegmentConfig {
    double ay_corner_thresh_mps2 = 3.0;
    double corner_min_dur_s = 0.5;
    double brake_on_thresh_bar = 1.0;
    double throttle_on_thresh = 0.05;
};

// A corner is a maximal run of |smooth(ay)| > ay_thresh lasting at least
// min_dur; runs of opposite sign split into separate corners.
std::vector<CornerSegment> detect_corners(const Lap& lap, const MathChannels& channels,
                                          double ay_thresh_mps2, double min_dur_s);

// An event starts where total pressure crosses p_thresh rising and ends at
// the falling crossing. Events shorter than 3 samples are discarded, as are
// runs already active at the first sample (no rising crossing).
std::vector<BrakingEvent> detect_braking(const Lap& lap, const MathChannels& channels,
                                         double p_thresh_bar);

ActivityMask activity_mask(const MathChannels& channels, double throttle_thresh,
                           double p_thresh_bar);

}  // namespace laptel
