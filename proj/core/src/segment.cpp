#include "laptel/segment.hpp"

#include <cmath>

#include "laptel/errors.hpp"

namespace laptel {

namespace {

// Earliest local minimum of `sig` in (from, to]: the first sample reached
// by a descending step whose plateau is followed by a rise (or runs into
// `to`). When the signal never descends, falls back to the earliest
// position of the overall minimum, which is `from` itself for a rising run.
std::size_t first_local_min(const std::vector<double>& sig, std::size_t from, std::size_t to) {
    std::size_t j = from + 1;
    while (j <= to) {
        if (sig[j] < sig[j - 1]) {
            std::size_t k = j;
            while (k + 1 <= to && sig[k + 1] == sig[k]) ++k;
            if (k == to || sig[k + 1] > sig[k]) return j;
            j = k + 1;
        } else {
            ++j;
        }
    }
    std::size_t min_idx = from;
    for (std::size_t i = from + 1; i <= to; ++i) {
        if (sig[i] < sig[min_idx]) min_idx = i;
    }
    return min_idx;
}

}  // namespace

std::vector<CornerSegment> detect_corners(const Lap& lap, const MathChannels& channels,
                                          double ay_thresh_mps2, double min_dur_s) {
    const auto& ay_s = channels.ay_smooth;
    const std::size_t n = ay_s.size();
    if (n != lap.size()) {
        throw Error(errc::invalid_argument, "channels do not match lap length");
    }
    const std::size_t min_samples =
        static_cast<std::size_t>(std::ceil(min_dur_s / lap.dt - 1e-9));

    std::vector<CornerSegment> corners;
    std::size_t i = 0;
    while (i < n) {
        if (std::abs(ay_s[i]) <= ay_thresh_mps2) {
            ++i;
            continue;
        }
        // Extend the run while above threshold and of constant sign.
        const bool positive = ay_s[i] > 0.0;
        std::size_t j = i;
        while (j + 1 < n && std::abs(ay_s[j + 1]) > ay_thresh_mps2 &&
               (ay_s[j + 1] > 0.0) == positive) {
            ++j;
        }
        if (j - i + 1 >= min_samples) {
            CornerSegment c;
            c.entry_idx = i;
            c.exit_idx = j;
            c.apex_idx = i;
            double peak = 0.0;
            for (std::size_t k = i; k <= j; ++k) {
                const double mag = std::abs(lap.samples[k].ay);
                if (mag > peak) {
                    peak = mag;
                    c.apex_idx = k;
                }
            }
            c.ay_max = peak;
            c.direction =
                lap.samples[c.apex_idx].ay >= 0.0 ? TurnDirection::left : TurnDirection::right;
            corners.push_back(c);
        }
        i = j + 1;
    }
    return corners;
}

std::vector<BrakingEvent> detect_braking(const Lap& lap, const MathChannels& channels,
                                         double p_thresh_bar) {
    const auto& p = channels.p_brake_total;
    const std::size_t n = p.size();
    if (n != lap.size()) {
        throw Error(errc::invalid_argument, "channels do not match lap length");
    }

    std::vector<BrakingEvent> events;
    std::size_t i = 1;  // a run active at sample 0 has no rising crossing
    while (i < n) {
        if (!(p[i] > p_thresh_bar && p[i - 1] <= p_thresh_bar)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        std::size_t end = i;
        while (end + 1 < n && p[end + 1] > p_thresh_bar) ++end;

        if (end - start + 1 >= 3) {
            BrakingEvent ev;
            ev.start_idx = start;
            ev.end_idx = end;
            ev.peak_decel_idx =
                (end > start) ? first_local_min(channels.ax_smooth, start, end) : start;
            ev.p_max = 0.0;
            for (std::size_t k = start; k <= end; ++k) ev.p_max = std::fmax(ev.p_max, p[k]);
            events.push_back(ev);
        }
        i = end + 1;
    }
    return events;
}

ActivityMask activity_mask(const MathChannels& channels, double throttle_thresh,
                           double p_thresh_bar) {
    const std::size_t n = channels.throttle_eff.size();
    if (channels.p_brake_total.size() != n) {
        throw Error(errc::invalid_argument, "channel lengths differ");
    }
    ActivityMask mask;
    mask.throttle_on.resize(n);
    mask.brake_on.resize(n);
    mask.coasting.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        mask.throttle_on[i] = channels.throttle_eff[i] > throttle_thresh;
        mask.brake_on[i] = channels.p_brake_total[i] > p_thresh_bar;
        mask.coasting[i] = !mask.throttle_on[i] && !mask.brake_on[i];
    }
    return mask;
}

}  // namespace laptel
