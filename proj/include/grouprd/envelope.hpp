#pragma once

// Lower convex envelope of a (distortion, sum-rate) point cloud.  Achievable
// rate-distortion points remain achievable at any larger distortion, so the
// cloud is first monotonized by a running minimum in ascending distortion and
// then hulled from below.

#include <algorithm>
#include <limits>
#include <vector>

#include "group.hpp"

namespace grouprd {

struct EnvelopePoint {
    double d = 0;
    double rsum = 0;
};

inline std::vector<EnvelopePoint> lower_convex_envelope(std::vector<EnvelopePoint> pts) {
    if (pts.empty()) throw input_error("lower_convex_envelope: no points");
    std::sort(pts.begin(), pts.end(), [](const EnvelopePoint& a, const EnvelopePoint& b) {
        if (a.d != b.d) return a.d < b.d;
        return a.rsum < b.rsum;
    });

    // Keep the cheapest rate seen so far at each distinct distortion.
    std::vector<EnvelopePoint> mono;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        best = std::min(best, p.rsum);
        if (!mono.empty() && mono.back().d == p.d)
            mono.back().rsum = std::min(mono.back().rsum, best);
        else
            mono.push_back({p.d, best});
    }

    // Lower hull, dropping points on or above the chord between neighbours.
    std::vector<EnvelopePoint> hull;
    for (const auto& p : mono) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            const double cross = (b.d - a.d) * (p.rsum - a.rsum) - (p.d - a.d) * (b.rsum - a.rsum);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return hull;
}

// Envelope value at a distortion: linear interpolation inside the hull's
// range, the final rate beyond it, infinity before the first point (no
// achievable operating point there).
inline double envelope_value(const std::vector<EnvelopePoint>& hull, double d) {
    if (hull.empty()) throw input_error("envelope_value: empty envelope");
    if (d < hull.front().d) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < hull.size(); ++i) {
        if (d <= hull[i].d) {
            const auto& a = hull[i - 1];
            const auto& b = hull[i];
            const double t = b.d == a.d ? 1.0 : (d - a.d) / (b.d - a.d);
            return a.rsum + t * (b.rsum - a.rsum);
        }
    }
    return hull.back().rsum;
}

}  // namespace grouprd
