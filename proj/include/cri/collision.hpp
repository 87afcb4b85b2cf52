#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cri/core_types.hpp"

namespace cri {

struct OrientedBox {
    Vec2 center;
    double heading{0.0};
    BoxExtents extents;

    std::array<Vec2, 4> corners() const {
        const Vec2 ax = rotate({1.0, 0.0}, heading);
        const Vec2 ay = rotate({0.0, 1.0}, heading);
        const Vec2 dl = extents.half_length * ax;
        const Vec2 dw = extents.half_width * ay;
        return {center + dl + dw, center + dl - dw, center - dl - dw, center - dl + dw};
    }
};

/// Smallest separation over the four candidate axes. Negative means the
/// projections overlap on every axis (penetration depth); >= 0 is the gap
/// on the best separating axis.
inline double sat_separation(const OrientedBox& a, const OrientedBox& b) {
    const std::array<Vec2, 4> axes = {rotate({1.0, 0.0}, a.heading), rotate({0.0, 1.0}, a.heading),
                                      rotate({1.0, 0.0}, b.heading), rotate({0.0, 1.0}, b.heading)};
    const std::array<Vec2, 4> ca = a.corners();
    const std::array<Vec2, 4> cb = b.corners();
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec2& axis : axes) {
        double amin = std::numeric_limits<double>::infinity(), amax = -amin;
        double bmin = amin, bmax = -amin;
        for (int i = 0; i < 4; ++i) {
            const double pa = ca[i].dot(axis), pb = cb[i].dot(axis);
            amin = std::min(amin, pa);
            amax = std::max(amax, pa);
            bmin = std::min(bmin, pb);
            bmax = std::max(bmax, pb);
        }
        best = std::max(best, std::max(bmin - amax, amin - bmax));
    }
    return best;
}

/// Closed overlap convention: exact touching counts as a collision.
inline bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
    return sat_separation(a, b) <= 0.0;
}

}  // namespace cri
