#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cri/core_types.hpp"

namespace cri {

struct RssParams {
    double t_reaction{0.5};  // s
    double a_max{3.5};       // m/s^2
    double a_min{4.0};       // m/s^2, braking deceleration magnitude

    bool valid() const { return t_reaction > 0.0 && a_max > 0.0 && a_min > 0.0; }
};

struct EnvelopeParams {
    double rear_fraction{0.5};
    double lateral_margin{0.5};  // m
    double d_min{5.0};           // forward floor, m
};

/// Axis-aligned safety region in the ego body frame.
struct Envelope {
    double forward{0.0};     // m, >= d_min
    double rear{0.0};        // m
    double half_width{0.0};  // m

    bool contains(double lon, double lat) const {
        return lon >= -rear && lon <= forward && std::abs(lat) <= half_width;
    }
};

/// Projects an object into the ego body frame: positions and relative
/// velocity rotated by -heading, plus bearing and the absolute heading
/// difference in degrees.
inline RelativeKinematics to_ego_frame(const EgoState& ego, const ObjectState& obj) {
    validate(ego);
    validate(obj);
    const Vec2 dp = rotate(obj.position - ego.position, -ego.heading);
    const Vec2 dv = rotate(obj.velocity - ego.velocity(), -ego.heading);
    RelativeKinematics rel;
    rel.dp_lon = dp.x;
    rel.dp_lat = dp.y;
    rel.v_lon = dv.x;
    rel.v_lat = dv.y;
    rel.bearing = std::atan2(rel.dp_lat, rel.dp_lon);
    rel.theta_deg = rad_to_deg(std::abs(wrap_angle(obj.heading - ego.heading)));
    return rel;
}

/// Safe following distance for the given speeds; negative raw values clamp
/// to zero.
inline double rss_distance(double v_ego, double v_front, const RssParams& p) {
    if (!p.valid()) throw std::domain_error("rss params must be strictly positive");
    if (v_ego < 0.0 || v_front < 0.0) throw std::domain_error("rss speeds must be >= 0");
    const double v_react = v_ego + p.t_reaction * p.a_max;
    const double raw = v_ego * p.t_reaction + 0.5 * p.a_max * p.t_reaction * p.t_reaction
                       + (v_react * v_react - v_front * v_front) / (2.0 * p.a_min);
    return std::max(0.0, raw);
}

inline Envelope build_envelope(const EgoState& ego, const RoadContext& road, const RssParams& p,
                               double lead_speed, const EnvelopeParams& ep = {}) {
    validate(road);
    Envelope env;
    env.forward = std::max(ep.d_min, rss_distance(ego.speed, lead_speed, p));
    env.rear = ep.rear_fraction * env.forward;
    env.half_width = road.lane_count * road.lane_width / 2.0 + ep.lateral_margin;
    return env;
}

/// Longitudinal speed of the nearest in-path leading object, clamped to
/// >= 0; ego speed when no lead exists (the braking term then vanishes).
inline double lead_speed_for_envelope(const EgoState& ego, const std::vector<ObjectState>& objects,
                                      const RoadContext& road) {
    double best_lon = std::numeric_limits<double>::infinity();
    std::optional<double> lead;
    const Vec2 fwd{std::cos(ego.heading), std::sin(ego.heading)};
    for (const auto& obj : objects) {
        const RelativeKinematics rel = to_ego_frame(ego, obj);
        if (rel.dp_lon <= 0.0 || std::abs(rel.dp_lat) > road.lane_width / 2.0) continue;
        if (rel.dp_lon < best_lon) {
            best_lon = rel.dp_lon;
            lead = std::max(0.0, obj.velocity.dot(fwd));
        }
    }
    return lead.value_or(ego.speed);
}

/// Keeps the objects whose center lies inside the envelope (closed
/// boundary), in input order, paired with their body-frame kinematics.
inline std::vector<std::pair<ObjectState, RelativeKinematics>> filter_objects(
    const EgoState& ego, const std::vector<ObjectState>& objects, const Envelope& env) {
    std::vector<std::pair<ObjectState, RelativeKinematics>> kept;
    kept.reserve(objects.size());
    for (const auto& obj : objects) {
        RelativeKinematics rel = to_ego_frame(ego, obj);
        if (env.contains(rel.dp_lon, rel.dp_lat)) kept.emplace_back(obj, rel);
    }
    return kept;
}

}  // namespace cri
