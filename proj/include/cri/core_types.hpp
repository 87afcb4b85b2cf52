#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cri {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

inline double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }
inline double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Rectangle half extents along the body axes.
struct BoxExtents {
    double half_length{2.3};
    double half_width{0.9};

    bool valid() const { return half_length > 0.0 && half_width > 0.0; }
};

struct EgoState {
    Vec2 position;
    double heading{0.0};     // world yaw, (-pi, pi]
    double speed{0.0};       // m/s, >= 0
    double acceleration{0.0};
    BoxExtents bounding_box;
    double wheelbase{2.7};

    Vec2 velocity() const { return {speed * std::cos(heading), speed * std::sin(heading)}; }
};

struct ObjectState {
    std::string id;
    Vec2 position;
    Vec2 velocity;
    double heading{0.0};
    BoxExtents bounding_box;
};

/// Object state projected on the ego body axes. Positive lon is the ego
/// forward axis; lat completes the right-handed pair.
struct RelativeKinematics {
    double dp_lon{0.0};
    double dp_lat{0.0};
    double v_lon{0.0};
    double v_lat{0.0};
    double bearing{0.0};      // atan2(dp_lat, dp_lon), (-pi, pi]
    double theta_deg{0.0};    // |heading difference| in degrees, [0, 180]
};

struct RoadContext {
    double v_limit{13.9};    // m/s, > 0
    int lane_count{1};       // >= 1
    double lane_width{3.5};  // m, > 0
};

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

inline void validate(const EgoState& ego) {
    if (!finite(ego.position) || !finite(ego.heading) || !finite(ego.speed))
        throw std::invalid_argument("ego state must be finite");
    if (ego.speed < 0.0) throw std::invalid_argument("ego speed must be >= 0");
    if (!ego.bounding_box.valid()) throw std::invalid_argument("ego bounding box half extents must be > 0");
    if (ego.wheelbase <= 0.0) throw std::invalid_argument("ego wheelbase must be > 0");
}

inline void validate(const ObjectState& obj) {
    if (!finite(obj.position) || !finite(obj.velocity) || !finite(obj.heading))
        throw std::invalid_argument("object state must be finite: " + obj.id);
    if (!obj.bounding_box.valid())
        throw std::invalid_argument("object bounding box half extents must be > 0: " + obj.id);
}

inline void validate(const RoadContext& road) {
    if (!(road.v_limit > 0.0)) throw std::domain_error("road v_limit must be > 0");
    if (road.lane_count < 1) throw std::domain_error("road lane_count must be >= 1");
    if (!(road.lane_width > 0.0)) throw std::domain_error("road lane_width must be > 0");
}

}  // namespace cri
