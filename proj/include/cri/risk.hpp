#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cri/core_types.hpp"
#include "cri/envelope.hpp"

namespace cri {

struct RiskParams {
    double epsilon{1e-6};
    double alpha{0.7};
    double speed_ref{0.5};
    RssParams rss;

    bool valid() const {
        return epsilon > 0.0 && alpha >= 0.0 && alpha <= 1.0 && speed_ref >= 0.0 &&
               speed_ref <= 1.0 && rss.valid();
    }
};

struct RiskFactors {
    double f_orientation{0.0};
    double f_lon{0.0};
    double f_lat{0.0};
    double f_speed{0.0};
    double f_spatial{0.0};
    double ttc_lon{std::numeric_limits<double>::infinity()};
    double ttc_lat{std::numeric_limits<double>::infinity()};
};

struct ObjectRisk {
    std::string id;
    RiskFactors factors;
    double cri{0.0};
    double bearing{0.0};
};

/// Heading-difference risk, theta in degrees [0, 180]. Peaks at 91.125 deg
/// (crossing traffic), small for parallel and opposing headings.
inline double orientation_risk(double theta_deg) {
    if (!(theta_deg >= 0.0 && theta_deg <= 180.0))
        throw std::domain_error("orientation_risk: theta must be in [0, 180] degrees");
    return 0.5 * (1.0 - std::cos(theta_deg * std::numbers::pi / 101.25 + std::numbers::pi / 10.0));
}

/// Negative iff separation along the axis is decreasing.
inline double approach_product(double dp, double v) { return dp * v; }

struct DirectionalRisk {
    double f{0.0};
    double ttc{std::numeric_limits<double>::infinity()};
};

/// Exponential decay on the per-axis time-to-collision; zero when the
/// object is receding along the axis.
inline DirectionalRisk directional_risk(double dp, double v, double epsilon) {
    if (!(epsilon > 0.0)) throw std::domain_error("directional_risk: epsilon must be > 0");
    if (approach_product(dp, v) >= 0.0) return {};
    const double ttc = std::abs(dp) / (std::abs(v) + epsilon);
    return {std::exp(-ttc), ttc};
}

/// Logistic overspeed risk with lane adjustment.
inline double speed_risk(double v_ego, const RoadContext& road) {
    validate(road);
    const double z = 5.0 * (v_ego - road.v_limit) / road.v_limit + 1.5 * road.lane_count - 2.0;
    return 1.0 / (1.0 + std::exp(-z));
}

/// Noisy-or combination of the spatial factors.
inline double fuse_spatial(double f_orientation, double f_lon, double f_lat) {
    for (double f : {f_orientation, f_lon, f_lat})
        if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("fuse_spatial: factors must be in [0, 1]");
    return 1.0 - (1.0 - f_orientation) * (1.0 - f_lon) * (1.0 - f_lat);
}

/// Blends cumulative and peak spatial risk, then modulates by ego speed
/// severity. Clamped to [0, 1].
inline double object_cri(const RiskFactors& f, const RiskParams& p) {
    const double f_max = std::max({f.f_orientation, f.f_lon, f.f_lat});
    const double bracket = p.alpha * f.f_spatial + (1.0 - p.alpha) * f_max;
    const double modulation = std::exp(f.f_speed - 2.0 * p.speed_ref);
    return std::clamp(bracket * modulation, 0.0, 1.0);
}

/// Full per-object factor pipeline.
inline ObjectRisk assess_object(const EgoState& ego, const std::string& id,
                                const RelativeKinematics& rel, const RoadContext& road,
                                const RiskParams& params) {
    if (!params.valid()) throw std::domain_error("risk params out of range");
    RiskFactors f;
    f.f_orientation = orientation_risk(rel.theta_deg);
    const DirectionalRisk lon = directional_risk(rel.dp_lon, rel.v_lon, params.epsilon);
    const DirectionalRisk lat = directional_risk(rel.dp_lat, rel.v_lat, params.epsilon);
    f.f_lon = lon.f;
    f.ttc_lon = lon.ttc;
    f.f_lat = lat.f;
    f.ttc_lat = lat.ttc;
    f.f_speed = speed_risk(ego.speed, road);
    f.f_spatial = fuse_spatial(f.f_orientation, f.f_lon, f.f_lat);
    return {id, f, object_cri(f, params), rel.bearing};
}

}  // namespace cri
