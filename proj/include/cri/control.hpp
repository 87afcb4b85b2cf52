#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "cri/core_types.hpp"
#include "cri/sector.hpp"

namespace cri {

enum class DrivingMode { Aggressive, Neutral, Conservative };

inline const char* to_string(DrivingMode m) {
    switch (m) {
        case DrivingMode::Aggressive: return "aggressive";
        case DrivingMode::Neutral: return "neutral";
        case DrivingMode::Conservative: return "conservative";
    }
    return "?";
}

struct ControlCommand {
    double throttle{0.0};  // [0, 1]
    double brake{0.0};     // [0, 1]
    double steer{0.0};     // [-1, 1], positive turns toward positive bearing

    ControlCommand clamped() const {
        return {std::clamp(throttle, 0.0, 1.0), std::clamp(brake, 0.0, 1.0),
                std::clamp(steer, -1.0, 1.0)};
    }
};

struct ControllerParams {
    double t_lo{0.30};
    double t_hi{0.60};
    double hysteresis{0.05};
    int hold_ticks{3};
    double frontal_delta{0.05};
    double throttle_scale_neutral{0.8};
    double throttle_scale_conservative{0.5};
    double neutral_brake_floor{0.2};
    double neutral_brake_risk_threshold{0.5};
    double emergency_brake_gain{0.8};
    double steer_bias_gain{0.2};

    bool valid() const {
        return t_lo >= 0.0 && t_hi > t_lo && t_hi <= 1.0 && hysteresis >= 0.0 &&
               hold_ticks >= 1 && frontal_delta >= 0.0;
    }
};

struct ControllerState {
    ControllerParams params;
    DrivingMode mode{DrivingMode::Aggressive};
    long ticks_in_mode{0};
    DrivingMode pending{DrivingMode::Aggressive};
    int pending_count{0};
};

inline bool frontal(double theta_star) { return std::abs(theta_star) <= std::numbers::pi / 4.0; }

inline bool lateral(double theta_star) {
    const double a = std::abs(theta_star);
    return a > std::numbers::pi / 4.0 && a < 3.0 * std::numbers::pi / 4.0;
}

namespace detail {

inline DrivingMode threshold_mode(double cri_final, double t_lo, double t_hi) {
    if (cri_final >= t_hi) return DrivingMode::Conservative;
    if (cri_final < t_lo) return DrivingMode::Aggressive;
    return DrivingMode::Neutral;
}

// A candidate is decisive when cri_final clears the governing threshold by
// more than the hysteresis band in the direction of travel.
inline bool decisive(DrivingMode current, DrivingMode candidate, double cri_final, double t_lo,
                     double t_hi, double h) {
    if (candidate == DrivingMode::Conservative) return cri_final >= t_hi + h;
    if (candidate == DrivingMode::Aggressive) return cri_final < t_lo - h;
    return current == DrivingMode::Aggressive ? cri_final >= t_lo + h : cri_final < t_hi - h;
}

}  // namespace detail

/// Threshold mode selection with hysteresis: an off-mode candidate is
/// adopted immediately on a decisive crossing, otherwise after persisting
/// hold_ticks consecutive ticks. A frontal dominant direction lowers both
/// thresholds. Mutates the state.
inline DrivingMode select_mode(double cri_final, double theta_star, ControllerState& state) {
    const auto& p = state.params;
    const double shift = frontal(theta_star) ? p.frontal_delta : 0.0;
    const double t_lo = p.t_lo - shift;
    const double t_hi = p.t_hi - shift;
    const DrivingMode candidate = detail::threshold_mode(cri_final, t_lo, t_hi);

    if (candidate == state.mode) {
        state.pending_count = 0;
        ++state.ticks_in_mode;
        return state.mode;
    }
    if (candidate == state.pending) {
        ++state.pending_count;
    } else {
        state.pending = candidate;
        state.pending_count = 1;
    }
    if (detail::decisive(state.mode, candidate, cri_final, t_lo, t_hi, p.hysteresis) ||
        state.pending_count >= p.hold_ticks) {
        state.mode = candidate;
        state.ticks_in_mode = 1;
        state.pending_count = 0;
    } else {
        ++state.ticks_in_mode;
    }
    return state.mode;
}

/// Mode-dependent command shaping. Throttle only ever shrinks and brake
/// only ever grows; steering is biased opposite the dominant threat for
/// lateral threats in conservative mode.
inline ControlCommand adapt_control(const ControlCommand& baseline, DrivingMode mode,
                                    const SectorField& field, const EgoState& /*ego*/,
                                    const ControllerParams& p = {}) {
    ControlCommand out = baseline.clamped();
    switch (mode) {
        case DrivingMode::Aggressive:
            break;
        case DrivingMode::Neutral:
            out.throttle *= p.throttle_scale_neutral;
            if (frontal(field.theta_star) && field.r_star >= p.neutral_brake_risk_threshold)
                out.brake = std::max(out.brake, p.neutral_brake_floor);
            break;
        case DrivingMode::Conservative:
            out.throttle *= p.throttle_scale_conservative;
            if (frontal(field.theta_star)) {
                out.brake = std::max(out.brake, p.emergency_brake_gain * field.r_star);
            } else if (lateral(field.theta_star)) {
                const double away = field.theta_star > 0.0 ? -1.0 : 1.0;
                out.steer += away * p.steer_bias_gain * field.r_star;
            }
            break;
    }
    out = out.clamped();
    if (out.brake > 0.0) out.throttle = 0.0;
    return out;
}

}  // namespace cri
