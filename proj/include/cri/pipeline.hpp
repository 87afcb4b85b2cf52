#pragma once

#include <chrono>
#include <vector>

#include "cri/control.hpp"
#include "cri/envelope.hpp"
#include "cri/risk.hpp"
#include "cri/sector.hpp"

namespace cri {

struct CriParams {
    RiskParams risk;
    EnvelopeParams envelope;
    double beta{0.7};
    ControllerParams controller;
};

/// Wall-clock cost of one decision cycle, split by stage.
struct CycleTimings {
    double envelope_us{0.0};
    double risk_us{0.0};
    double fusion_us{0.0};
    double adaptation_us{0.0};

    double total_us() const { return envelope_us + risk_us + fusion_us + adaptation_us; }
};

struct CycleDiagnostics {
    Envelope envelope;
    double lead_speed{0.0};
    std::vector<ObjectRisk> object_risks;
    DrivingMode mode{DrivingMode::Aggressive};
    CycleTimings timings;
    bool failsafe{false};
};

struct CycleResult {
    ControlCommand command;
    SectorField field;
    CycleDiagnostics diagnostics;
};

/// One full decision cycle: envelope -> per-object risk -> sector fusion ->
/// mode selection -> command adaptation. Any stage failure falls back to
/// the unmodified baseline command and flags the tick.
inline CycleResult decision_cycle(const EgoState& ego, const std::vector<ObjectState>& objects,
                                  const RoadContext& road, const ControlCommand& baseline,
                                  const CriParams& params, ControllerState& state) {
    using clock = std::chrono::steady_clock;
    const auto us_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::micro>(clock::now() - t0).count();
    };

    CycleResult result;
    result.command = baseline;
    try {
        auto t0 = clock::now();
        result.diagnostics.lead_speed = lead_speed_for_envelope(ego, objects, road);
        result.diagnostics.envelope =
            build_envelope(ego, road, params.risk.rss, result.diagnostics.lead_speed, params.envelope);
        const auto inside = filter_objects(ego, objects, result.diagnostics.envelope);
        result.diagnostics.timings.envelope_us = us_since(t0);

        t0 = clock::now();
        result.diagnostics.object_risks.reserve(inside.size());
        for (const auto& [obj, rel] : inside)
            result.diagnostics.object_risks.push_back(assess_object(ego, obj.id, rel, road, params.risk));
        result.diagnostics.timings.risk_us = us_since(t0);

        t0 = clock::now();
        result.field = build_sector_field(result.diagnostics.object_risks, params.beta);
        result.diagnostics.timings.fusion_us = us_since(t0);

        t0 = clock::now();
        result.diagnostics.mode = select_mode(result.field.cri_final, result.field.theta_star, state);
        result.command =
            adapt_control(baseline, result.diagnostics.mode, result.field, ego, params.controller);
        result.diagnostics.timings.adaptation_us = us_since(t0);
    } catch (const std::exception&) {
        result.command = baseline;
        result.field = SectorField{};
        result.diagnostics.failsafe = true;
    }
    return result;
}

}  // namespace cri
