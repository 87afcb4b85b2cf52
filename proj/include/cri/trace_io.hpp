#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "cri/sim.hpp"

namespace cri {

/// One tick as a single JSON line. Key order is fixed so golden traces are
/// byte-stable; the timing object is the only nondeterministic part and
/// sits last so consumers can strip it.
inline nlohmann::ordered_json tick_to_json(const TickTrace& rec) {
    nlohmann::ordered_json j;
    j["t"] = rec.t;
    j["ego"] = {{"x", rec.position.x}, {"y", rec.position.y}, {"yaw", rec.heading},
                {"v", rec.speed},      {"a", rec.accel}};
    j["R"] = rec.R;
    j["cri_final"] = rec.cri_final;
    j["cri_final_raw"] = rec.cri_final_raw;
    j["sector"] = rec.dominant_sector;
    j["theta_star"] = rec.theta_star;
    j["r_star"] = rec.r_star;
    j["mode"] = to_string(rec.mode);
    j["cmd"] = {{"throttle", rec.command.throttle},
                {"brake", rec.command.brake},
                {"steer", rec.command.steer}};
    j["failsafe"] = rec.failsafe;
    auto coll = nlohmann::ordered_json::array();
    for (const auto& ev : rec.collisions)
        coll.push_back({{"t", ev.t}, {"npc", ev.npc_id}, {"x", ev.position.x}, {"y", ev.position.y}});
    j["collisions"] = coll;
    j["timing_us"] = {{"baseline", rec.baseline_us},
                      {"envelope", rec.timings.envelope_us},
                      {"risk", rec.timings.risk_us},
                      {"fusion", rec.timings.fusion_us},
                      {"adaptation", rec.timings.adaptation_us},
                      {"cycle", rec.cycle_us}};
    return j;
}

/// verbosity 0 writes only ticks with nonzero risk, braking, or events;
/// verbosity >= 1 writes every tick.
inline void write_trace(const RunResult& result, const std::string& path, int verbosity = 1) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    for (const auto& rec : result.trace) {
        if (verbosity < 1 && rec.cri_final == 0.0 && rec.command.brake == 0.0 &&
            rec.collisions.empty() && !rec.failsafe)
            continue;
        out << tick_to_json(rec).dump() << "\n";
    }
}

/// Plot-ready per-tick series as delimited columns.
inline void write_plot_columns(const RunResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write column file: " + path);
    out << "t,speed,accel,cri_final,cri_final_raw,throttle,brake,steer,mode\n";
    char line[256];
    for (const auto& rec : result.trace) {
        std::snprintf(line, sizeof(line), "%.3f,%.6f,%.6f,%.6f,%.6f,%.4f,%.4f,%.4f,%s\n", rec.t,
                      rec.speed, rec.accel, rec.cri_final, rec.cri_final_raw,
                      rec.command.throttle, rec.command.brake, rec.command.steer,
                      to_string(rec.mode));
        out << line;
    }
}

/// Trace line with the timing object removed, for golden comparisons.
inline std::string tick_to_stable_line(const TickTrace& rec) {
    auto j = tick_to_json(rec);
    j.erase("timing_us");
    return j.dump();
}

}  // namespace cri
