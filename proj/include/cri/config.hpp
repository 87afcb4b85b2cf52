#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "cri/metrics.hpp"
#include "cri/pipeline.hpp"
#include "cri/sim.hpp"

namespace cri {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunParams {
    bool cri_enabled{true};
    std::string filter{"all"};  // "all" | "fp"
    int parallel{1};
    std::uint64_t seed{0};      // reserved; the simulator is deterministic
};

struct Config {
    CriParams cri;
    SimParams sim;
    MetricsParams metrics;
    RunParams run;
    int trace_verbosity{1};
};

namespace detail {

inline void cfg_reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                               const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline void cfg_get(const nlohmann::json& j, const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
}
inline void cfg_get(const nlohmann::json& j, const char* key, int& out) {
    if (j.contains(key)) out = j.at(key).get<int>();
}
inline void cfg_get(const nlohmann::json& j, const char* key, bool& out) {
    if (j.contains(key)) out = j.at(key).get<bool>();
}

}  // namespace detail

inline void validate(const Config& c) {
    const auto& r = c.cri.risk;
    if (!(r.epsilon > 0.0)) throw ConfigError("risk.epsilon: must be > 0");
    if (!(r.alpha >= 0.0 && r.alpha <= 1.0)) throw ConfigError("risk.alpha: must be in [0, 1]");
    if (!(r.speed_ref >= 0.0 && r.speed_ref <= 1.0))
        throw ConfigError("risk.speed_ref: must be in [0, 1]");
    if (!r.rss.valid()) throw ConfigError("rss: t_reaction, a_max, a_min must be > 0");
    const auto& e = c.cri.envelope;
    if (!(e.rear_fraction >= 0.0)) throw ConfigError("envelope.rear_fraction: must be >= 0");
    if (!(e.lateral_margin >= 0.0)) throw ConfigError("envelope.lateral_margin: must be >= 0");
    if (!(e.d_min >= 0.0)) throw ConfigError("envelope.d_min: must be >= 0");
    if (!(c.cri.beta >= 0.0 && c.cri.beta <= 1.0)) throw ConfigError("sector.beta: must be in [0, 1]");
    if (!c.cri.controller.valid())
        throw ConfigError("controller: need 0 <= t_lo < t_hi <= 1, hysteresis >= 0, hold_ticks >= 1");
    if (!(c.sim.a_max > 0.0 && c.sim.a_brake > 0.0)) throw ConfigError("sim.a_max/a_brake: must be > 0");
    if (!(c.sim.max_steer > 0.0)) throw ConfigError("sim.max_steer: must be > 0");
    if (!(c.metrics.collision_penalty > 0.0 && c.metrics.collision_penalty <= 1.0))
        throw ConfigError("metrics.collision_penalty: must be in (0, 1]");
    if (c.run.filter != "all" && c.run.filter != "fp")
        throw ConfigError("run.filter: must be 'all' or 'fp'");
    if (c.run.parallel < 1) throw ConfigError("run.parallel: must be >= 1");
}

inline Config config_from_json(const nlohmann::json& j) {
    Config c;
    detail::cfg_reject_unknown(
        j, {"risk", "rss", "envelope", "sector", "controller", "sim", "metrics", "run", "trace"},
        "config");
    if (j.contains("risk")) {
        const auto& r = j.at("risk");
        detail::cfg_reject_unknown(r, {"epsilon", "alpha", "speed_ref"}, "config.risk");
        detail::cfg_get(r, "epsilon", c.cri.risk.epsilon);
        detail::cfg_get(r, "alpha", c.cri.risk.alpha);
        detail::cfg_get(r, "speed_ref", c.cri.risk.speed_ref);
    }
    if (j.contains("rss")) {
        const auto& r = j.at("rss");
        detail::cfg_reject_unknown(r, {"t_reaction", "a_max", "a_min"}, "config.rss");
        detail::cfg_get(r, "t_reaction", c.cri.risk.rss.t_reaction);
        detail::cfg_get(r, "a_max", c.cri.risk.rss.a_max);
        detail::cfg_get(r, "a_min", c.cri.risk.rss.a_min);
    }
    if (j.contains("envelope")) {
        const auto& e = j.at("envelope");
        detail::cfg_reject_unknown(e, {"rear_fraction", "lateral_margin", "d_min"}, "config.envelope");
        detail::cfg_get(e, "rear_fraction", c.cri.envelope.rear_fraction);
        detail::cfg_get(e, "lateral_margin", c.cri.envelope.lateral_margin);
        detail::cfg_get(e, "d_min", c.cri.envelope.d_min);
    }
    if (j.contains("sector")) {
        detail::cfg_reject_unknown(j.at("sector"), {"beta"}, "config.sector");
        detail::cfg_get(j.at("sector"), "beta", c.cri.beta);
    }
    if (j.contains("controller")) {
        const auto& k = j.at("controller");
        detail::cfg_reject_unknown(
            k,
            {"t_lo", "t_hi", "hysteresis", "hold_ticks", "frontal_delta", "throttle_scale_neutral",
             "throttle_scale_conservative", "neutral_brake_floor", "neutral_brake_risk_threshold",
             "emergency_brake_gain", "steer_bias_gain"},
            "config.controller");
        auto& p = c.cri.controller;
        detail::cfg_get(k, "t_lo", p.t_lo);
        detail::cfg_get(k, "t_hi", p.t_hi);
        detail::cfg_get(k, "hysteresis", p.hysteresis);
        detail::cfg_get(k, "hold_ticks", p.hold_ticks);
        detail::cfg_get(k, "frontal_delta", p.frontal_delta);
        detail::cfg_get(k, "throttle_scale_neutral", p.throttle_scale_neutral);
        detail::cfg_get(k, "throttle_scale_conservative", p.throttle_scale_conservative);
        detail::cfg_get(k, "neutral_brake_floor", p.neutral_brake_floor);
        detail::cfg_get(k, "neutral_brake_risk_threshold", p.neutral_brake_risk_threshold);
        detail::cfg_get(k, "emergency_brake_gain", p.emergency_brake_gain);
        detail::cfg_get(k, "steer_bias_gain", p.steer_bias_gain);
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        detail::cfg_reject_unknown(
            s,
            {"a_max", "a_brake", "max_steer", "headway", "comfort_decel", "kp_speed",
             "stop_response", "lookahead_gain", "lookahead_min", "lookahead_max", "stop_radius",
             "stop_wait", "trigger_capture", "arrive_radius", "stop_on_collision"},
            "config.sim");
        auto& p = c.sim;
        detail::cfg_get(s, "a_max", p.a_max);
        detail::cfg_get(s, "a_brake", p.a_brake);
        detail::cfg_get(s, "max_steer", p.max_steer);
        detail::cfg_get(s, "headway", p.headway);
        detail::cfg_get(s, "comfort_decel", p.comfort_decel);
        detail::cfg_get(s, "kp_speed", p.kp_speed);
        detail::cfg_get(s, "stop_response", p.stop_response);
        detail::cfg_get(s, "lookahead_gain", p.lookahead_gain);
        detail::cfg_get(s, "lookahead_min", p.lookahead_min);
        detail::cfg_get(s, "lookahead_max", p.lookahead_max);
        detail::cfg_get(s, "stop_radius", p.stop_radius);
        detail::cfg_get(s, "stop_wait", p.stop_wait);
        detail::cfg_get(s, "trigger_capture", p.trigger_capture);
        detail::cfg_get(s, "arrive_radius", p.arrive_radius);
        detail::cfg_get(s, "stop_on_collision", p.stop_on_collision);
    }
    if (j.contains("metrics")) {
        detail::cfg_reject_unknown(j.at("metrics"), {"collision_penalty"}, "config.metrics");
        detail::cfg_get(j.at("metrics"), "collision_penalty", c.metrics.collision_penalty);
    }
    if (j.contains("run")) {
        const auto& r = j.at("run");
        detail::cfg_reject_unknown(r, {"cri", "filter", "parallel"}, "config.run");
        detail::cfg_get(r, "cri", c.run.cri_enabled);
        if (r.contains("filter")) c.run.filter = r.at("filter").get<std::string>();
        detail::cfg_get(r, "parallel", c.run.parallel);
    }
    if (j.contains("trace")) {
        detail::cfg_reject_unknown(j.at("trace"), {"verbosity"}, "config.trace");
        detail::cfg_get(j.at("trace"), "verbosity", c.trace_verbosity);
    }
    validate(c);
    return c;
}

/// Defaults overridden by the file contents. An empty file yields defaults.
inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return Config{};
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

/// Canonical dump of the effective configuration, echoed into report headers.
inline nlohmann::ordered_json config_to_json(const Config& c) {
    nlohmann::ordered_json j;
    j["risk"] = {{"epsilon", c.cri.risk.epsilon},
                 {"alpha", c.cri.risk.alpha},
                 {"speed_ref", c.cri.risk.speed_ref}};
    j["rss"] = {{"t_reaction", c.cri.risk.rss.t_reaction},
                {"a_max", c.cri.risk.rss.a_max},
                {"a_min", c.cri.risk.rss.a_min}};
    j["envelope"] = {{"rear_fraction", c.cri.envelope.rear_fraction},
                     {"lateral_margin", c.cri.envelope.lateral_margin},
                     {"d_min", c.cri.envelope.d_min}};
    j["sector"] = {{"beta", c.cri.beta}};
    const auto& p = c.cri.controller;
    j["controller"] = {{"t_lo", p.t_lo},
                       {"t_hi", p.t_hi},
                       {"hysteresis", p.hysteresis},
                       {"hold_ticks", p.hold_ticks},
                       {"frontal_delta", p.frontal_delta},
                       {"throttle_scale_neutral", p.throttle_scale_neutral},
                       {"throttle_scale_conservative", p.throttle_scale_conservative},
                       {"neutral_brake_floor", p.neutral_brake_floor},
                       {"neutral_brake_risk_threshold", p.neutral_brake_risk_threshold},
                       {"emergency_brake_gain", p.emergency_brake_gain},
                       {"steer_bias_gain", p.steer_bias_gain}};
    const auto& s = c.sim;
    j["sim"] = {{"a_max", s.a_max},
                {"a_brake", s.a_brake},
                {"max_steer", s.max_steer},
                {"headway", s.headway},
                {"comfort_decel", s.comfort_decel},
                {"kp_speed", s.kp_speed},
                {"stop_response", s.stop_response},
                {"lookahead_gain", s.lookahead_gain},
                {"lookahead_min", s.lookahead_min},
                {"lookahead_max", s.lookahead_max},
                {"stop_radius", s.stop_radius},
                {"stop_wait", s.stop_wait},
                {"trigger_capture", s.trigger_capture},
                {"arrive_radius", s.arrive_radius},
                {"stop_on_collision", s.stop_on_collision}};
    j["metrics"] = {{"collision_penalty", c.metrics.collision_penalty}};
    // run.parallel is an execution detail with no effect on results; it is
    // deliberately left out so equal-result runs hash identically.
    j["run"] = {{"cri", c.run.cri_enabled}, {"filter", c.run.filter}};
    j["trace"] = {{"verbosity", c.trace_verbosity}};
    return j;
}

/// FNV-1a over the canonical dump; equal hashes mean equal effective config.
inline std::uint64_t config_hash(const Config& c) {
    const std::string s = config_to_json(c).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace cri
