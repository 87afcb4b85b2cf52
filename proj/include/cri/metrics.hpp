#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cri/sim.hpp"

namespace cri {

struct MetricsParams {
    double collision_penalty{0.60};
};

struct JerkStats {
    double mean_abs{0.0};
    double std_abs{0.0};
    double max_abs{0.0};
};

/// Acceleration by first difference of speed, jerk by second difference;
/// statistics over |jerk|. Needs at least three samples.
inline std::optional<JerkStats> jerk_stats(const std::vector<double>& speeds, double dt) {
    if (speeds.size() < 3 || !(dt > 0.0)) return std::nullopt;
    std::vector<double> jerk;
    jerk.reserve(speeds.size() - 2);
    for (size_t i = 0; i + 2 < speeds.size(); ++i)
        jerk.push_back(std::abs((speeds[i + 2] - 2.0 * speeds[i + 1] + speeds[i]) / (dt * dt)));
    const double mean = std::accumulate(jerk.begin(), jerk.end(), 0.0) / jerk.size();
    double var = 0.0;
    for (double j : jerk) var += (j - mean) * (j - mean);
    var /= jerk.size();
    return JerkStats{mean, std::sqrt(var), *std::max_element(jerk.begin(), jerk.end())};
}

struct RouteMetrics {
    std::string scenario_name;
    bool failure_prone{false};
    int collisions{0};
    double distance_km{0.0};
    bool completed{false};
    bool timed_out{false};
    double completion{0.0};
    double composed_score{0.0};  // [0, 100]
    double score_penalty{0.0};   // [0, 1], higher is worse
    std::optional<JerkStats> jerk;
    double mean_cycle_us{0.0};
    double mean_baseline_us{0.0};
    CycleTimings mean_component_us;
};

/// CS = 100 * completion * product of penalty factors; SP = 1 - product.
inline std::pair<double, double> composed_score(double completion, int vehicle_collisions,
                                                double collision_penalty) {
    const double product = std::pow(collision_penalty, vehicle_collisions);
    return {100.0 * completion * product, 1.0 - product};
}

inline RouteMetrics route_metrics(const RunResult& run, const Scenario& sc,
                                  const MetricsParams& mp) {
    RouteMetrics m;
    m.scenario_name = run.scenario_name;
    m.failure_prone = sc.failure_prone();
    m.collisions = run.collision_count;
    m.distance_km = run.distance_m / 1000.0;
    m.completed = run.outcome == Outcome::Completed;
    m.timed_out = run.outcome == Outcome::Timeout;
    m.completion = run.completion();
    std::tie(m.composed_score, m.score_penalty) =
        composed_score(m.completion, m.collisions, mp.collision_penalty);
    std::vector<double> speeds;
    speeds.reserve(run.trace.size());
    double cycle_sum = 0.0, base_sum = 0.0;
    CycleTimings comp_sum;
    for (const auto& rec : run.trace) {
        speeds.push_back(rec.speed);
        cycle_sum += rec.cycle_us;
        base_sum += rec.baseline_us;
        comp_sum.envelope_us += rec.timings.envelope_us;
        comp_sum.risk_us += rec.timings.risk_us;
        comp_sum.fusion_us += rec.timings.fusion_us;
        comp_sum.adaptation_us += rec.timings.adaptation_us;
    }
    m.jerk = jerk_stats(speeds, sc.dt);
    if (!run.trace.empty()) {
        const double n = static_cast<double>(run.trace.size());
        m.mean_cycle_us = cycle_sum / n;
        m.mean_baseline_us = base_sum / n;
        m.mean_component_us = {comp_sum.envelope_us / n, comp_sum.risk_us / n,
                               comp_sum.fusion_us / n, comp_sum.adaptation_us / n};
    }
    return m;
}

struct SuiteMetrics {
    std::string label;
    int routes{0};
    double cpr{0.0};                       // mean collisions per route
    std::optional<double> cpk;             // total collisions / total km
    double cs{0.0};                        // mean composed score
    double sp{0.0};                        // mean score penalty
    double timeout_rate{0.0};
    double maj{0.0};                       // mean of route mean |jerk|
    double saj{0.0};                       // mean of route std |jerk|
    double mj{0.0};                        // max over routes of max |jerk|
    double mean_cycle_us{0.0};
    double mean_baseline_us{0.0};
    CycleTimings mean_component_us;
    std::vector<std::string> scenario_names;
};

inline std::pair<double, std::optional<double>> collision_metrics(
    const std::vector<RouteMetrics>& routes) {
    if (routes.empty()) throw std::invalid_argument("collision_metrics: no routes");
    double coll = 0.0, km = 0.0;
    for (const auto& r : routes) {
        coll += r.collisions;
        km += r.distance_km;
    }
    const double cpr = coll / routes.size();
    if (km <= 0.0) return {cpr, std::nullopt};
    return {cpr, coll / km};
}

inline SuiteMetrics aggregate_suite(const std::vector<RouteMetrics>& routes,
                                    const std::string& label) {
    SuiteMetrics s;
    s.label = label;
    s.routes = static_cast<int>(routes.size());
    if (routes.empty()) return s;
    std::tie(s.cpr, s.cpk) = collision_metrics(routes);
    int jerk_routes = 0;
    for (const auto& r : routes) {
        s.cs += r.composed_score;
        s.sp += r.score_penalty;
        s.timeout_rate += r.timed_out ? 1.0 : 0.0;
        if (r.jerk) {
            s.maj += r.jerk->mean_abs;
            s.saj += r.jerk->std_abs;
            s.mj = std::max(s.mj, r.jerk->max_abs);
            ++jerk_routes;
        }
        s.mean_cycle_us += r.mean_cycle_us;
        s.mean_baseline_us += r.mean_baseline_us;
        s.mean_component_us.envelope_us += r.mean_component_us.envelope_us;
        s.mean_component_us.risk_us += r.mean_component_us.risk_us;
        s.mean_component_us.fusion_us += r.mean_component_us.fusion_us;
        s.mean_component_us.adaptation_us += r.mean_component_us.adaptation_us;
        s.scenario_names.push_back(r.scenario_name);
    }
    const double n = s.routes;
    s.cs /= n;
    s.sp /= n;
    s.timeout_rate /= n;
    if (jerk_routes > 0) {
        s.maj /= jerk_routes;
        s.saj /= jerk_routes;
    }
    s.mean_cycle_us /= n;
    s.mean_baseline_us /= n;
    s.mean_component_us = {s.mean_component_us.envelope_us / n, s.mean_component_us.risk_us / n,
                           s.mean_component_us.fusion_us / n, s.mean_component_us.adaptation_us / n};
    std::sort(s.scenario_names.begin(), s.scenario_names.end());
    return s;
}

/// Percent change from a to b; no value when a is zero.
inline std::optional<double> percent_delta(double a, double b) {
    if (a == 0.0) return std::nullopt;
    return (b - a) / a * 100.0;
}

struct RuntimeProfile {
    double reception_ms{0.0};     // envelope + risk + fusion
    double adaptation_ms{0.0};
    double initialization_ms{0.0};
    double runstep_baseline_ms{0.0};
    double runstep_cri_ms{0.0};

    double overhead_ms() const { return runstep_cri_ms - runstep_baseline_ms; }
    double overhead_pct() const {
        return runstep_baseline_ms > 0.0 ? overhead_ms() / runstep_baseline_ms * 100.0 : 0.0;
    }
};

/// Pairs baseline and risk-enabled runs of the same scenarios and averages
/// per-cycle cost. Throws when the two sets do not cover the same routes.
inline RuntimeProfile runtime_profile(const std::vector<RouteMetrics>& baseline,
                                      const std::vector<RouteMetrics>& with_cri,
                                      double initialization_ms = 0.0) {
    auto names = [](const std::vector<RouteMetrics>& v) {
        std::vector<std::string> out;
        out.reserve(v.size());
        for (const auto& r : v) out.push_back(r.scenario_name);
        std::sort(out.begin(), out.end());
        return out;
    };
    if (names(baseline) != names(with_cri))
        throw std::invalid_argument("runtime_profile: baseline and risk-enabled runs are unpaired");
    RuntimeProfile p;
    p.initialization_ms = initialization_ms;
    for (const auto& r : baseline) p.runstep_baseline_ms += r.mean_cycle_us / 1000.0;
    for (const auto& r : with_cri) {
        p.runstep_cri_ms += r.mean_cycle_us / 1000.0;
        p.reception_ms += (r.mean_component_us.envelope_us + r.mean_component_us.risk_us +
                           r.mean_component_us.fusion_us) / 1000.0;
        p.adaptation_ms += r.mean_component_us.adaptation_us / 1000.0;
    }
    if (!baseline.empty()) p.runstep_baseline_ms /= baseline.size();
    if (!with_cri.empty()) {
        p.runstep_cri_ms /= with_cri.size();
        p.reception_ms /= with_cri.size();
        p.adaptation_ms /= with_cri.size();
    }
    return p;
}

namespace detail {

inline std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v, int prec = 2) {
    return v ? fmt(*v, prec) : std::string("n/a");
}

}  // namespace detail

/// Runtime overhead table.
inline std::string render_runtime_profile(const RuntimeProfile& p) {
    std::string out;
    out += "Runtime Overhead Analysis\n";
    out += "Component                      Mean Runtime (ms)\n";
    out += "-------------------------------------------------\n";
    auto row = [&](const std::string& name, const std::string& value) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%-30s %17s\n", name.c_str(), value.c_str());
        out += buf;
    };
    const int prec = p.runstep_baseline_ms < 1.0 ? 5 : 3;
    row("Risk Reception", detail::fmt(p.reception_ms, prec));
    row("Control Adaptation", detail::fmt(p.adaptation_ms, prec));
    row("Controller Initialization", detail::fmt(p.initialization_ms, prec));
    out += "-------------------------------------------------\n";
    row("RunStep (Baseline)", detail::fmt(p.runstep_baseline_ms, prec < 5 ? 2 : 5));
    row("RunStep (with risk index)", detail::fmt(p.runstep_cri_ms, prec < 5 ? 2 : 5));
    row("Overhead", detail::fmt(p.overhead_ms(), prec < 5 ? 2 : 5));
    row("Overhead (%)", detail::fmt(p.overhead_pct(), 2) + "%");
    return out;
}

struct SuiteComparison {
    SuiteMetrics baseline;
    SuiteMetrics with_cri;
};

inline void require_same_scenarios(const SuiteMetrics& a, const SuiteMetrics& b) {
    if (a.scenario_names != b.scenario_names)
        throw std::invalid_argument("compare_suites: scenario sets differ");
}

/// Side-by-side table over the aggregated metric columns with percent
/// deltas recomputed from the two inputs.
inline std::string render_comparison_text(const std::vector<SuiteComparison>& comparisons) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %8s %8s %8s %8s %8s %8s\n", "Suite", "CpR",
                  "CpK", "CS", "SP", "RT", "MAJ", "SAJ", "MJ");
    out += buf;
    out += std::string(16 + 9 * 8 + 8, '-') + "\n";
    auto suite_row = [&](const SuiteMetrics& s) {
        std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %8s %8s %8s %8s %8s %8s\n", s.label.c_str(),
                      detail::fmt(s.cpr).c_str(), detail::fmt_opt(s.cpk).c_str(),
                      detail::fmt(s.cs).c_str(), detail::fmt(s.sp).c_str(),
                      detail::fmt(s.timeout_rate).c_str(), detail::fmt(s.maj).c_str(),
                      detail::fmt(s.saj).c_str(), detail::fmt(s.mj).c_str());
        out += buf;
    };
    auto delta_cell = [&](double a, double b) {
        const auto d = percent_delta(a, b);
        return d ? (*d >= 0 ? "+" : "") + detail::fmt(*d, 1) + "%" : std::string("n/a");
    };
    for (const auto& cmp : comparisons) {
        require_same_scenarios(cmp.baseline, cmp.with_cri);
        suite_row(cmp.baseline);
        suite_row(cmp.with_cri);
        std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %8s %8s %8s %8s %8s %8s\n",
                      ("delta_" + cmp.with_cri.label).c_str(),
                      delta_cell(cmp.baseline.cpr, cmp.with_cri.cpr).c_str(),
                      (cmp.baseline.cpk && cmp.with_cri.cpk
                           ? delta_cell(*cmp.baseline.cpk, *cmp.with_cri.cpk)
                           : std::string("n/a"))
                          .c_str(),
                      delta_cell(cmp.baseline.cs, cmp.with_cri.cs).c_str(),
                      delta_cell(cmp.baseline.sp, cmp.with_cri.sp).c_str(),
                      delta_cell(cmp.baseline.timeout_rate, cmp.with_cri.timeout_rate).c_str(),
                      delta_cell(cmp.baseline.maj, cmp.with_cri.maj).c_str(),
                      delta_cell(cmp.baseline.saj, cmp.with_cri.saj).c_str(),
                      delta_cell(cmp.baseline.mj, cmp.with_cri.mj).c_str());
        out += buf;
    }
    return out;
}

inline nlohmann::ordered_json suite_to_json(const SuiteMetrics& s) {
    nlohmann::ordered_json j;
    j["label"] = s.label;
    j["routes"] = s.routes;
    j["CpR"] = s.cpr;
    if (s.cpk) j["CpK"] = *s.cpk; else j["CpK"] = nullptr;
    j["CS"] = s.cs;
    j["SP"] = s.sp;
    j["RT"] = s.timeout_rate;
    j["MAJ"] = s.maj;
    j["SAJ"] = s.saj;
    j["MJ"] = s.mj;
    j["scenarios"] = s.scenario_names;
    return j;
}

inline SuiteMetrics suite_from_json(const nlohmann::json& j) {
    SuiteMetrics s;
    s.label = j.at("label").get<std::string>();
    s.routes = j.at("routes").get<int>();
    s.cpr = j.at("CpR").get<double>();
    if (!j.at("CpK").is_null()) s.cpk = j.at("CpK").get<double>();
    s.cs = j.at("CS").get<double>();
    s.sp = j.at("SP").get<double>();
    s.timeout_rate = j.at("RT").get<double>();
    s.maj = j.at("MAJ").get<double>();
    s.saj = j.at("SAJ").get<double>();
    s.mj = j.at("MJ").get<double>();
    for (const auto& n : j.at("scenarios")) s.scenario_names.push_back(n.get<std::string>());
    return s;
}

inline nlohmann::ordered_json comparison_to_json(const std::vector<SuiteComparison>& comparisons) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& cmp : comparisons) {
        require_same_scenarios(cmp.baseline, cmp.with_cri);
        nlohmann::ordered_json j;
        j["baseline"] = suite_to_json(cmp.baseline);
        j["with_cri"] = suite_to_json(cmp.with_cri);
        nlohmann::ordered_json deltas;
        auto put = [&](const char* key, double a, double b) {
            const auto d = percent_delta(a, b);
            if (d) deltas[key] = *d; else deltas[key] = nullptr;
        };
        put("CpR", cmp.baseline.cpr, cmp.with_cri.cpr);
        if (cmp.baseline.cpk && cmp.with_cri.cpk)
            put("CpK", *cmp.baseline.cpk, *cmp.with_cri.cpk);
        else
            deltas["CpK"] = nullptr;
        put("CS", cmp.baseline.cs, cmp.with_cri.cs);
        put("SP", cmp.baseline.sp, cmp.with_cri.sp);
        put("MAJ", cmp.baseline.maj, cmp.with_cri.maj);
        put("SAJ", cmp.baseline.saj, cmp.with_cri.saj);
        put("MJ", cmp.baseline.mj, cmp.with_cri.mj);
        j["delta_pct"] = deltas;
        arr.push_back(j);
    }
    return arr;
}

}  // namespace cri
