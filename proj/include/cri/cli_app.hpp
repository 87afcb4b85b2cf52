#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "cri/config.hpp"
#include "cri/corpus.hpp"
#include "cri/metrics.hpp"
#include "cri/scenario_io.hpp"
#include "cri/sim.hpp"
#include "cri/trace_io.hpp"

// Command bodies behind the CLI. Kept header-side so the test suite can
// drive them in-process.

namespace cri::cli {

struct RunOptions {
    std::string scenario_path;
    std::string trace_path;
    bool cri_enabled{true};
};

struct BatchOptions {
    std::string scenario_dir;
    std::string out_prefix{"report"};
    std::string filter{"all"};  // "all" | "fp"
    int parallel{1};
};

inline std::string config_header(const Config& cfg) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    std::string out;
    out += "config_hash: " + std::string(buf) + "\n";
    out += "config: " + config_to_json(cfg).dump() + "\n";
    return out;
}

inline int cmd_run(const RunOptions& opt, const Config& cfg, std::ostream& os) {
    const Scenario sc = load_scenario(opt.scenario_path);
    const RunResult result = run_scenario(sc, opt.cri_enabled, cfg.cri, cfg.sim);
    if (!opt.trace_path.empty()) {
        write_trace(result, opt.trace_path, cfg.trace_verbosity);
        write_plot_columns(result, opt.trace_path + ".csv");
    }
    const RouteMetrics m = route_metrics(result, sc, cfg.metrics);
    os << config_header(cfg);
    os << "scenario: " << sc.name << (sc.failure_prone() ? " [fp]" : "") << "\n";
    os << "risk_adaptation: " << (opt.cri_enabled ? "on" : "off") << "\n";
    os << "outcome: " << to_string(result.outcome) << "\n";
    os << "collisions: " << result.collision_count << "\n";
    char line[160];
    std::snprintf(line, sizeof(line), "distance_km: %.4f\n", m.distance_km);
    os << line;
    std::snprintf(line, sizeof(line), "duration_s: %.2f\n", result.duration_s);
    os << line;
    std::snprintf(line, sizeof(line), "composed_score: %.2f\nscore_penalty: %.3f\n",
                  m.composed_score, m.score_penalty);
    os << line;
    if (m.jerk) {
        std::snprintf(line, sizeof(line), "jerk_mean_abs: %.3f\njerk_std_abs: %.3f\njerk_max: %.3f\n",
                      m.jerk->mean_abs, m.jerk->std_abs, m.jerk->max_abs);
        os << line;
    }
    if (!opt.trace_path.empty()) os << "trace: " << opt.trace_path << "\n";
    return 0;
}

inline std::vector<std::string> list_scenarios(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".scn")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw std::runtime_error("no .scn scenarios in " + dir);
    return paths;
}

struct BatchRun {
    Scenario scenario;
    RouteMetrics baseline;
    RouteMetrics with_cri;
};

/// Runs every scenario twice (baseline and risk-adapted), optionally in
/// parallel. Results are indexed, so aggregation order never depends on
/// scheduling.
inline std::vector<BatchRun> run_batch(const std::vector<std::string>& paths, const Config& cfg,
                                       int parallel) {
    std::vector<Scenario> scenarios;
    scenarios.reserve(paths.size());
    for (const auto& p : paths) scenarios.push_back(load_scenario(p));

    std::vector<BatchRun> runs(scenarios.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < scenarios.size(); i = next.fetch_add(1)) {
            const Scenario& sc = scenarios[i];
            runs[i].scenario = sc;
            runs[i].baseline = route_metrics(run_scenario(sc, false, cfg.cri, cfg.sim), sc, cfg.metrics);
            runs[i].with_cri = route_metrics(run_scenario(sc, true, cfg.cri, cfg.sim), sc, cfg.metrics);
        }
    };
    const int n_threads = std::max(1, std::min<int>(parallel, static_cast<int>(scenarios.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return runs;
}

struct BatchReport {
    std::vector<SuiteComparison> comparisons;  // ALL then FP (or just FP under filter)
    RuntimeProfile runtime;
    std::string body_text;
    nlohmann::ordered_json body_json;
    std::string timing_text;
};

inline BatchReport build_batch_report(const std::vector<BatchRun>& runs, const Config& cfg,
                                      const std::string& filter) {
    std::vector<RouteMetrics> base_all, cri_all, base_fp, cri_fp;
    for (const auto& run : runs) {
        base_all.push_back(run.baseline);
        cri_all.push_back(run.with_cri);
        if (run.scenario.failure_prone()) {
            base_fp.push_back(run.baseline);
            cri_fp.push_back(run.with_cri);
        }
    }
    BatchReport report;
    if (filter == "fp") {
        if (base_fp.empty()) throw std::runtime_error("filter fp selected but no fp-tagged scenarios");
        report.comparisons.push_back(
            {aggregate_suite(base_fp, "Baseline_FP"), aggregate_suite(cri_fp, "CRI_FP")});
    } else {
        if (!base_fp.empty())
            report.comparisons.push_back(
                {aggregate_suite(base_fp, "Baseline_FP"), aggregate_suite(cri_fp, "CRI_FP")});
        report.comparisons.push_back(
            {aggregate_suite(base_all, "Baseline_ALL"), aggregate_suite(cri_all, "CRI_ALL")});
    }
    report.runtime = runtime_profile(base_all, cri_all);

    report.body_text = config_header(cfg);
    report.body_text += "routes: " + std::to_string(runs.size()) + "\n\n";
    report.body_text += render_comparison_text(report.comparisons);

    char hash_buf[32];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    report.body_json["config_hash"] = hash_buf;
    report.body_json["config"] = config_to_json(cfg);
    report.body_json["routes"] = runs.size();
    report.body_json["comparison"] = comparison_to_json(report.comparisons);

    report.timing_text = render_runtime_profile(report.runtime);
    return report;
}

inline int cmd_batch(const BatchOptions& opt, const Config& cfg, std::ostream& os) {
    const auto paths = list_scenarios(opt.scenario_dir);
    const auto runs = run_batch(paths, cfg, opt.parallel);
    const auto report = build_batch_report(runs, cfg, opt.filter);

    auto write_file = [](const std::string& path, const std::string& text) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write report file: " + path);
        out << text;
    };
    write_file(opt.out_prefix + ".txt", report.body_text);
    write_file(opt.out_prefix + ".json", report.body_json.dump(2) + "\n");
    write_file(opt.out_prefix + ".timing.txt", report.timing_text);
    for (const auto& cmp : report.comparisons) {
        const std::string tag = cmp.baseline.label.substr(cmp.baseline.label.find('_') + 1);
        write_file(opt.out_prefix + ".baseline_" + tag + ".json",
                   suite_to_json(cmp.baseline).dump(2) + "\n");
        write_file(opt.out_prefix + ".cri_" + tag + ".json",
                   suite_to_json(cmp.with_cri).dump(2) + "\n");
    }
    os << report.body_text;
    os << "\nreport: " << opt.out_prefix << ".txt, " << opt.out_prefix << ".json, "
       << opt.out_prefix << ".timing.txt\n";
    return 0;
}

inline int cmd_compare(const std::string& baseline_path, const std::string& cri_path,
                       const Config& cfg, std::ostream& os) {
    auto load_suite = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open suite file: " + path);
        nlohmann::json j;
        in >> j;
        return suite_from_json(j);
    };
    const SuiteComparison cmp{load_suite(baseline_path), load_suite(cri_path)};
    os << config_header(cfg);
    os << render_comparison_text({cmp});
    return 0;
}

inline int cmd_validate(const std::vector<std::string>& paths, std::ostream& os) {
    int failures = 0;
    for (const auto& path : paths) {
        try {
            if (path.size() >= 4 && path.substr(path.size() - 4) == ".scn") {
                const Scenario sc = load_scenario(path);
                os << path << ": ok (scenario '" << sc.name << "', " << sc.npcs.size()
                   << " npcs)\n";
            } else {
                const Config cfg = load_config(path);
                (void)cfg;
                os << path << ": ok (config)\n";
            }
        } catch (const std::exception& e) {
            os << path << ": INVALID: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace cri::cli
