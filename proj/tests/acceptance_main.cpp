// Acceptance suite: exercises every release criterion end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
//
//   acceptance <scenario_dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "cri/cli_app.hpp"
#include "cri/collision.hpp"
#include "cri/config.hpp"
#include "cri/metrics.hpp"
#include "cri/pipeline.hpp"
#include "cri/scenario_io.hpp"
#include "expected_values.hpp"

using namespace cri;

namespace {

int g_failures = 0;

void report(int criterion, const char* title, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", criterion, title,
                detail.c_str());
    if (!pass) ++g_failures;
}

bool close_rel(double actual, double expected, double rel = 1e-9) {
    if (expected == 0.0) return std::abs(actual) <= rel;
    return std::abs(actual - expected) <= rel * std::abs(expected);
}

// --- criterion 1 ------------------------------------------------------------

void criterion_formula_oracles() {
    const RssParams rss;
    const RiskParams params;
    int bad = 0;
    auto expect = [&](double actual, double expected, const char* what) {
        if (!close_rel(actual, expected)) {
            ++bad;
            std::printf("    mismatch %s: %.12g vs %.12g\n", what, actual, expected);
        }
    };
    expect(orientation_risk(0.0), expected::kOrientationRisk_0, "orientation_risk(0)");
    expect(orientation_risk(91.125), expected::kOrientationRisk_91_125, "orientation_risk(91.125)");
    expect(directional_risk(10.0, -5.0, params.epsilon).f, expected::kDirectionalRisk_10_m5,
           "directional_risk(10,-5)");
    expect(speed_risk(10.0, {10.0, 2, 3.5}), expected::kSpeedRisk_AtLimit_2Lanes,
           "speed_risk(v_limit, 2 lanes)");
    expect(fuse_spatial(0.5, 0.5, 0.5), expected::kFuseSpatial_Half3, "fuse_spatial(.5,.5,.5)");
    {
        RiskFactors f;
        f.f_orientation = f.f_lon = f.f_lat = 0.5;
        f.f_spatial = 0.875;
        f.f_speed = expected::kSpeedRisk_AtLimit_2Lanes;
        expect(object_cri(f, params), expected::kObjectCri_Worked, "object_cri worked example");
    }
    expect(rss_distance(20.0, 15.0, rss), expected::kRssDistance_20_15, "rss_distance(20,15)");
    report(1, "formula oracles match the independent evaluation at 1e-9 relative", bad == 0,
           bad == 0 ? "7/7 frozen values reproduced" : std::to_string(bad) + " mismatches");
}

// --- criterion 2 ------------------------------------------------------------

void criterion_bound_properties() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> pos(-200.0, 200.0);
    std::uniform_real_distribution<double> vel(-40.0, 40.0);
    std::uniform_real_distribution<double> spd(0.0, 40.0);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    std::uniform_int_distribution<int> lanes(1, 4);
    std::uniform_real_distribution<double> beta_r(0.0, 1.0);
    const RiskParams params;
    long violations = 0;
    const int kTrials = 100000;
    for (int i = 0; i < kTrials; ++i) {
        EgoState ego;
        ego.speed = spd(rng);
        const RoadContext road{1.0 + spd(rng), lanes(rng), 3.5};
        RelativeKinematics rel;
        rel.dp_lon = pos(rng);
        rel.dp_lat = pos(rng);
        rel.v_lon = vel(rng);
        rel.v_lat = vel(rng);
        rel.bearing = ang(rng);
        rel.theta_deg = std::abs(rad_to_deg(wrap_angle(ang(rng))));
        const ObjectRisk risk = assess_object(ego, "r", rel, road, params);
        const RiskFactors& f = risk.factors;
        for (double v : {f.f_orientation, f.f_lon, f.f_lat, f.f_speed, f.f_spatial, risk.cri})
            if (!(v >= 0.0 && v <= 1.0)) ++violations;
        if (f.f_spatial < std::max({f.f_orientation, f.f_lon, f.f_lat}) - 1e-15) ++violations;
        if (approach_product(rel.dp_lon, rel.v_lon) >= 0.0 && f.f_lon != 0.0) ++violations;
        if (approach_product(rel.dp_lat, rel.v_lat) >= 0.0 && f.f_lat != 0.0) ++violations;

        // Fused field stays clamped too.
        if (i % 10 == 0) {
            std::vector<ObjectRisk> objs{risk};
            ObjectRisk second = risk;
            second.bearing = ang(rng);
            second.cri = beta_r(rng);
            objs.push_back(second);
            const SectorField field = build_sector_field(objs, 0.7);
            if (!(field.cri_final >= 0.0 && field.cri_final <= 1.0)) ++violations;
        }
    }
    report(2, "bounds hold over randomized states", violations == 0,
           std::to_string(kTrials) + " states, " + std::to_string(violations) + " violations");
}

// --- criterion 3 ------------------------------------------------------------

void criterion_sector_properties() {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> count(0, 12);
    std::uniform_int_distribution<int> sector(0, 7);
    std::uniform_real_distribution<double> off(-0.95, 0.95);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::uniform_int_distribution<int> shift(1, 7);
    long violations = 0;
    const int kTrials = 10000;
    for (int t = 0; t < kTrials; ++t) {
        std::vector<ObjectRisk> objects;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            ObjectRisk o;
            o.bearing = wrap_angle(sector(rng) * std::numbers::pi / 4.0 +
                                   off(rng) * std::numbers::pi / 8.0);
            o.cri = val(rng);
            objects.push_back(o);
        }
        const SectorField field = build_sector_field(objects, 0.7);

        auto shuffled = objects;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const SectorField field_shuffled = build_sector_field(shuffled, 0.7);
        if (field_shuffled.R != field.R || field_shuffled.cri_final != field.cri_final)
            ++violations;

        const int k = shift(rng);
        auto rotated = objects;
        for (auto& o : rotated) o.bearing = wrap_angle(o.bearing + k * std::numbers::pi / 4.0);
        const SectorField field_rot = build_sector_field(rotated, 0.7);
        for (int d = 0; d < kSectorCount; ++d)
            if (std::abs(field_rot.R[(d + k) % kSectorCount] - field.R[d]) > 1e-15) ++violations;
        if (std::abs(field_rot.r_vector - field.r_vector) > 1e-12) ++violations;
        if (std::abs(field_rot.cri_final_raw - field.cri_final_raw) > 1e-12) ++violations;

        int nonzero = 0;
        for (double r : field.R) nonzero += r > 0.0;
        if (nonzero == 1 && std::abs(field.cri_final - field.r_max) > 1e-15) ++violations;

        // Antipodal mirror built from this field cancels exactly.
        std::vector<ObjectRisk> antipodal;
        for (int d = 0; d < 4; ++d) {
            ObjectRisk a;
            a.bearing = sector_center(d);
            a.cri = field.R[d] > 0 ? field.R[d] : val(rng);
            ObjectRisk b = a;
            b.bearing = sector_center(d + 4);
            antipodal.push_back(a);
            antipodal.push_back(b);
        }
        if (build_sector_field(antipodal, 0.7).r_vector > 1e-12) ++violations;
    }
    report(3, "sector field invariances hold", violations == 0,
           std::to_string(kTrials) + " random fields, " + std::to_string(violations) +
               " violations");
}

// --- criterion 4 ------------------------------------------------------------

void criterion_safety_monotonicity() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> steer(-1.0, 1.0);
    const EgoState ego;
    const ControllerParams params;
    long violations = 0;
    const int kTrials = 10000;
    for (int i = 0; i < kTrials; ++i) {
        const ControlCommand baseline{u(rng), u(rng) < 0.5 ? 0.0 : u(rng), steer(rng)};
        SectorField field;
        for (int d = 0; d < kSectorCount; ++d) field.R[d] = u(rng) < 0.4 ? 0.0 : u(rng);
        field = fuse(field, 0.7);
        for (DrivingMode mode :
             {DrivingMode::Aggressive, DrivingMode::Neutral, DrivingMode::Conservative}) {
            const ControlCommand out = adapt_control(baseline, mode, field, ego, params);
            if (out.throttle > baseline.throttle + 1e-15) ++violations;
            if (out.brake < std::min(1.0, baseline.brake) - 1e-15) ++violations;
            if (out.throttle < 0 || out.throttle > 1 || out.brake < 0 || out.brake > 1 ||
                out.steer < -1 || out.steer > 1)
                ++violations;
        }
    }
    report(4, "adapted commands never exceed baseline throttle nor cut brake", violations == 0,
           std::to_string(kTrials) + " command/field pairs x 3 modes, " +
               std::to_string(violations) + " violations");
}

// --- criterion 5 ------------------------------------------------------------

void criterion_golden_scenario(const std::string& dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario sc = load_scenario(dir + "/intersection_stop_violation.scn");
    const Config cfg;
    const RunResult base = run_scenario(sc, false, cfg.cri, cfg.sim);
    const RunResult with = run_scenario(sc, true, cfg.cri, cfg.sim);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    long base_coll_tick = -1;
    for (size_t i = 0; i < base.trace.size(); ++i)
        if (!base.trace[i].collisions.empty()) {
            base_coll_tick = static_cast<long>(i);
            break;
        }
    long first_peak_tick = -1;
    double peak = 0.0;
    for (size_t i = 0; i < with.trace.size(); ++i) {
        peak = std::max(peak, with.trace[i].cri_final);
        if (first_peak_tick < 0 && with.trace[i].cri_final >= 0.6)
            first_peak_tick = static_cast<long>(i);
    }
    const bool pass = base.collision_count >= 1 && with.collision_count == 0 &&
                      first_peak_tick >= 0 && base_coll_tick >= 0 &&
                      base_coll_tick - first_peak_tick >= 5 && secs < 5.0;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "baseline %d collision(s) at tick %ld; adapted 0 collisions, cri peak %.3f "
                  "reaching 0.6 at tick %ld (%ld ticks early); %.2f s",
                  base.collision_count, base_coll_tick, peak, first_peak_tick,
                  base_coll_tick - first_peak_tick, secs);
    report(5, "golden intersection run: baseline collides, adapted run avoids with early warning",
           pass, detail);
}

// --- criterion 6 ------------------------------------------------------------

void criterion_corpus_claim(const std::string& dir) {
    const Config cfg;
    const auto paths = cli::list_scenarios(dir);
    const auto runs = cli::run_batch(paths, cfg, 4);

    std::vector<RouteMetrics> base_all, cri_all, base_fp, cri_fp;
    for (const auto& r : runs) {
        base_all.push_back(r.baseline);
        cri_all.push_back(r.with_cri);
        if (r.scenario.failure_prone()) {
            base_fp.push_back(r.baseline);
            cri_fp.push_back(r.with_cri);
        }
    }
    const SuiteMetrics sb_all = aggregate_suite(base_all, "Baseline_ALL");
    const SuiteMetrics sc_all = aggregate_suite(cri_all, "CRI_ALL");
    const SuiteMetrics sb_fp = aggregate_suite(base_fp, "Baseline_FP");
    const SuiteMetrics sc_fp = aggregate_suite(cri_fp, "CRI_FP");

    const bool corpus_ok = runs.size() >= 20 && base_fp.size() >= 5;
    const bool all_ok = sb_all.cpk && sc_all.cpk && *sc_all.cpk < *sb_all.cpk;
    const double fp_reduction =
        (sb_fp.cpk && sc_fp.cpk && *sb_fp.cpk > 0.0) ? 1.0 - *sc_fp.cpk / *sb_fp.cpk : 0.0;
    const bool fp_ok = fp_reduction >= 0.10;
    const bool saj_ok = sc_fp.saj <= sb_fp.saj;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "%zu routes (%zu fp); CpK all %.3f -> %.3f; CpK fp %.3f -> %.3f (-%.1f%%); "
                  "SAJ fp %.2f -> %.2f",
                  runs.size(), base_fp.size(), *sb_all.cpk, *sc_all.cpk, *sb_fp.cpk, *sc_fp.cpk,
                  fp_reduction * 100.0, sb_fp.saj, sc_fp.saj);
    report(6, "corpus-level collision-rate and smoothness direction",
           corpus_ok && all_ok && fp_ok && saj_ok, detail);
}

// --- criterion 7 ------------------------------------------------------------

void criterion_runtime_budget() {
    // 64 objects inside the envelope of a fast ego.
    EgoState ego;
    ego.speed = 20.0;
    const RoadContext road{20.0, 2, 3.5};
    const Config cfg;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lon(-10.0, 38.0);
    std::uniform_real_distribution<double> lat(-3.8, 3.8);
    std::uniform_real_distribution<double> vel(-15.0, 15.0);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    std::vector<ObjectState> objects;
    for (int i = 0; i < 64; ++i) {
        ObjectState o;
        o.id = "o" + std::to_string(i);
        o.position = {lon(rng), lat(rng)};
        o.velocity = {vel(rng), vel(rng)};
        o.heading = ang(rng);
        objects.push_back(o);
    }
    {
        ControllerState probe_state;
        probe_state.params = cfg.cri.controller;
        const auto probe =
            decision_cycle(ego, objects, road, {0.5, 0.0, 0.0}, cfg.cri, probe_state);
        if (probe.diagnostics.object_risks.size() != 64) {
            report(7, "decision-cycle latency with 64 tracked objects", false,
                   "expected 64 objects inside the envelope, got " +
                       std::to_string(probe.diagnostics.object_risks.size()));
            return;
        }
    }
    const int kIters = 2001;
    std::vector<double> ms(kIters);
    ControllerState state;
    state.params = cfg.cri.controller;
    CycleTimings mean_timings;
    for (int i = 0; i < kIters; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto result = decision_cycle(ego, objects, road, {0.5, 0.0, 0.0}, cfg.cri, state);
        ms[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
        mean_timings.envelope_us += result.diagnostics.timings.envelope_us / kIters;
        mean_timings.risk_us += result.diagnostics.timings.risk_us / kIters;
        mean_timings.fusion_us += result.diagnostics.timings.fusion_us / kIters;
        mean_timings.adaptation_us += result.diagnostics.timings.adaptation_us / kIters;
    }
    std::sort(ms.begin(), ms.end());
    const double median = ms[ms.size() / 2];
    const double p99 = ms[static_cast<size_t>(ms.size() * 0.99)];
    const bool pass = median <= 0.5 && p99 <= 3.6;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "median %.4f ms, p99 %.4f ms over %d cycles",
                  median, p99, kIters);
    report(7, "decision-cycle latency with 64 tracked objects", pass, detail);

    RuntimeProfile profile;
    profile.reception_ms =
        (mean_timings.envelope_us + mean_timings.risk_us + mean_timings.fusion_us) / 1000.0;
    profile.adaptation_ms = mean_timings.adaptation_us / 1000.0;
    profile.runstep_baseline_ms = 0.0;
    profile.runstep_cri_ms = median;
    std::printf("%s", render_runtime_profile(profile).c_str());
}

// --- criterion 8 ------------------------------------------------------------

void criterion_batch_determinism(const std::string& dir) {
    const auto tmp = std::filesystem::temp_directory_path() / "cri_acceptance";
    std::filesystem::create_directories(tmp);
    const Config cfg;
    cli::BatchOptions a;
    a.scenario_dir = dir;
    a.out_prefix = (tmp / "rep_a").string();
    a.parallel = 1;
    cli::BatchOptions b = a;
    b.out_prefix = (tmp / "rep_b").string();
    b.parallel = 4;
    std::ostringstream sink_a, sink_b;
    cli::cmd_batch(a, cfg, sink_a);
    cli::cmd_batch(b, cfg, sink_b);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const bool txt_same = slurp(a.out_prefix + ".txt") == slurp(b.out_prefix + ".txt");
    const bool json_same = slurp(a.out_prefix + ".json") == slurp(b.out_prefix + ".json");
    report(8, "batch report bodies are byte-identical across executions", txt_same && json_same,
           txt_same && json_same ? "text and json bodies match across thread counts"
                                 : "bodies differ");
}

// --- criterion 9 ------------------------------------------------------------

bool point_in_box(Vec2 p, const OrientedBox& b) {
    const Vec2 local = rotate(p - b.center, -b.heading);
    return std::abs(local.x) <= b.extents.half_length && std::abs(local.y) <= b.extents.half_width;
}

bool sampled_overlap(const OrientedBox& a, const OrientedBox& b, double step) {
    auto scan = [&](const OrientedBox& from, const OrientedBox& to) {
        const int nx = static_cast<int>(std::ceil(2.0 * from.extents.half_length / step));
        const int ny = static_cast<int>(std::ceil(2.0 * from.extents.half_width / step));
        for (int i = 0; i <= nx; ++i) {
            const double x = -from.extents.half_length + 2.0 * from.extents.half_length * i / nx;
            for (int j = 0; j <= ny; ++j) {
                const double y = -from.extents.half_width + 2.0 * from.extents.half_width * j / ny;
                if (point_in_box(from.center + rotate({x, y}, from.heading), to)) return true;
            }
        }
        return false;
    };
    return scan(a, b) || scan(b, a);
}

void criterion_sat_oracle() {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> pos(-6.0, 6.0);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> hl(0.5, 2.5);
    std::uniform_real_distribution<double> hw(0.3, 1.2);
    int tested = 0, disagreements = 0;
    while (tested < 1000) {
        const OrientedBox a{{pos(rng), pos(rng)}, ang(rng), {hl(rng), hw(rng)}};
        const OrientedBox b{{pos(rng), pos(rng)}, ang(rng), {hl(rng), hw(rng)}};
        if (std::abs(sat_separation(a, b)) <= 0.01) continue;
        ++tested;
        bool oracle = sampled_overlap(a, b, 0.01);
        if (oracle != boxes_overlap(a, b)) oracle = sampled_overlap(a, b, 0.001);
        if (oracle != boxes_overlap(a, b)) ++disagreements;
    }
    report(9, "separating-axis test agrees with dense containment sampling", disagreements == 0,
           "1000 box pairs with >1 cm margin, " + std::to_string(disagreements) +
               " disagreements");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string scenario_dir = argc > 1 ? argv[1] : "scenarios";
    criterion_formula_oracles();
    criterion_bound_properties();
    criterion_sector_properties();
    criterion_safety_monotonicity();
    try {
        criterion_golden_scenario(scenario_dir);
        criterion_corpus_claim(scenario_dir);
    } catch (const std::exception& e) {
        report(5, "golden/corpus scenarios", false, e.what());
    }
    criterion_runtime_budget();
    try {
        criterion_batch_determinism(scenario_dir);
    } catch (const std::exception& e) {
        report(8, "batch determinism", false, e.what());
    }
    criterion_sat_oracle();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
