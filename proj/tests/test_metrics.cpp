#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cri/metrics.hpp"

using namespace cri;
using Catch::Approx;

TEST_CASE("jerk_stats finite difference cases") {
    CHECK_FALSE(jerk_stats({1.0, 2.0}, 1.0).has_value());

    const auto constant = jerk_stats({5.0, 5.0, 5.0, 5.0}, 1.0);
    REQUIRE(constant);
    CHECK(constant->mean_abs == 0.0);
    CHECK(constant->std_abs == 0.0);
    CHECK(constant->max_abs == 0.0);

    const auto ramp = jerk_stats({0.0, 1.0, 2.0, 3.0}, 1.0);
    REQUIRE(ramp);
    CHECK(ramp->mean_abs == Approx(0.0).margin(1e-12));
    CHECK(ramp->std_abs == Approx(0.0).margin(1e-12));
    CHECK(ramp->max_abs == Approx(0.0).margin(1e-12));

    const auto step = jerk_stats({0.0, 0.0, 1.0, 1.0}, 1.0);
    REQUIRE(step);
    CHECK(step->mean_abs == Approx(1.0));
    CHECK(step->std_abs == Approx(0.0).margin(1e-12));
    CHECK(step->max_abs == Approx(1.0));
}

TEST_CASE("jerk_stats ignores constant speed offsets") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    std::vector<double> v(40);
    for (auto& x : v) x = u(rng);
    const auto base = jerk_stats(v, 0.05);
    auto shifted = v;
    for (auto& x : shifted) x += 7.5;
    const auto moved = jerk_stats(shifted, 0.05);
    REQUIRE(base);
    REQUIRE(moved);
    CHECK(moved->mean_abs == Approx(base->mean_abs).margin(1e-9));
    CHECK(moved->std_abs == Approx(base->std_abs).margin(1e-9));
    CHECK(moved->max_abs == Approx(base->max_abs).margin(1e-9));
}

namespace {
RouteMetrics route_with(const std::string& name, int collisions, double km, bool fp = false) {
    RouteMetrics r;
    r.scenario_name = name;
    r.collisions = collisions;
    r.distance_km = km;
    r.failure_prone = fp;
    r.completed = true;
    r.completion = 1.0;
    return r;
}
}  // namespace

TEST_CASE("collision_metrics arithmetic") {
    const auto [cpr1, cpk1] = collision_metrics({route_with("a", 1, 0.1), route_with("b", 0, 0.1)});
    CHECK(cpr1 == Approx(0.5));
    REQUIRE(cpk1);
    CHECK(*cpk1 == Approx(5.0));

    const auto [cpr2, cpk2] = collision_metrics({route_with("a", 0, 0.3), route_with("b", 0, 0.4)});
    CHECK(cpr2 == 0.0);
    REQUIRE(cpk2);
    CHECK(*cpk2 == 0.0);

    const auto [cpr3, cpk3] = collision_metrics({route_with("a", 2, 0.2)});
    CHECK(cpr3 == Approx(2.0));
    CHECK(*cpk3 == Approx(10.0));

    const auto [cpr4, cpk4] = collision_metrics({route_with("a", 1, 0.0)});
    CHECK(cpr4 == Approx(1.0));
    CHECK_FALSE(cpk4.has_value());  // zero distance leaves CpK undefined

    CHECK_THROWS_AS(collision_metrics({}), std::invalid_argument);
}

TEST_CASE("collision_metrics is permutation invariant") {
    std::vector<RouteMetrics> routes = {route_with("a", 1, 0.2), route_with("b", 3, 0.5),
                                        route_with("c", 0, 0.1), route_with("d", 2, 0.4)};
    const auto [cpr, cpk] = collision_metrics(routes);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(routes.begin(), routes.end(), rng);
        const auto [cpr2, cpk2] = collision_metrics(routes);
        CHECK(cpr2 == Approx(cpr));
        CHECK(*cpk2 == Approx(*cpk));
    }
}

TEST_CASE("composed_score penalty table") {
    const auto [cs0, sp0] = composed_score(1.0, 0, 0.6);
    CHECK(cs0 == Approx(100.0));
    CHECK(sp0 == Approx(0.0));

    const auto [cs1, sp1] = composed_score(1.0, 1, 0.6);
    CHECK(cs1 == Approx(60.0));
    CHECK(sp1 == Approx(0.4));

    const auto [cs2, sp2] = composed_score(0.5, 2, 0.6);
    CHECK(cs2 == Approx(18.0));
    CHECK(sp2 == Approx(0.64));
}

TEST_CASE("composed_score multiplicative identity") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> n(0, 6);
    for (int i = 0; i < 1000; ++i) {
        const double completion = u(rng);
        const int collisions = n(rng);
        const auto [cs, sp] = composed_score(completion, collisions, 0.6);
        CHECK(cs + 100.0 * completion * sp == Approx(100.0 * completion).margin(1e-9));
    }
}

TEST_CASE("runtime_profile pairing and overhead") {
    std::vector<RouteMetrics> base = {route_with("a", 0, 0.1), route_with("b", 0, 0.1)};
    std::vector<RouteMetrics> with = base;
    for (auto& r : base) r.mean_cycle_us = 70530.0;
    for (auto& r : with) {
        r.mean_cycle_us = 74130.0;
        r.mean_component_us = {10.0, 8.0, 2.0, 6.0};
    }
    const auto p = runtime_profile(base, with);
    CHECK(p.runstep_baseline_ms == Approx(70.53));
    CHECK(p.runstep_cri_ms == Approx(74.13));
    CHECK(p.overhead_ms() == Approx(3.60).margin(1e-9));
    CHECK(p.overhead_pct() == Approx(5.1042).margin(1e-3));
    CHECK(p.reception_ms == Approx(0.020));
    CHECK(p.adaptation_ms == Approx(0.006));

    auto unpaired = with;
    unpaired.pop_back();
    CHECK_THROWS_AS(runtime_profile(base, unpaired), std::invalid_argument);
}

TEST_CASE("runtime profile render echoes component rows") {
    RuntimeProfile p;
    p.reception_ms = 0.020;
    p.adaptation_ms = 0.006;
    p.initialization_ms = 0.005;
    p.runstep_baseline_ms = 70.53;
    p.runstep_cri_ms = 74.13;
    const auto text = render_runtime_profile(p);
    CHECK(text.find("0.020") != std::string::npos);
    CHECK(text.find("0.006") != std::string::npos);
    CHECK(text.find("0.005") != std::string::npos);
    CHECK(text.find("70.53") != std::string::npos);
    CHECK(text.find("74.13") != std::string::npos);
    CHECK(text.find("3.60") != std::string::npos);
    CHECK(text.find("5.10%") != std::string::npos);
}

TEST_CASE("suite aggregation and comparison deltas") {
    std::vector<RouteMetrics> base_routes, cri_routes;
    for (int i = 0; i < 4; ++i) {
        auto r = route_with("s" + std::to_string(i), i % 2 == 0 ? 1 : 2, 0.1);
        r.composed_score = 44.96;
        r.score_penalty = 0.46;
        r.jerk = JerkStats{33.34, 95.55, 673.08};
        base_routes.push_back(r);
        auto c = r;
        c.collisions = i % 2;
        c.composed_score = 52.62;
        c.score_penalty = 0.53;
        c.jerk = JerkStats{27.09, 68.16, 562.82};
        cri_routes.push_back(c);
    }
    auto base = aggregate_suite(base_routes, "Baseline_ALL");
    auto with = aggregate_suite(cri_routes, "CRI_ALL");
    CHECK(base.cpr == Approx(1.5));
    CHECK(*base.cpk == Approx(6.0 / 0.4));
    CHECK(with.cpr == Approx(0.5));

    // Frozen delta renderings: 12.37 -> 9.92 is -19.8%, 44.96 -> 52.62 is +17.0%.
    base.cpk = 12.37;
    with.cpk = 9.92;
    const auto text = render_comparison_text({{base, with}});
    CHECK(text.find("-19.8%") != std::string::npos);
    CHECK(text.find("+17.0%") != std::string::npos);

    const auto j = comparison_to_json({{base, with}});
    CHECK(j[0]["delta_pct"]["CpK"].get<double>() == Approx(-19.806).margin(1e-2));
    CHECK(j[0]["delta_pct"]["CS"].get<double>() == Approx(17.037).margin(1e-2));

    // Identical inputs render zero deltas.
    const auto same = comparison_to_json({{base, base}});
    CHECK(same[0]["delta_pct"]["CpR"].get<double>() == 0.0);
    CHECK(same[0]["delta_pct"]["CS"].get<double>() == 0.0);

    // Mismatched scenario sets refuse to compare.
    auto other = with;
    other.scenario_names.push_back("extra");
    CHECK_THROWS_AS(render_comparison_text({{base, other}}), std::invalid_argument);
}

TEST_CASE("suite json round trip") {
    auto r = route_with("x", 1, 0.25, true);
    r.composed_score = 60.0;
    r.score_penalty = 0.4;
    r.jerk = JerkStats{1.0, 2.0, 3.0};
    const auto suite = aggregate_suite({r}, "FP");
    const auto back = suite_from_json(nlohmann::json::parse(suite_to_json(suite).dump()));
    CHECK(back.label == suite.label);
    CHECK(back.cpr == Approx(suite.cpr));
    CHECK(*back.cpk == Approx(*suite.cpk));
    CHECK(back.saj == Approx(suite.saj));
    CHECK(back.scenario_names == suite.scenario_names);
}
