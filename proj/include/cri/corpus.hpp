#pragma once

#include <vector>

#include "cri/sim.hpp"

// Built-in scenario corpus: scripted routes across the threat directions
// (lead braking, cross-traffic violations, rear closers, lateral cut-ins,
// multi-threat), plus clean control runs. Scenarios tagged "fp" are the
// ones on which the baseline controller collides.

namespace cri::corpus {

inline constexpr double kDt = 0.05;
inline constexpr double kCarHalfLength = 2.3;
inline constexpr double kCarHalfWidth = 0.9;

namespace detail {

inline Scenario base(const std::string& name, double route_length, double v_limit, int lanes) {
    Scenario sc;
    sc.name = name;
    sc.road = {v_limit, lanes, 3.5};
    sc.route = {{0.0, 0.0}, {route_length, 0.0}};
    sc.ego_start = {{0.0, 0.0}, 0.0, v_limit};
    sc.ego_box = {kCarHalfLength, kCarHalfWidth};
    sc.duration_limit = route_length / v_limit * 3.0 + 25.0;
    sc.dt = kDt;
    return sc;
}

inline NpcScript car(const std::string& id, std::vector<Waypoint> wps, double spawn = 0.0,
                     bool violates = false) {
    NpcScript npc;
    npc.id = id;
    npc.spawn_time = spawn;
    npc.waypoints = std::move(wps);
    npc.violates = violates;
    npc.bounding_box = {kCarHalfLength, kCarHalfWidth};
    return npc;
}

inline NpcScript bike(const std::string& id, std::vector<Waypoint> wps, double spawn = 0.0) {
    NpcScript npc = car(id, std::move(wps), spawn);
    npc.bounding_box = {1.0, 0.45};
    return npc;
}

}  // namespace detail

// --- clean control runs ------------------------------------------------------

inline Scenario straight() { return detail::base("straight", 250.0, 12.0, 1); }

inline Scenario straight_fast() { return detail::base("straight_fast", 400.0, 16.7, 2); }

inline Scenario curve_road() {
    Scenario sc = detail::base("curve_road", 0.0, 10.0, 1);
    sc.route = {{0.0, 0.0}, {60.0, 0.0}, {90.0, 10.0}, {120.0, 30.0}, {150.0, 40.0},
                {200.0, 40.0}, {250.0, 40.0}};
    sc.duration_limit = 70.0;
    return sc;
}

inline Scenario dense_neighbors() {
    Scenario sc = detail::base("dense_neighbors", 300.0, 13.9, 2);
    sc.npcs.push_back(detail::car("ahead_same", {{{35.0, 0.0}, 13.9}, {{330.0, 0.0}, 0.0}}));
    sc.npcs.push_back(detail::car("left_front", {{{20.0, 3.5}, 13.9}, {{330.0, 3.5}, 0.0}}));
    sc.npcs.push_back(detail::car("left_rear", {{{-15.0, 3.5}, 13.9}, {{330.0, 3.5}, 0.0}}));
    sc.npcs.push_back(detail::car("far_front", {{{60.0, 0.0}, 14.5}, {{340.0, 0.0}, 0.0}}));
    return sc;
}

// --- leading-vehicle family ---------------------------------------------------

inline Scenario lead_cruise() {
    Scenario sc = detail::base("lead_cruise", 300.0, 12.0, 1);
    sc.npcs.push_back(detail::car("lead", {{{30.0, 0.0}, 12.0}, {{330.0, 0.0}, 0.0}}));
    return sc;
}

inline Scenario lead_slower() {
    Scenario sc = detail::base("lead_slower", 300.0, 12.0, 1);
    sc.npcs.push_back(detail::car("lead", {{{60.0, 0.0}, 7.0}, {{330.0, 0.0}, 0.0}}));
    return sc;
}

inline Scenario lead_brake_gentle() {
    Scenario sc = detail::base("lead_brake_gentle", 300.0, 12.0, 1);
    sc.npcs.push_back(detail::car(
        "lead", {{{30.0, 0.0}, 12.0}, {{120.0, 0.0}, 5.0}, {{330.0, 0.0}, 0.0}}));
    return sc;
}

inline Scenario lead_stop_hard() {
    Scenario sc = detail::base("lead_stop_hard", 260.0, 13.0, 1);
    sc.tags = {"fp"};
    // Lead parks mid-lane; the 6 m headway reaction cannot absorb the
    // closing speed, and the blocked lane forces a push-through.
    sc.npcs.push_back(detail::car("lead", {{{60.0, 0.0}, 13.0},
                                           {{110.0, 0.0}, 0.3},
                                           {{113.0, 0.0}, 12.0},
                                           {{300.0, 0.0}, 0.0}}));
    return sc;
}

inline Scenario stalled_car_inlane() {
    Scenario sc = detail::base("stalled_car_inlane", 260.0, 12.0, 2);
    sc.tags = {"fp"};
    // Crossing vehicle noses into the lane, stalls, then clears.
    sc.npcs.push_back(detail::car("stalled", {{{70.0, 6.0}, 1.0},
                                              {{70.0, 0.3}, 0.06},
                                              {{70.0, -0.3}, 7.0},
                                              {{70.0, -60.0}, 0.0}},
                                  0.15));
    return sc;
}

// --- crossing family -----------------------------------------------------------

inline Scenario cross_violation_east() {
    // Violator from the left runs its sign and creeps across the lane.
    Scenario sc = detail::base("cross_violation_east", 200.0, 12.0, 2);
    sc.tags = {"fp"};
    sc.npcs.push_back(detail::car("violator",
                                  {{{90.0, 40.0}, 9.0},
                                   {{90.0, 4.0}, 1.3},
                                   {{90.0, -4.0}, 7.0},
                                   {{90.0, -60.0}, 0.0}},
                                  0.0, true));
    return sc;
}

inline Scenario cross_violation_west() {
    // Violator from the right runs its sign and hesitates over the lane.
    Scenario sc = detail::base("cross_violation_west", 200.0, 13.0, 2);
    sc.tags = {"fp"};
    sc.npcs.push_back(detail::car("violator",
                                  {{{110.0, -30.0}, 8.0},
                                   {{110.0, -1.2}, 0.3},
                                   {{110.0, 1.3}, 7.0},
                                   {{110.0, 60.0}, 0.0}},
                                  3.0, true));
    return sc;
}

inline Scenario cross_clear_early() {
    // Crosser is long gone when the ego arrives.
    Scenario sc = detail::base("cross_clear_early", 200.0, 12.0, 2);
    sc.npcs.push_back(detail::car(
        "crosser", {{{100.0, 30.0}, 8.0}, {{100.0, -80.0}, 0.0}}, 0.0, true));
    return sc;
}

inline Scenario cross_slow_blocker() {
    Scenario sc = detail::base("cross_slow_blocker", 200.0, 12.0, 2);
    sc.tags = {"fp"};
    // Crosser stops dead over the ego lane, then clears.
    sc.npcs.push_back(detail::car("blocker",
                                  {{{95.0, 25.0}, 9.0},
                                   {{95.0, 1.75}, 1.2},
                                   {{95.0, 0.3}, 0.05},
                                   {{95.0, -0.05}, 7.0},
                                   {{95.0, -60.0}, 0.0}},
                                  3.8, true));
    return sc;
}

inline Scenario cross_yield() {
    Scenario sc = detail::base("cross_yield", 200.0, 12.0, 2);
    sc.stop_triggers = {{100.0, 6.0}};  // sign on the crossing road
    sc.npcs.push_back(detail::car(
        "lawful", {{{100.0, 40.0}, 8.0}, {{100.0, -60.0}, 0.0}}, 4.0, false));
    return sc;
}

// --- golden intersection reconstruction ----------------------------------------

inline Scenario intersection_stop_violation() {
    Scenario sc;
    sc.name = "intersection_stop_violation";
    sc.tags = {"fp"};
    sc.road = {12.0, 2, 3.5};
    sc.route = {{0.0, 0.0}, {200.0, 0.0}};
    sc.ego_start = {{0.0, 0.0}, 0.0, 12.0};
    sc.ego_box = {kCarHalfLength, kCarHalfWidth};
    sc.stop_triggers = {{30.0, 0.0}};
    sc.duration_limit = 50.0;
    sc.dt = kDt;
    // Following vehicle closing in while the ego brakes for its sign.
    sc.npcs.push_back(detail::bike("follower", {{{-28.0, 0.0}, 13.0},
                                                {{14.0, 0.0}, 8.0},
                                                {{23.5, 0.0}, 0.0}}));
    // Opposing vehicle running the cross-street sign and hesitating over
    // the ego lane while the ego re-enters at speed.
    sc.npcs.push_back(detail::car("violator", {{{75.0, 35.0}, 9.0},
                                               {{75.0, 4.0}, 0.8},
                                               {{75.0, 0.2}, 0.35},
                                               {{75.0, -0.6}, 8.0},
                                               {{75.0, -60.0}, 0.0}},
                                  3.8, true));
    return sc;
}

// --- cut-in family ---------------------------------------------------------------

inline Scenario cut_in(const std::string& name, double cut_start_x, double cut_len,
                       double cut_speed, double slow_to) {
    Scenario sc = detail::base(name, 260.0, 12.0, 2);
    sc.npcs.push_back(detail::car("cutter", {{{cut_start_x, 3.5}, cut_speed},
                                             {{cut_start_x + cut_len, 0.0}, slow_to},
                                             {{cut_start_x + cut_len + 12.0, 0.0}, 11.0},
                                             {{290.0, 0.0}, 0.0}}));
    return sc;
}

inline Scenario cut_in_close() {
    Scenario sc = cut_in("cut_in_close", 16.0, 14.0, 10.0, 2.0);
    sc.tags = {"fp"};
    return sc;
}

inline Scenario cut_in_gentle() { return cut_in("cut_in_gentle", 20.0, 40.0, 11.0, 9.0); }

// --- rear family -----------------------------------------------------------------

inline Scenario rear_closer() {
    Scenario sc = detail::base("rear_closer", 250.0, 10.0, 1);
    // Motorbike closes from behind, then gives up and matches pace.
    sc.npcs.push_back(detail::bike("tail", {{{-30.0, 0.0}, 14.0},
                                            {{-8.0, 0.0}, 10.5},
                                            {{230.0, 0.0}, 0.0}}));
    return sc;
}

inline Scenario rear_tailgater() {
    Scenario sc = detail::base("rear_tailgater", 250.0, 10.0, 1);
    sc.npcs.push_back(detail::bike("tail", {{{-5.5, 0.0}, 10.0}, {{240.0, 0.0}, 0.0}}));
    return sc;
}

// --- oncoming ---------------------------------------------------------------------

inline Scenario oncoming_pass() {
    Scenario sc = detail::base("oncoming_pass", 250.0, 12.0, 2);
    sc.npcs.push_back(detail::car("oncoming1", {{{150.0, 3.5}, 12.0}, {{-40.0, 3.5}, 0.0}}));
    sc.npcs.push_back(detail::car("oncoming2", {{{260.0, 3.5}, 12.0}, {{-40.0, 3.5}, 0.0}},
                                  4.0));
    return sc;
}

// --- multi-threat -----------------------------------------------------------------

inline Scenario multi_threat() {
    Scenario sc = detail::base("multi_threat", 240.0, 12.0, 2);
    sc.tags = {"fp"};
    // Lead pulls away and exposes a creeping stall in the lane.
    sc.npcs.push_back(detail::car("lead", {{{45.0, 0.0}, 12.0},
                                           {{100.0, 0.0}, 15.0},
                                           {{280.0, 0.0}, 0.0}}));
    sc.npcs.push_back(detail::car("stalled", {{{130.0, 5.0}, 0.8},
                                              {{130.0, 0.3}, 0.05},
                                              {{130.0, -0.3}, 7.0},
                                              {{130.0, -60.0}, 0.0}},
                                  5.2));
    return sc;
}

inline std::vector<Scenario> all() {
    return {straight(),
            straight_fast(),
            curve_road(),
            dense_neighbors(),
            lead_cruise(),
            lead_slower(),
            lead_brake_gentle(),
            lead_stop_hard(),
            stalled_car_inlane(),
            cross_violation_east(),
            cross_violation_west(),
            cross_clear_early(),
            cross_slow_blocker(),
            cross_yield(),
            intersection_stop_violation(),
            cut_in_close(),
            cut_in_gentle(),
            rear_closer(),
            rear_tailgater(),
            oncoming_pass(),
            multi_threat()};
}

}  // namespace cri::corpus
