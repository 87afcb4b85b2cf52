#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cri/collision.hpp"
#include "cri/control.hpp"
#include "cri/core_types.hpp"
#include "cri/pipeline.hpp"

namespace cri {

struct Waypoint {
    Vec2 position;
    double speed{0.0};  // target speed of the segment starting here, m/s
};

struct NpcScript {
    std::string id;
    double spawn_time{0.0};
    std::vector<Waypoint> waypoints;
    bool violates{false};  // ignores stop triggers
    BoxExtents bounding_box;
};

struct EgoStart {
    Vec2 position;
    double heading{0.0};
    double speed{0.0};
};

struct Scenario {
    std::string name;
    std::vector<std::string> tags;
    RoadContext road;
    std::vector<Vec2> route;
    EgoStart ego_start;
    BoxExtents ego_box;
    double ego_wheelbase{2.7};
    std::vector<NpcScript> npcs;
    std::vector<Vec2> stop_triggers;
    double duration_limit{60.0};
    double dt{0.05};

    bool failure_prone() const {
        return std::find(tags.begin(), tags.end(), "fp") != tags.end();
    }
};

struct SimParams {
    double a_max{3.5};            // throttle-to-acceleration gain, m/s^2
    double a_brake{8.0};          // brake-to-deceleration gain, m/s^2
    double max_steer{0.6109};     // rad (35 deg)
    double headway{6.0};          // baseline lead-reaction distance, m
    double comfort_decel{2.5};    // planned stop deceleration, m/s^2
    double kp_speed{0.8};         // speed P-gain, 1/s
    double stop_response{0.3};    // stop-profile tracking time constant, s
    double lookahead_gain{0.8};   // s
    double lookahead_min{3.0};    // m
    double lookahead_max{12.0};   // m
    double stop_radius{1.5};      // m
    double stop_wait{2.0};        // s
    double trigger_capture{2.0};  // trigger-to-path association distance, m
    double arrive_radius{2.0};    // route completion distance, m
    bool stop_on_collision{false};
};

// ---------------------------------------------------------------------------
// Polyline utilities

struct Polyline {
    std::vector<Vec2> points;
    std::vector<double> cum;  // cumulative arc length per point

    explicit Polyline(std::vector<Vec2> pts = {}) : points(std::move(pts)) {
        cum.resize(points.size(), 0.0);
        for (size_t i = 1; i < points.size(); ++i)
            cum[i] = cum[i - 1] + (points[i] - points[i - 1]).norm();
    }

    double length() const { return cum.empty() ? 0.0 : cum.back(); }

    Vec2 point_at(double s) const {
        if (points.size() < 2 || s <= 0.0) return points.empty() ? Vec2{} : points.front();
        if (s >= length()) return points.back();
        size_t i = 1;
        while (cum[i] < s) ++i;
        const double seg = cum[i] - cum[i - 1];
        const double u = seg > 0.0 ? (s - cum[i - 1]) / seg : 0.0;
        return points[i - 1] + u * (points[i] - points[i - 1]);
    }

    /// Arc length of the closest point on the polyline.
    double project(Vec2 p) const {
        double best_d2 = std::numeric_limits<double>::infinity();
        double best_s = 0.0;
        for (size_t i = 1; i < points.size(); ++i) {
            const Vec2 a = points[i - 1], d = points[i] - points[i - 1];
            const double len2 = d.dot(d);
            const double u = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
            const Vec2 q = a + u * d;
            const double d2 = (p - q).dot(p - q);
            if (d2 < best_d2) {
                best_d2 = d2;
                best_s = cum[i - 1] + u * std::sqrt(len2);
            }
        }
        return best_s;
    }

    double distance_to(Vec2 p) const { return (p - point_at(project(p))).norm(); }
};

// ---------------------------------------------------------------------------
// World state

struct CollisionEvent {
    double t{0.0};
    std::string npc_id;
    Vec2 position;
};

struct NpcRuntime {
    NpcScript script;
    Polyline path;
    std::vector<double> stop_arcs;  // trigger arc positions on this path, ascending
    size_t next_stop{0};
    size_t segment{0};
    double s{0.0};  // arc length traveled
    double wait_until{-1.0};
    bool active{false};
    bool despawned{false};
    Vec2 position;
    double heading{0.0};
    Vec2 velocity;
    bool in_contact{false};
};

struct World {
    double t{0.0};
    EgoState ego;
    double ego_distance{0.0};  // odometer, m
    std::vector<NpcRuntime> npcs;
};

inline World init_world(const Scenario& sc, const SimParams& sim) {
    World w;
    w.ego.position = sc.ego_start.position;
    w.ego.heading = wrap_angle(sc.ego_start.heading);
    w.ego.speed = sc.ego_start.speed;
    w.ego.bounding_box = sc.ego_box;
    w.ego.wheelbase = sc.ego_wheelbase;
    for (const auto& script : sc.npcs) {
        NpcRuntime npc;
        npc.script = script;
        std::vector<Vec2> pts;
        pts.reserve(script.waypoints.size());
        for (const auto& wp : script.waypoints) pts.push_back(wp.position);
        npc.path = Polyline(pts);
        if (!script.violates) {
            for (const auto& trig : sc.stop_triggers)
                if (npc.path.distance_to(trig) <= sim.trigger_capture)
                    npc.stop_arcs.push_back(npc.path.project(trig));
            std::sort(npc.stop_arcs.begin(), npc.stop_arcs.end());
        }
        npc.position = pts.empty() ? Vec2{} : pts.front();
        if (pts.size() >= 2) {
            const Vec2 d = pts[1] - pts[0];
            npc.heading = std::atan2(d.y, d.x);
        }
        w.npcs.push_back(std::move(npc));
    }
    return w;
}

inline double npc_segment_speed(const NpcRuntime& npc) {
    const auto& wps = npc.script.waypoints;
    if (npc.segment + 1 >= wps.size()) return 0.0;
    return wps[npc.segment].speed;
}

inline void advance_npc(NpcRuntime& npc, double t, double dt, double stop_wait) {
    if (!npc.active || npc.despawned) return;
    npc.velocity = {0.0, 0.0};
    if (t < npc.wait_until) return;
    double dt_left = dt;
    while (dt_left > 1e-12) {
        const auto& wps = npc.script.waypoints;
        if (npc.segment + 1 >= wps.size()) {
            npc.despawned = true;
            return;
        }
        const double speed = npc_segment_speed(npc);
        if (speed <= 0.0) return;  // parked
        const double seg_end = npc.path.cum[npc.segment + 1];
        const double target = npc.s + speed * dt_left;
        // Stops only bind within the current segment; one past the boundary
        // is picked up on the next loop pass at that segment's speed.
        const double reach = std::min(target, seg_end);
        if (npc.next_stop < npc.stop_arcs.size() && npc.stop_arcs[npc.next_stop] > npc.s &&
            reach >= npc.stop_arcs[npc.next_stop]) {
            npc.s = npc.stop_arcs[npc.next_stop];
            ++npc.next_stop;
            npc.wait_until = t + stop_wait;
            npc.position = npc.path.point_at(npc.s);
            return;
        }
        if (target < seg_end) {
            npc.s = target;
            dt_left = 0.0;
        } else {
            dt_left -= (seg_end - npc.s) / speed;
            npc.s = seg_end;
            ++npc.segment;
        }
        const Vec2 a = npc.path.points[npc.segment];
        if (npc.segment + 1 < npc.path.points.size()) {
            const Vec2 d = npc.path.points[npc.segment + 1] - a;
            const double len = d.norm();
            if (len > 0.0) npc.heading = std::atan2(d.y, d.x);
        }
        npc.position = npc.path.point_at(npc.s);
        const double v = npc_segment_speed(npc);
        npc.velocity = {v * std::cos(npc.heading), v * std::sin(npc.heading)};
    }
}

inline std::vector<ObjectState> world_objects(const World& w) {
    std::vector<ObjectState> objects;
    objects.reserve(w.npcs.size());
    for (const auto& npc : w.npcs) {
        if (!npc.active || npc.despawned) continue;
        objects.push_back({npc.script.id, npc.position, npc.velocity, npc.heading,
                           npc.script.bounding_box});
    }
    return objects;
}

/// Euler step of the ego bicycle model plus scripted NPC advancement.
inline void step_world(World& w, const ControlCommand& cmd, const Scenario& sc,
                       const SimParams& sim) {
    const double dt = sc.dt;
    const ControlCommand c = cmd.clamped();
    const double a_cmd = c.throttle * sim.a_max - c.brake * sim.a_brake;
    const double steer_angle = c.steer * sim.max_steer;

    EgoState& ego = w.ego;
    ego.position = ego.position + dt * ego.speed * Vec2{std::cos(ego.heading), std::sin(ego.heading)};
    ego.heading = wrap_angle(ego.heading + dt * ego.speed * std::tan(steer_angle) / ego.wheelbase);
    w.ego_distance += ego.speed * dt;
    const double v_next = std::max(0.0, ego.speed + a_cmd * dt);
    ego.acceleration = (v_next - ego.speed) / dt;
    ego.speed = v_next;

    for (auto& npc : w.npcs) advance_npc(npc, w.t, dt, sim.stop_wait);
    w.t += dt;
}

/// One event per continuous ego-NPC contact episode, emitted on its first
/// overlapping tick.
inline std::vector<CollisionEvent> detect_collisions(World& w) {
    std::vector<CollisionEvent> events;
    const OrientedBox ego_box{w.ego.position, w.ego.heading, w.ego.bounding_box};
    for (auto& npc : w.npcs) {
        if (!npc.active || npc.despawned) {
            npc.in_contact = false;
            continue;
        }
        const bool hit = boxes_overlap(ego_box, {npc.position, npc.heading, npc.script.bounding_box});
        if (hit && !npc.in_contact) events.push_back({w.t, npc.script.id, npc.position});
        npc.in_contact = hit;
    }
    return events;
}

// ---------------------------------------------------------------------------
// Baseline controller: pure pursuit + proportional speed control, stop
// triggers on the route, and a deliberately short lead-reaction headway.

struct BaselineState {
    std::vector<bool> trigger_done;
    double wait_until{-1.0};
    bool waiting{false};
    bool route_complete{false};
};

struct BaselineCommand {
    ControlCommand command;
    bool route_complete{false};
};

inline BaselineCommand baseline_controller(const World& w, const Scenario& sc,
                                           const Polyline& route, const SimParams& sim,
                                           BaselineState& state) {
    if (state.trigger_done.empty() && !sc.stop_triggers.empty())
        state.trigger_done.assign(sc.stop_triggers.size(), false);

    const EgoState& ego = w.ego;
    const double s_ego = route.project(ego.position);

    if (route.length() - s_ego <= sim.arrive_radius ||
        (ego.position - route.points.back()).norm() <= sim.arrive_radius) {
        state.route_complete = true;
        return {ControlCommand{}, true};
    }

    // Pure pursuit toward a speed-scaled lookahead point.
    const double ld = std::clamp(sim.lookahead_gain * ego.speed, sim.lookahead_min, sim.lookahead_max);
    const Vec2 target = route.point_at(s_ego + ld);
    const Vec2 rel = rotate(target - ego.position, -ego.heading);
    const double alpha = std::atan2(rel.y, rel.x);
    const double steer_angle = std::atan(2.0 * ego.wheelbase * std::sin(alpha) / ld);
    ControlCommand cmd;
    cmd.steer = std::clamp(steer_angle / sim.max_steer, -1.0, 1.0);

    // Planned stop at the next pending trigger on the route.
    double a_des = sim.kp_speed * (sc.road.v_limit - ego.speed);
    a_des = std::clamp(a_des, -sim.comfort_decel, sim.a_max);
    bool holding = false;
    if (state.waiting) {
        if (w.t < state.wait_until) {
            holding = true;
        } else {
            state.waiting = false;
        }
    }
    if (!holding) {
        std::optional<double> nearest;
        size_t nearest_i = 0;
        for (size_t i = 0; i < sc.stop_triggers.size(); ++i) {
            if (state.trigger_done[i]) continue;
            if (route.distance_to(sc.stop_triggers[i]) > sim.trigger_capture) {
                state.trigger_done[i] = true;  // trigger on another road
                continue;
            }
            const double dist = route.project(sc.stop_triggers[i]) - s_ego;
            if (dist < -sim.stop_radius) {
                state.trigger_done[i] = true;  // already behind
                continue;
            }
            if (!nearest || dist < *nearest) {
                nearest = dist;
                nearest_i = i;
            }
        }
        if (nearest) {
            if (*nearest <= sim.stop_radius && ego.speed <= 0.1) {
                state.trigger_done[nearest_i] = true;
                state.waiting = true;
                state.wait_until = w.t + sim.stop_wait;
                holding = true;
            } else {
                // Track a comfort-decel velocity profile ending 0.5 m short.
                const double v_allowed =
                    std::sqrt(2.0 * sim.comfort_decel * std::max(*nearest - 0.5, 0.0));
                if (v_allowed < sc.road.v_limit)
                    a_des = std::min(a_des, (v_allowed - ego.speed) / sim.stop_response);
            }
        }
    }
    if (holding) {
        return {ControlCommand{0.0, 0.6, cmd.steer}, false};
    }

    // Short-headway lead reaction: full brake, deliberately late. Gap is
    // bumper-to-bumper along the ego axis.
    for (const auto& npc : w.npcs) {
        if (!npc.active || npc.despawned) continue;
        const Vec2 d = rotate(npc.position - ego.position, -ego.heading);
        const double gap =
            d.x - ego.bounding_box.half_length - npc.script.bounding_box.half_length;
        if (d.x > 0.0 && gap <= sim.headway && std::abs(d.y) <= sc.road.lane_width / 2.0) {
            return {ControlCommand{0.0, 1.0, cmd.steer}, false};
        }
    }

    if (a_des >= 0.0) {
        cmd.throttle = std::clamp(a_des / sim.a_max, 0.0, 1.0);
    } else {
        cmd.brake = std::clamp(-a_des / sim.a_brake, 0.0, 1.0);
    }
    return {cmd, false};
}

// ---------------------------------------------------------------------------
// Closed-loop execution

enum class Outcome { Completed, Timeout, Collided };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Completed: return "completed";
        case Outcome::Timeout: return "timeout";
        case Outcome::Collided: return "collided";
    }
    return "?";
}

struct TickTrace {
    double t{0.0};
    Vec2 position;
    double heading{0.0};
    double speed{0.0};
    double accel{0.0};
    std::array<double, kSectorCount> R{};
    double cri_final{0.0};
    double cri_final_raw{0.0};
    int dominant_sector{0};
    double theta_star{0.0};
    double r_star{0.0};
    DrivingMode mode{DrivingMode::Aggressive};
    ControlCommand command;
    CycleTimings timings;
    double baseline_us{0.0};
    double cycle_us{0.0};
    bool failsafe{false};
    std::vector<CollisionEvent> collisions;
};

struct RunResult {
    std::string scenario_name;
    Outcome outcome{Outcome::Timeout};
    bool cri_enabled{false};
    int collision_count{0};
    double distance_m{0.0};
    double route_length_m{0.0};
    double duration_s{0.0};
    std::vector<TickTrace> trace;

    double completion() const {
        if (outcome == Outcome::Completed) return 1.0;
        if (route_length_m <= 0.0) return 0.0;
        return std::min(1.0, distance_m / route_length_m);
    }
};

inline void validate(const Scenario& sc) {
    if (!(sc.dt > 0.0)) throw std::invalid_argument("scenario dt must be > 0");
    if (sc.route.size() < 2) throw std::invalid_argument("scenario route needs >= 2 waypoints");
    if (!(sc.duration_limit > 0.0)) throw std::invalid_argument("scenario duration_limit must be > 0");
    validate(sc.road);
    if (!sc.ego_box.valid()) throw std::invalid_argument("scenario ego bounding box invalid");
    for (const auto& npc : sc.npcs) {
        if (npc.waypoints.size() < 2)
            throw std::invalid_argument("npc waypoints need >= 2 points: " + npc.id);
        for (const auto& wp : npc.waypoints)
            if (wp.speed < 0.0) throw std::invalid_argument("npc segment speed must be >= 0: " + npc.id);
        if (!npc.bounding_box.valid())
            throw std::invalid_argument("npc bounding box invalid: " + npc.id);
    }
}

inline RunResult run_scenario(const Scenario& sc, bool cri_enabled, const CriParams& cri_params,
                              const SimParams& sim) {
    using clock = std::chrono::steady_clock;
    validate(sc);

    World world = init_world(sc, sim);
    const Polyline route(sc.route);
    BaselineState baseline_state;
    ControllerState controller_state;
    controller_state.params = cri_params.controller;

    RunResult result;
    result.scenario_name = sc.name;
    result.cri_enabled = cri_enabled;
    result.route_length_m = route.length();

    const long max_ticks = static_cast<long>(std::ceil(sc.duration_limit / sc.dt));
    for (long tick = 0;; ++tick) {
        if (tick >= max_ticks) {
            result.outcome = Outcome::Timeout;
            break;
        }
        for (auto& npc : world.npcs)
            if (!npc.active && world.t >= npc.script.spawn_time) npc.active = true;

        const auto t_base = clock::now();
        const BaselineCommand base = baseline_controller(world, sc, route, sim, baseline_state);
        const double baseline_us =
            std::chrono::duration<double, std::micro>(clock::now() - t_base).count();
        if (base.route_complete) {
            result.outcome = Outcome::Completed;
            break;
        }

        TickTrace rec;
        rec.t = world.t;
        rec.baseline_us = baseline_us;
        ControlCommand cmd = base.command;
        if (cri_enabled) {
            const CycleResult cycle = decision_cycle(world.ego, world_objects(world), sc.road,
                                                     base.command, cri_params, controller_state);
            cmd = cycle.command;
            rec.R = cycle.field.R;
            rec.cri_final = cycle.field.cri_final;
            rec.cri_final_raw = cycle.field.cri_final_raw;
            rec.dominant_sector = cycle.field.dominant_sector;
            rec.theta_star = cycle.field.theta_star;
            rec.r_star = cycle.field.r_star;
            rec.mode = cycle.diagnostics.mode;
            rec.timings = cycle.diagnostics.timings;
            rec.failsafe = cycle.diagnostics.failsafe;
        }
        rec.position = world.ego.position;
        rec.heading = world.ego.heading;
        rec.speed = world.ego.speed;
        rec.command = cmd;

        step_world(world, cmd, sc, sim);
        rec.accel = world.ego.acceleration;
        rec.cycle_us = baseline_us + rec.timings.total_us();
        rec.collisions = detect_collisions(world);
        result.collision_count += static_cast<int>(rec.collisions.size());
        result.trace.push_back(std::move(rec));
        if (sim.stop_on_collision && !result.trace.back().collisions.empty()) {
            result.outcome = Outcome::Collided;
            break;
        }
    }
    result.distance_m = world.ego_distance;
    result.duration_s = world.t;
    return result;
}

}  // namespace cri
