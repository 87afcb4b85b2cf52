#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "cri/sim.hpp"

namespace cri {

inline constexpr const char* kScenarioSchema = "cri-scenario/1";

class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ScenarioError(where + ": unknown key '" + it.key() + "'");
}

inline Vec2 parse_vec2(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ScenarioError(where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
    using detail::parse_vec2;
    try {
        detail::reject_unknown_keys(j, {"schema", "name", "tags", "map", "route", "ego_start",
                                        "ego", "npcs", "stop_triggers", "duration_limit", "dt"},
                                    "scenario");
        if (!j.contains("schema") || j.at("schema").get<std::string>() != kScenarioSchema)
            throw ScenarioError("scenario.schema: expected \"" + std::string(kScenarioSchema) + "\"");

        Scenario sc;
        sc.name = j.at("name").get<std::string>();
        if (j.contains("tags"))
            for (const auto& t : j.at("tags")) sc.tags.push_back(t.get<std::string>());

        const auto& map = j.at("map");
        detail::reject_unknown_keys(map, {"lanes", "lane_width", "speed_limit"}, "scenario.map");
        sc.road.lane_count = map.at("lanes").get<int>();
        sc.road.lane_width = map.at("lane_width").get<double>();
        sc.road.v_limit = map.at("speed_limit").get<double>();

        for (size_t i = 0; i < j.at("route").size(); ++i)
            sc.route.push_back(parse_vec2(j.at("route")[i], "scenario.route[" + std::to_string(i) + "]"));

        const auto& es = j.at("ego_start");
        detail::reject_unknown_keys(es, {"position", "heading", "speed"}, "scenario.ego_start");
        sc.ego_start.position = parse_vec2(es.at("position"), "scenario.ego_start.position");
        sc.ego_start.heading = es.at("heading").get<double>();
        sc.ego_start.speed = es.at("speed").get<double>();

        if (j.contains("ego")) {
            const auto& e = j.at("ego");
            detail::reject_unknown_keys(e, {"half_length", "half_width", "wheelbase"}, "scenario.ego");
            if (e.contains("half_length")) sc.ego_box.half_length = e.at("half_length").get<double>();
            if (e.contains("half_width")) sc.ego_box.half_width = e.at("half_width").get<double>();
            if (e.contains("wheelbase")) sc.ego_wheelbase = e.at("wheelbase").get<double>();
        }

        if (j.contains("stop_triggers"))
            for (size_t i = 0; i < j.at("stop_triggers").size(); ++i)
                sc.stop_triggers.push_back(parse_vec2(j.at("stop_triggers")[i],
                                                      "scenario.stop_triggers[" + std::to_string(i) + "]"));

        if (j.contains("npcs")) {
            for (size_t i = 0; i < j.at("npcs").size(); ++i) {
                const auto& n = j.at("npcs")[i];
                const std::string where = "scenario.npcs[" + std::to_string(i) + "]";
                detail::reject_unknown_keys(
                    n, {"id", "spawn", "waypoints", "violates", "half_length", "half_width"}, where);
                NpcScript npc;
                npc.id = n.at("id").get<std::string>();
                if (n.contains("spawn")) npc.spawn_time = n.at("spawn").get<double>();
                if (n.contains("violates")) npc.violates = n.at("violates").get<bool>();
                if (n.contains("half_length")) npc.bounding_box.half_length = n.at("half_length").get<double>();
                if (n.contains("half_width")) npc.bounding_box.half_width = n.at("half_width").get<double>();
                for (size_t k = 0; k < n.at("waypoints").size(); ++k) {
                    const auto& wp = n.at("waypoints")[k];
                    const std::string wwhere = where + ".waypoints[" + std::to_string(k) + "]";
                    detail::reject_unknown_keys(wp, {"position", "speed"}, wwhere);
                    npc.waypoints.push_back(
                        {parse_vec2(wp.at("position"), wwhere + ".position"), wp.at("speed").get<double>()});
                }
                sc.npcs.push_back(std::move(npc));
            }
        }

        sc.duration_limit = j.at("duration_limit").get<double>();
        sc.dt = j.at("dt").get<double>();
        validate(sc);
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("scenario: ") + e.what());
    }
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
    nlohmann::ordered_json j;
    j["schema"] = kScenarioSchema;
    j["name"] = sc.name;
    j["tags"] = sc.tags;
    j["map"] = {{"lanes", sc.road.lane_count},
                {"lane_width", sc.road.lane_width},
                {"speed_limit", sc.road.v_limit}};
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : sc.route) arr.push_back({p.x, p.y});
    j["route"] = arr;
    j["ego_start"] = {{"position", {sc.ego_start.position.x, sc.ego_start.position.y}},
                      {"heading", sc.ego_start.heading},
                      {"speed", sc.ego_start.speed}};
    j["ego"] = {{"half_length", sc.ego_box.half_length},
                {"half_width", sc.ego_box.half_width},
                {"wheelbase", sc.ego_wheelbase}};
    auto trig = nlohmann::ordered_json::array();
    for (const auto& p : sc.stop_triggers) trig.push_back({p.x, p.y});
    j["stop_triggers"] = trig;
    auto npcs = nlohmann::ordered_json::array();
    for (const auto& npc : sc.npcs) {
        nlohmann::ordered_json n;
        n["id"] = npc.id;
        n["spawn"] = npc.spawn_time;
        n["violates"] = npc.violates;
        n["half_length"] = npc.bounding_box.half_length;
        n["half_width"] = npc.bounding_box.half_width;
        auto wps = nlohmann::ordered_json::array();
        for (const auto& wp : npc.waypoints)
            wps.push_back({{"position", {wp.position.x, wp.position.y}}, {"speed", wp.speed}});
        n["waypoints"] = wps;
        npcs.push_back(n);
    }
    j["npcs"] = npcs;
    j["duration_limit"] = sc.duration_limit;
    j["dt"] = sc.dt;
    return j;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(path + ": " + e.what());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ScenarioError("cannot write scenario file: " + path);
    out << scenario_to_json(sc).dump(2) << "\n";
}

}  // namespace cri
