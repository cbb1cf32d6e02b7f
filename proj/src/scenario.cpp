#include "lfcov/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lfcov {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& prefix) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown key '" + prefix + item.key() + "'");
        }
    }
}

Vec2 parse_vec2(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(key + ": must be an array of two numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

double require_number(const json& obj, const std::string& key, const std::string& prefix) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + prefix + key + "'");
    if (!obj.at(key).is_number()) throw ConfigError(prefix + key + ": must be a number");
    return obj.at(key).get<double>();
}

Obstacle parse_obstacle(const json& j, const std::string& prefix) {
    if (!j.is_object() || !j.contains("type")) {
        throw ConfigError(prefix + ": must be an object with a 'type' key");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "circle") {
        reject_unknown_keys(j, {"type", "center", "radius"}, prefix + ".");
        if (!j.contains("center")) throw ConfigError("missing key '" + prefix + ".center'");
        return CircleObstacle{parse_vec2(j.at("center"), prefix + ".center"),
                              require_number(j, "radius", prefix + ".")};
    }
    if (type == "polygon") {
        reject_unknown_keys(j, {"type", "vertices"}, prefix + ".");
        if (!j.contains("vertices")) throw ConfigError("missing key '" + prefix + ".vertices'");
        PolygonObstacle poly;
        int k = 0;
        for (const auto& v : j.at("vertices")) {
            poly.vertices.push_back(
                parse_vec2(v, prefix + ".vertices[" + std::to_string(k++) + "]"));
        }
        return poly;
    }
    throw ConfigError(prefix + ".type: must be 'circle' or 'polygon'");
}

CoverageLaw parse_law(const std::string& name) {
    if (name == "lloyd") return CoverageLaw::lloyd;
    if (name == "exact") return CoverageLaw::exact;
    if (name == "decentralized") return CoverageLaw::decentralized;
    throw ConfigError("coverage.law: must be 'lloyd', 'exact' or 'decentralized'");
}

std::string law_name(CoverageLaw law) {
    switch (law) {
        case CoverageLaw::lloyd: return "lloyd";
        case CoverageLaw::decentralized: return "decentralized";
        default: return "exact";
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Scenario parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("scenario: top level must be an object");
    reject_unknown_keys(root,
                        {"schema_version", "msd", "gains", "coverage", "follower_count",
                         "obstacles", "start", "goal", "v_ref", "dt", "duration", "seed",
                         "virtual_cell", "log_stride", "planner", "path_file"},
                        "");

    Scenario sc;
    try {
        if (!root.contains("schema_version") || !root.at("schema_version").is_number_integer()) {
            throw ConfigError("schema_version: must be an integer");
        }
        sc.schema_version = root.at("schema_version").get<int>();
        if (sc.schema_version != 1) {
            throw ConfigError("schema_version: unsupported version " +
                              std::to_string(sc.schema_version));
        }

        const json& msd = root.at("msd");
        reject_unknown_keys(msd, {"m", "c", "kappa", "rest_length", "leader_count"}, "msd.");
        sc.msd.m = require_number(msd, "m", "msd.");
        sc.msd.c = require_number(msd, "c", "msd.");
        sc.msd.kappa = require_number(msd, "kappa", "msd.");
        sc.msd.rest_length = require_number(msd, "rest_length", "msd.");
        sc.msd.leader_count = static_cast<int>(require_number(msd, "leader_count", "msd."));

        const json& gains = root.at("gains");
        reject_unknown_keys(
            gains, {"kappa1", "kappa2", "kappa3", "kappa4", "delta_sensing", "sensing_radius"},
            "gains.");
        sc.gains.kappa1 = require_number(gains, "kappa1", "gains.");
        sc.gains.kappa2 = require_number(gains, "kappa2", "gains.");
        sc.gains.kappa3 = require_number(gains, "kappa3", "gains.");
        sc.gains.kappa4 = require_number(gains, "kappa4", "gains.");
        sc.gains.delta_sensing = require_number(gains, "delta_sensing", "gains.");
        sc.gains.sensing_radius = require_number(gains, "sensing_radius", "gains.");

        const json& coverage = root.at("coverage");
        reject_unknown_keys(coverage, {"K", "law"}, "coverage.");
        sc.coverage.K = require_number(coverage, "K", "coverage.");
        sc.coverage.law = parse_law(coverage.at("law").get<std::string>());

        sc.follower_count = static_cast<int>(require_number(root, "follower_count", ""));
        int k = 0;
        for (const auto& obstacle : root.at("obstacles")) {
            sc.obstacles.push_back(
                parse_obstacle(obstacle, "obstacles[" + std::to_string(k++) + "]"));
        }
        sc.start = parse_vec2(root.at("start"), "start");
        sc.goal = parse_vec2(root.at("goal"), "goal");
        sc.v_ref = require_number(root, "v_ref", "");
        sc.dt = require_number(root, "dt", "");
        sc.duration = require_number(root, "duration", "");
        if (!root.at("seed").is_number_unsigned() && !root.at("seed").is_number_integer()) {
            throw ConfigError("seed: must be a non-negative integer");
        }
        sc.seed = root.at("seed").get<std::uint64_t>();

        if (root.contains("virtual_cell")) {
            const json& cell = root.at("virtual_cell");
            reject_unknown_keys(cell, {"width", "height"}, "virtual_cell.");
            sc.virtual_cell_width = require_number(cell, "width", "virtual_cell.");
            sc.virtual_cell_height = require_number(cell, "height", "virtual_cell.");
        }
        if (root.contains("log_stride")) {
            sc.log_stride = static_cast<int>(require_number(root, "log_stride", ""));
        }
        if (root.contains("planner")) {
            const json& planner = root.at("planner");
            reject_unknown_keys(planner,
                                {"k_att", "k_rep", "clearance", "d0", "eta", "goal_tol",
                                 "smoothing_window", "ds", "max_iters", "stall_window"},
                                "planner.");
            PlannerParams& p = sc.planner;
            if (planner.contains("k_att")) p.k_att = require_number(planner, "k_att", "planner.");
            if (planner.contains("k_rep")) p.k_rep = require_number(planner, "k_rep", "planner.");
            if (planner.contains("clearance")) {
                p.clearance = require_number(planner, "clearance", "planner.");
            }
            if (planner.contains("d0")) p.d0 = require_number(planner, "d0", "planner.");
            if (planner.contains("eta")) p.eta = require_number(planner, "eta", "planner.");
            if (planner.contains("goal_tol")) {
                p.goal_tol = require_number(planner, "goal_tol", "planner.");
            }
            if (planner.contains("smoothing_window")) {
                p.smoothing_window =
                    static_cast<int>(require_number(planner, "smoothing_window", "planner."));
            }
            if (planner.contains("ds")) p.ds = require_number(planner, "ds", "planner.");
            if (planner.contains("max_iters")) {
                p.max_iters = static_cast<int>(require_number(planner, "max_iters", "planner."));
            }
            if (planner.contains("stall_window")) {
                p.stall_window =
                    static_cast<int>(require_number(planner, "stall_window", "planner."));
            }
        }
        if (root.contains("path_file")) {
            sc.path_file = root.at("path_file").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }

    const std::string err = sc.validate();
    if (!err.empty()) {
        throw ConfigError(err);
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
    ordered_json root;
    root["schema_version"] = sc.schema_version;
    root["msd"] = {{"m", sc.msd.m},
                   {"c", sc.msd.c},
                   {"kappa", sc.msd.kappa},
                   {"rest_length", sc.msd.rest_length},
                   {"leader_count", sc.msd.leader_count}};
    root["gains"] = {{"kappa1", sc.gains.kappa1},
                     {"kappa2", sc.gains.kappa2},
                     {"kappa3", sc.gains.kappa3},
                     {"kappa4", sc.gains.kappa4},
                     {"delta_sensing", sc.gains.delta_sensing},
                     {"sensing_radius", sc.gains.sensing_radius}};
    root["coverage"] = {{"K", sc.coverage.K}, {"law", law_name(sc.coverage.law)}};
    root["follower_count"] = sc.follower_count;
    root["obstacles"] = ordered_json::array();
    for (const Obstacle& obstacle : sc.obstacles) {
        if (const auto* circle = std::get_if<CircleObstacle>(&obstacle)) {
            root["obstacles"].push_back({{"type", "circle"},
                                         {"center", {circle->center.x, circle->center.y}},
                                         {"radius", circle->radius}});
        } else {
            const auto& poly = std::get<PolygonObstacle>(obstacle);
            ordered_json verts = ordered_json::array();
            for (const Vec2& v : poly.vertices) verts.push_back({v.x, v.y});
            root["obstacles"].push_back({{"type", "polygon"}, {"vertices", verts}});
        }
    }
    root["start"] = {sc.start.x, sc.start.y};
    root["goal"] = {sc.goal.x, sc.goal.y};
    root["v_ref"] = sc.v_ref;
    root["dt"] = sc.dt;
    root["duration"] = sc.duration;
    root["seed"] = sc.seed;
    if (sc.virtual_cell_width > 0.0 || sc.virtual_cell_height > 0.0) {
        root["virtual_cell"] = {{"width", sc.virtual_cell_width},
                                {"height", sc.virtual_cell_height}};
    }
    root["log_stride"] = sc.log_stride;
    root["planner"] = {{"k_att", sc.planner.k_att},
                       {"k_rep", sc.planner.k_rep},
                       {"clearance", sc.planner.clearance},
                       {"d0", sc.planner.d0},
                       {"eta", sc.planner.eta},
                       {"goal_tol", sc.planner.goal_tol},
                       {"smoothing_window", sc.planner.smoothing_window},
                       {"ds", sc.planner.ds},
                       {"max_iters", sc.planner.max_iters},
                       {"stall_window", sc.planner.stall_window}};
    if (sc.path_file) {
        root["path_file"] = *sc.path_file;
    }
    return root.dump(2) + "\n";
}

ReferencePath load_path_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open path file '" + path + "'");
    json root;
    try {
        root = json::parse(in);
        std::vector<Vec2> samples;
        for (const auto& s : root.at("samples")) {
            samples.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
        }
        return make_reference_path(std::move(samples), root.at("v_ref").get<double>());
    } catch (const json::exception& e) {
        throw ConfigError("path file '" + path + "': " + e.what());
    }
}

void save_path_file(const std::string& path, const ReferencePath& ref) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write path file '" + path + "'");
    out << "{\"samples\":[";
    for (size_t i = 0; i < ref.samples.size(); ++i) {
        if (i) out << ",";
        out << "[" << format_double(ref.samples[i].x) << "," << format_double(ref.samples[i].y)
            << "]";
    }
    out << "],\"v_ref\":" << format_double(ref.v_ref) << "}\n";
}

namespace {

void write_points(std::ostream& out, const std::vector<Vec2>& points) {
    out << "[";
    for (size_t i = 0; i < points.size(); ++i) {
        if (i) out << ",";
        out << "[" << format_double(points[i].x) << "," << format_double(points[i].y) << "]";
    }
    out << "]";
}

}  // namespace

void write_run_log_record(std::ostream& out, const StepRecord& r) {
    out << "{\"t\":" << format_double(r.time) << ",\"leaders\":";
    write_points(out, r.leaders);
    out << ",\"followers\":";
    write_points(out, r.followers);
    out << ",\"followers_virtual\":";
    write_points(out, r.followers_virtual);
    out << ",\"e_gamma\":" << format_double(r.e_gamma) << ",\"e_c\":" << format_double(r.e_c)
        << ",\"max_elong\":" << format_double(r.max_elongation) << ",\"min_obs_dist\":";
    if (r.min_obstacle_distance) {
        out << format_double(*r.min_obstacle_distance);
    } else {
        out << "null";
    }
    out << ",\"seam\":" << format_double(r.seam) << ",\"projections\":" << r.projections << "}\n";
}

void write_fault_record(std::ostream& out, const FaultRecord& fault) {
    const json msg = fault.message;  // JSON-escape the text
    out << "{\"t\":" << format_double(fault.time) << ",\"fault\":{\"type\":\"" << fault.type
        << "\",\"message\":" << msg.dump() << "}}\n";
}

RunLog parse_run_log(std::istream& in) {
    RunLog log;
    std::string line;
    double last_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw MalformedLog(std::string("run log: invalid JSON line: ") + e.what());
        }
        try {
            if (j.contains("fault")) {
                log.fault = FaultRecord{j.at("fault").at("type").get<std::string>(),
                                        j.at("fault").at("message").get<std::string>(),
                                        j.at("t").get<double>()};
                continue;
            }
            StepRecord r;
            r.time = j.at("t").get<double>();
            for (const auto& p : j.at("leaders")) r.leaders.push_back({p.at(0), p.at(1)});
            for (const auto& p : j.at("followers")) r.followers.push_back({p.at(0), p.at(1)});
            for (const auto& p : j.at("followers_virtual")) {
                r.followers_virtual.push_back({p.at(0), p.at(1)});
            }
            r.e_gamma = j.at("e_gamma").get<double>();
            r.e_c = j.at("e_c").get<double>();
            r.max_elongation = j.at("max_elong").get<double>();
            if (!j.at("min_obs_dist").is_null()) {
                r.min_obstacle_distance = j.at("min_obs_dist").get<double>();
            }
            r.seam = j.at("seam").get<double>();
            r.projections = j.at("projections").get<int>();
            if (r.time <= last_t) {
                throw MalformedLog("run log: record times are not strictly increasing");
            }
            last_t = r.time;
            log.records.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw MalformedLog(std::string("run log: bad record: ") + e.what());
        }
    }
    if (log.records.empty()) {
        throw MalformedLog("run log: no records");
    }
    return log;
}

RunLog load_run_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedLog("cannot open run log '" + path + "'");
    return parse_run_log(in);
}

std::string serialize_summary(const RunSummary& s) {
    ordered_json root;
    root["steps"] = s.steps;
    if (s.min_obstacle_distance) {
        root["min_obstacle_distance"] = *s.min_obstacle_distance;
    } else {
        root["min_obstacle_distance"] = nullptr;
    }
    root["max_elongation"] = s.max_elongation;
    root["final_e_gamma"] = s.final_e_gamma;
    root["mean_e_c_last_10pct"] = s.mean_e_c_last_10pct;
    root["total_projections"] = s.total_projections;
    root["follower_steps"] = s.follower_steps;
    root["completed"] = s.completed;
    if (s.fault) {
        root["fault"] = {{"type", s.fault->type},
                         {"message", s.fault->message},
                         {"t", s.fault->time}};
    } else {
        root["fault"] = nullptr;
    }
    return root.dump(2) + "\n";
}

void write_metrics_csv(std::ostream& out, const std::vector<StepRecord>& records) {
    out << "t,e_gamma,e_c,max_elong,min_obs_dist\n";
    for (const StepRecord& r : records) {
        out << format_double(r.time) << "," << format_double(r.e_gamma) << ","
            << format_double(r.e_c) << "," << format_double(r.max_elongation) << ",";
        if (r.min_obstacle_distance) out << format_double(*r.min_obstacle_distance);
        out << "\n";
    }
}

}  // namespace lfcov
