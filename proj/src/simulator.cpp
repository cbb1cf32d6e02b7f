#include "lfcov/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lfcov/scenario.hpp"

namespace lfcov {

namespace {

// Uniform double in [0,1) from the top 53 bits, identical on every
// platform (distribution classes are not portable across stdlibs).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double min_leader_obstacle_distance(const LeaderState& leaders,
                                    const std::vector<Obstacle>& obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& x : leaders.positions) {
        for (const Obstacle& obstacle : obstacles) {
            best = std::min(best, nearest_boundary_point(obstacle, x).second);
        }
    }
    return best;
}

bool inside_any_mesh(Vec2 p, const LeaderState& leaders, const VirtualDomain& vd) {
    for (int h = 0; h < vd.mesh_count; ++h) {
        if (point_in_quad(mesh_quad(leaders, h), p)) return true;
    }
    return false;
}

// Inside some mesh with at least `margin` to every edge of it.
bool well_inside_any_mesh(Vec2 p, const LeaderState& leaders, const VirtualDomain& vd,
                          double margin) {
    for (int h = 0; h < vd.mesh_count; ++h) {
        const ConvexQuad quad = mesh_quad(leaders, h);
        bool ok = true;
        for (int e = 0; e < 4 && ok; ++e) {
            const Vec2 edge = quad.v[(e + 1) % 4] - quad.v[e];
            ok = edge.cross(p - quad.v[e]) >= margin * edge.norm();
        }
        if (ok) return true;
    }
    return false;
}

// Nearest point 1e-6 inside the nearest mesh.
Vec2 project_into_domain(Vec2 p, const LeaderState& leaders, const VirtualDomain& vd) {
    double best_dist = std::numeric_limits<double>::infinity();
    Vec2 best_point = p;
    int best_mesh = 0;
    for (int h = 0; h < vd.mesh_count; ++h) {
        const ConvexQuad quad = mesh_quad(leaders, h);
        for (int e = 0; e < 4; ++e) {
            const Vec2 a = quad.v[e];
            const Vec2 b = quad.v[(e + 1) % 4];
            const Vec2 ab = b - a;
            const double t =
                std::clamp((p - a).dot(ab) / std::max(ab.squared_norm(), 1e-30), 0.0, 1.0);
            const Vec2 q = a + ab * t;
            const double d = (p - q).norm();
            if (d < best_dist) {
                best_dist = d;
                best_point = q;
                best_mesh = h;
            }
        }
    }
    const ConvexQuad quad = mesh_quad(leaders, best_mesh);
    const Vec2 center = (quad.v[0] + quad.v[1] + quad.v[2] + quad.v[3]) * 0.25;
    return best_point + (center - best_point).normalized() * 1e-6;
}

// Containment projections can drop several escapees onto the same quad
// corner; coincident or near-coincident followers break the Voronoi
// preconditions downstream. Nudge later-indexed offenders toward their
// mesh interior until every pair clears the floor (micrometer scale, far
// below any physical motion).
void enforce_min_separation(std::vector<Vec2>& positions, const LeaderState& leaders,
                            const VirtualDomain& vd, double min_dist) {
    const int n = static_cast<int>(positions.size());
    for (int sweep = 0; sweep < 8; ++sweep) {
        bool moved = false;
        for (int i = 1; i < n; ++i) {
            for (int attempt = 1; attempt <= 64; ++attempt) {
                bool clear = true;
                for (int j = 0; j < i; ++j) {
                    if ((positions[i] - positions[j]).norm() < min_dist) {
                        clear = false;
                        break;
                    }
                }
                if (clear) break;
                int h = 0;
                for (int m = 0; m < vd.mesh_count; ++m) {
                    if (point_in_quad(mesh_quad(leaders, m), positions[i])) {
                        h = m;
                        break;
                    }
                }
                const ConvexQuad quad = mesh_quad(leaders, h);
                const Vec2 center = (quad.v[0] + quad.v[1] + quad.v[2] + quad.v[3]) * 0.25;
                positions[i] += (center - positions[i]).normalized() * (attempt * 2.0 * min_dist);
                moved = true;
            }
        }
        if (!moved) return;
    }
}

}  // namespace

std::string Scenario::validate() const {
    if (!(msd.m > 0.0)) return "msd.m: must be > 0";
    if (!(msd.c > 0.0)) return "msd.c: must be > 0";
    if (!(msd.kappa > 0.0)) return "msd.kappa: must be > 0";
    if (!(msd.rest_length > 0.0)) return "msd.rest_length: must be > 0";
    if (msd.leader_count < 4 || msd.leader_count % 2 != 0) {
        return "msd.leader_count: must be an even integer >= 4";
    }
    if (!(gains.kappa1 > 0.0)) return "gains.kappa1: must be > 0";
    if (!(gains.kappa2 > 0.0)) return "gains.kappa2: must be > 0";
    if (!(gains.kappa3 > 0.0)) return "gains.kappa3: must be > 0";
    if (!(gains.kappa4 > 0.0)) return "gains.kappa4: must be > 0";
    if (!(gains.delta_sensing > 0.0)) return "gains.delta_sensing: must be > 0";
    if (!(gains.sensing_radius > gains.delta_sensing)) {
        return "gains.sensing_radius: must exceed gains.delta_sensing";
    }
    if (!(coverage.K > 0.0)) return "coverage.K: must be > 0";
    if (follower_count < 1) return "follower_count: must be >= 1";
    for (size_t i = 0; i < obstacles.size(); ++i) {
        if (const auto* circle = std::get_if<CircleObstacle>(&obstacles[i])) {
            if (!(circle->radius > 0.0)) {
                return "obstacles[" + std::to_string(i) + "].radius: must be > 0";
            }
        } else {
            const auto& poly = std::get<PolygonObstacle>(obstacles[i]).vertices;
            if (poly.size() < 3) {
                return "obstacles[" + std::to_string(i) + "].vertices: need >= 3 vertices";
            }
        }
    }
    if (!(v_ref > 0.0)) return "v_ref: must be > 0";
    if (!(dt > 0.0 && dt <= 0.05)) return "dt: must satisfy 0 < dt <= 0.05";
    if (!(duration > 0.0)) return "duration: must be > 0";
    if (!(virtual_cell_width >= 0.0)) return "virtual_cell.width: must be >= 0";
    if (!(virtual_cell_height >= 0.0)) return "virtual_cell.height: must be >= 0";
    if (log_stride < 1) return "log_stride: must be >= 1";
    if (!(planner.clearance > 0.0)) return "planner.clearance: must be > 0";
    if (!(planner.eta > 0.0)) return "planner.eta: must be > 0";
    if (!(planner.ds > 0.0)) return "planner.ds: must be > 0";
    if (!(planner.goal_tol > 0.0)) return "planner.goal_tol: must be > 0";
    return "";
}

std::vector<Vec2> initial_followers(const Scenario& scenario, const LeaderState& leaders,
                                    const VirtualDomain& vd) {
    std::mt19937_64 rng(scenario.seed);
    Vec2 lo = leaders.positions[0];
    Vec2 hi = leaders.positions[0];
    for (const Vec2& p : leaders.positions) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double min_sep = 0.1 * scenario.msd.rest_length;
    std::vector<Vec2> placed;
    placed.reserve(scenario.follower_count);
    int attempts = 0;
    while (static_cast<int>(placed.size()) < scenario.follower_count) {
        if (++attempts > 1000000) {
            throw ConfigError("follower_count: cannot place " +
                              std::to_string(scenario.follower_count) +
                              " followers with separation " + std::to_string(min_sep));
        }
        const Vec2 candidate{lo.x + uniform01(rng) * (hi.x - lo.x),
                             lo.y + uniform01(rng) * (hi.y - lo.y)};
        if (!well_inside_any_mesh(candidate, leaders, vd, 0.01 * scenario.msd.rest_length)) {
            continue;
        }
        bool ok = true;
        for (const Vec2& p : placed) {
            if ((candidate - p).norm() < min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) placed.push_back(candidate);
    }
    return placed;
}

Simulator::Simulator(Scenario scenario, ReferencePath path)
    : scenario_(std::move(scenario)), path_(std::move(path)) {
    edges_ = build_grid_topology(scenario_.msd);
    vd_ = make_virtual_domain(scenario_.msd.leader_count, scenario_.cell_width(),
                              scenario_.cell_height());
    const PathSample start = query(path_, 0.0);
    state_.leaders = make_rest_grid(scenario_.msd, start.gamma, start.gamma_dot);
    homographies_ = mesh_homographies(state_.leaders, vd_);
    state_.followers = assign_and_flatten(initial_followers(scenario_, state_.leaders, vd_),
                                          state_.leaders, homographies_, vd_);
    state_.time = 0.0;
}

StepRecord Simulator::step_sim() {
    const double dt = scenario_.dt;
    const PathSample ps = query(path_, state_.time);
    const std::vector<Vec2> external =
        total_external(state_.leaders, scenario_.obstacles, ps.gamma, ps.gamma_dot,
                       scenario_.gains);
    state_.leaders = step(state_.leaders, external, edges_, scenario_.msd, dt);
    homographies_ = mesh_homographies(state_.leaders, vd_);

    int projections = 0;
    std::vector<Vec2> positions = state_.followers.positions;
    for (int i = 0; i < static_cast<int>(positions.size()); ++i) {
        // Leaders moved under the followers; rescue anyone left outside.
        if (!inside_any_mesh(positions[i], state_.leaders, vd_)) {
            positions[i] = project_into_domain(positions[i], state_.leaders, vd_);
            ++projections;
        }
    }
    if (projections > 0) {
        enforce_min_separation(positions, state_.leaders, vd_, 1e-5);
    }
    state_.followers = assign_and_flatten(positions, state_.leaders, homographies_, vd_);

    std::vector<Vec2> virtual_velocity;
    try {
        virtual_velocity = virtual_control(state_.followers.virtual_positions, vd_, density_,
                                           scenario_.coverage);
    } catch (const TopologyBoundary&) {
        // Tessellation flip under the FD probe: run plain Lloyd this step.
        CoverageGains lloyd = scenario_.coverage;
        lloyd.law = CoverageLaw::lloyd;
        virtual_velocity =
            virtual_control(state_.followers.virtual_positions, vd_, density_, lloyd);
        ++lloyd_fallbacks_;
    }

    // Advanced homographies shared by all followers of a mesh.
    constexpr double kDelta = 1e-6;
    LeaderState advanced = state_.leaders;
    for (int k = 0; k < advanced.count(); ++k) {
        advanced.positions[k] += state_.leaders.velocities[k] * kDelta;
    }
    const std::vector<Homography> homs_adv = mesh_homographies(advanced, vd_);

    for (int i = 0; i < state_.followers.count(); ++i) {
        const Vec2 p = state_.followers.positions[i];
        const int h = state_.followers.mesh_index[i];
        const Vec2 dTdt = (apply(homs_adv[h], p) - apply(homographies_[h], p)) / kDelta;
        const Vec2 pdot = pull_back_velocity(p, homographies_[h], dTdt, virtual_velocity[i]);
        positions[i] = p + pdot * dt;
        if (!inside_any_mesh(positions[i], state_.leaders, vd_)) {
            positions[i] = project_into_domain(positions[i], state_.leaders, vd_);
            ++projections;
        }
    }
    enforce_min_separation(positions, state_.leaders, vd_, 1e-5);
    state_.followers = assign_and_flatten(positions, state_.leaders, homographies_, vd_);
    state_.time = state_.leaders.time;
    total_projections_ += projections;

    StepRecord record = compute_metrics();
    record.projections = projections;
    return record;
}

StepRecord Simulator::compute_metrics() const {
    StepRecord record;
    record.time = state_.time;
    record.leaders = state_.leaders.positions;
    record.followers = state_.followers.positions;
    record.followers_virtual = state_.followers.virtual_positions;
    record.e_gamma = tracking_error(path_, state_.leaders.head_midpoint());
    record.e_c = aggregate_error(state_.followers.virtual_positions, vd_, density_);
    record.max_elongation = elongation_report(state_.leaders, edges_, scenario_.msd).max_ratio;
    if (!scenario_.obstacles.empty()) {
        record.min_obstacle_distance =
            min_leader_obstacle_distance(state_.leaders, scenario_.obstacles);
    }
    record.seam = seam_mismatch(state_.leaders, vd_);
    return record;
}

namespace {

std::string fault_type_name(const Error& e) {
    if (dynamic_cast<const SafetyBreached*>(&e)) return "SafetyBreached";
    if (dynamic_cast<const InsideObstacle*>(&e)) return "InsideObstacle";
    if (dynamic_cast<const DegenerateMesh*>(&e)) return "DegenerateMesh";
    if (dynamic_cast<const FollowerEscapedDomain*>(&e)) return "FollowerEscapedDomain";
    if (dynamic_cast<const NonFiniteForce*>(&e)) return "NonFiniteForce";
    if (dynamic_cast<const CoincidentLeaders*>(&e)) return "CoincidentLeaders";
    if (dynamic_cast<const SingularJacobian*>(&e)) return "SingularJacobian";
    if (dynamic_cast<const CoincidentGenerators*>(&e)) return "CoincidentGenerators";
    return "Error";
}

}  // namespace

RunResult run(const Scenario& scenario) {
    const std::string err = scenario.validate();
    if (!err.empty()) {
        throw ConfigError(err);
    }
    RunResult result;
    result.path = scenario.path_file
                      ? load_path_file(*scenario.path_file)
                      : plan_potential_field(scenario.start, scenario.goal, scenario.obstacles,
                                             scenario.planner, scenario.v_ref);

    Simulator sim(scenario, result.path);
    const int steps = static_cast<int>(std::llround(scenario.duration / scenario.dt));
    result.records.push_back(sim.compute_metrics());
    result.summary.completed = true;
    for (int k = 0; k < steps; ++k) {
        try {
            result.records.push_back(sim.step_sim());
        } catch (const Error& e) {
            result.summary.fault = FaultRecord{fault_type_name(e), e.what(), sim.state().time};
            result.summary.completed = false;
            break;
        }
    }

    RunSummary& s = result.summary;
    s.steps = static_cast<int>(result.records.size()) - 1;
    for (const StepRecord& r : result.records) {
        s.max_elongation = std::max(s.max_elongation, r.max_elongation);
        if (r.min_obstacle_distance) {
            s.min_obstacle_distance = s.min_obstacle_distance
                                          ? std::min(*s.min_obstacle_distance,
                                                     *r.min_obstacle_distance)
                                          : *r.min_obstacle_distance;
        }
        s.total_projections += r.projections;
    }
    s.final_e_gamma = result.records.back().e_gamma;
    const size_t tail = std::max<size_t>(1, result.records.size() / 10);
    double acc = 0.0;
    for (size_t i = result.records.size() - tail; i < result.records.size(); ++i) {
        acc += result.records[i].e_c;
    }
    s.mean_e_c_last_10pct = acc / static_cast<double>(tail);
    s.follower_steps = static_cast<long>(s.steps) * scenario.follower_count;
    return result;
}

Scenario reference_scenario() {
    Scenario sc;
    sc.msd = MsdParams{1.0, 4.0, 26.0, 1.0, 10};
    sc.gains = ForceGains{0.15, 2.5, 1.2, 1.0, 0.15, 1.0};
    sc.coverage = CoverageGains{1.0, CoverageLaw::exact};
    sc.follower_count = 20;
    sc.obstacles = {CircleObstacle{{2.5, 1.2}, 0.5}, CircleObstacle{{5.0, -1.2}, 0.5}};
    sc.start = {0.0, 0.0};
    sc.goal = {11.5, 0.0};
    sc.v_ref = 0.85;
    sc.dt = 0.005;
    sc.duration = 18.0;
    sc.seed = 1;
    sc.log_stride = 10;
    sc.planner.clearance = 0.7;
    sc.planner.k_rep = 0.5;
    sc.planner.d0 = 0.8;
    return sc;
}

}  // namespace lfcov
