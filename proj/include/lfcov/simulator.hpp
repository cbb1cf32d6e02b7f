#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfcov/coverage.hpp"
#include "lfcov/forces.hpp"
#include "lfcov/leader_network.hpp"
#include "lfcov/path_planner.hpp"

namespace lfcov {

// Full experiment description. All quantities in SI units.
struct Scenario {
    int schema_version = 1;
    MsdParams msd;
    ForceGains gains;
    CoverageGains coverage;
    int follower_count = 20;
    std::vector<Obstacle> obstacles;
    Vec2 start{0.0, 0.0};
    Vec2 goal{10.0, 0.0};
    double v_ref = 0.5;
    double dt = 0.005;
    double duration = 18.0;
    std::uint64_t seed = 1;
    double virtual_cell_width = 0.0;   // 0 = rest length
    double virtual_cell_height = 0.0;  // 0 = rest length
    int log_stride = 10;
    PlannerParams planner;
    std::optional<std::string> path_file;  // bypass the planner when set

    double cell_width() const {
        return virtual_cell_width > 0.0 ? virtual_cell_width : msd.rest_length;
    }
    double cell_height() const {
        return virtual_cell_height > 0.0 ? virtual_cell_height : msd.rest_length;
    }
    // First violated constraint as "key: requirement", empty when valid.
    std::string validate() const;
};

struct SimState {
    double time = 0.0;
    LeaderState leaders;
    FollowerState followers;
};

struct StepRecord {
    double time = 0.0;
    std::vector<Vec2> leaders;
    std::vector<Vec2> followers;
    std::vector<Vec2> followers_virtual;
    double e_gamma = 0.0;
    double e_c = 0.0;
    double max_elongation = 0.0;
    std::optional<double> min_obstacle_distance;  // empty when no obstacles
    double seam = 0.0;
    int projections = 0;  // containment projections applied this step
};

struct FaultRecord {
    std::string type;
    std::string message;
    double time = 0.0;
};

struct RunSummary {
    int steps = 0;
    std::optional<double> min_obstacle_distance;
    double max_elongation = 0.0;
    double final_e_gamma = 0.0;
    double mean_e_c_last_10pct = 0.0;
    long total_projections = 0;
    long follower_steps = 0;
    bool completed = false;
    std::optional<FaultRecord> fault;
};

struct RunResult {
    std::vector<StepRecord> records;  // one per step plus the initial state
    RunSummary summary;
    ReferencePath path;
};

class Simulator {
  public:
    Simulator(Scenario scenario, ReferencePath path);

    // Pipeline of one step: query path, external forces, MSD step, rebuild
    // homographies, flatten, coverage control, pull back, advance
    // followers, containment projection, metrics.
    StepRecord step_sim();

    StepRecord compute_metrics() const;

    const SimState& state() const { return state_; }
    const Scenario& scenario() const { return scenario_; }
    const ReferencePath& path() const { return path_; }
    const VirtualDomain& virtual_domain() const { return vd_; }
    long total_projections() const { return total_projections_; }

  private:
    Scenario scenario_;
    ReferencePath path_;
    std::vector<SpringEdge> edges_;
    VirtualDomain vd_;
    DensityField density_ = DensityField::uniform();
    SimState state_;
    std::vector<Homography> homographies_;
    long total_projections_ = 0;
    int lloyd_fallbacks_ = 0;

    friend RunResult run(const Scenario& scenario);
};

// Deterministic initial placement: uniform inside the rest domain with
// minimum pairwise separation 0.1 * rest length.
std::vector<Vec2> initial_followers(const Scenario& scenario, const LeaderState& leaders,
                                    const VirtualDomain& vd);

// Plans (or loads) the path, builds the initial states and executes
// duration/dt steps. Hard faults stop the run and are reported in the
// summary; the records up to the fault are kept.
RunResult run(const Scenario& scenario);

// Scenario used by the end-to-end acceptance run and shipped as
// scenarios/reference.json: a curved corridor with two circular obstacles
// flanking the path.
Scenario reference_scenario();

}  // namespace lfcov
