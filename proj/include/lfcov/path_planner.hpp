#pragma once

#include <vector>

#include "lfcov/forces.hpp"
#include "lfcov/geometry.hpp"

namespace lfcov {

// Arc-length parameterized curve traversed at constant speed v_ref.
struct ReferencePath {
    std::vector<Vec2> samples;
    std::vector<double> cumulative_arclength;  // same size as samples, starts at 0
    double v_ref = 0.5;

    double total_length() const { return cumulative_arclength.back(); }
};

struct PathSample {
    Vec2 gamma;
    Vec2 gamma_dot;
};

struct PlannerParams {
    double k_att = 1.0;
    double k_rep = 1.0;
    double clearance = 0.8;     // required distance from obstacles [m]
    double d0 = 0.0;            // repulsion range beyond clearance; 0 = 3*clearance
    double eta = 0.01;          // descent step length [m]
    double goal_tol = 0.05;     // success radius [m]
    int smoothing_window = 15;  // moving-average window, samples
    double ds = 0.05;           // resample spacing [m]
    int max_iters = 200000;
    int stall_window = 500;  // steps without progress before LocalMinimum

    double repulsion_range() const { return d0 > 0.0 ? d0 : 3.0 * clearance; }
};

// Validates the sample list (>= 2 samples, consecutive distinct) and builds
// the cumulative arc length table. Throws DegeneratePath.
ReferencePath make_reference_path(std::vector<Vec2> samples, double v_ref);

// Gradient descent on the attractive/repulsive potential, followed by
// moving-average smoothing and uniform arc-length resampling. The repulsive
// barrier acts on the distance beyond the required clearance, so samples
// keep at least that clearance. Throws LocalMinimum, MaxIterations,
// DegeneratePath, ConfigError.
ReferencePath plan_potential_field(Vec2 start, Vec2 goal, const std::vector<Obstacle>& obstacles,
                                   const PlannerParams& params, double v_ref);

// Gamma(t) by arc-length interpolation at s = min(v_ref t, L); gamma_dot is
// v_ref times the unit tangent before the goal and zero after.
PathSample query(const ReferencePath& path, double t);

// Distance from the head midpoint to the path polyline (E_Gamma).
double tracking_error(const ReferencePath& path, Vec2 c_x);

}  // namespace lfcov
