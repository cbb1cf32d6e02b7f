#pragma once

#include <cmath>
#include <vector>

#include "lfcov/geometry.hpp"

namespace lfcov {

// Maximum spring elongation/compression ratio that keeps every mesh of the
// 2x(M/2) grid convex, (2-sqrt 2)/(2+sqrt 2) ~ 17.2%.
inline const double kElongationLimit = (2.0 - std::sqrt(2.0)) / (2.0 + std::sqrt(2.0));

struct MsdParams {
    double m = 1.0;            // mass [kg]
    double c = 1.0;            // damping constant [N s/m]
    double kappa = 10.0;       // stiffness [N/m]
    double rest_length = 1.0;  // grid spacing l0 [m]
    int leader_count = 10;     // M, even, >= 4

    bool valid() const {
        return m > 0.0 && c > 0.0 && kappa > 0.0 && rest_length > 0.0 &&
               leader_count >= 4 && leader_count % 2 == 0;
    }
    int mesh_count() const { return leader_count / 2 - 1; }
};

struct SpringEdge {
    int k = 0;
    int l = 0;
    double rest = 1.0;
};

// Leaders are labeled in rung pairs: column c holds leaders 2c (one rail)
// and 2c+1 (other rail), so mesh h has vertices 2h, 2h+1, 2h+3, 2h+2 in
// counterclockwise order. Column 0 is the head.
struct LeaderState {
    std::vector<Vec2> positions;
    std::vector<Vec2> velocities;
    double time = 0.0;

    int count() const { return static_cast<int>(positions.size()); }
    // Head midpoint c_x = (x1 + x2)/2.
    Vec2 head_midpoint() const { return (positions[0] + positions[1]) * 0.5; }
};

// 2x(M/2) grid: rails and rungs at rest l0, both diagonals of every mesh at
// rest sqrt(2) l0. Edge count M/2 + 4 (M/2 - 1).
std::vector<SpringEdge> build_grid_topology(const MsdParams& params);

// Rest grid with the head rung centered at head_mid and orthogonal to
// heading; the rest of the grid trails opposite to heading.
LeaderState make_rest_grid(const MsdParams& params, Vec2 head_mid, Vec2 heading);

// Counterclockwise quadrilateral of mesh h.
ConvexQuad mesh_quad(const LeaderState& state, int h);

// Per-leader sum of spring and damper forces. Every edge contributes an
// action/reaction pair, so the total over all leaders is zero.
std::vector<Vec2> internal_forces(const LeaderState& state, const std::vector<SpringEdge>& edges,
                                  const MsdParams& params);

// Lyapunov candidate V = 1/2 1^T E + 1/2 ||xdot||^2 with
// E_k = sum_l (kappa/2m)(|x_k-x_l| - l0)^2; non-increasing along the
// homogeneous flow.
double system_energy(const LeaderState& state, const std::vector<SpringEdge>& edges,
                     const MsdParams& params);

// Semi-implicit Euler step: velocities first, then positions.
LeaderState step(const LeaderState& state, const std::vector<Vec2>& external,
                 const std::vector<SpringEdge>& edges, const MsdParams& params, double dt);

struct ElongationReport {
    std::vector<double> ratios;  // |len - rest| / rest per edge
    double max_ratio = 0.0;
    std::vector<int> over_limit;  // edges exceeding kElongationLimit
    double limit = kElongationLimit;
};

ElongationReport elongation_report(const LeaderState& state, const std::vector<SpringEdge>& edges,
                                   const MsdParams& params);

}  // namespace lfcov
