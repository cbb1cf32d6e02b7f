#include "lfcov/leader_network.hpp"

#include <cassert>
#include <string>

namespace lfcov {

std::vector<SpringEdge> build_grid_topology(const MsdParams& params) {
    assert(params.valid());
    const int cols = params.leader_count / 2;
    const double l0 = params.rest_length;
    const double diag = std::sqrt(2.0) * l0;
    std::vector<SpringEdge> edges;
    edges.reserve(cols + 4 * (cols - 1));
    auto bottom = [](int c) { return 2 * c; };
    auto top = [](int c) { return 2 * c + 1; };
    for (int c = 0; c < cols; ++c) {
        edges.push_back({bottom(c), top(c), l0});  // rung
    }
    for (int c = 0; c + 1 < cols; ++c) {
        edges.push_back({bottom(c), bottom(c + 1), l0});  // rails
        edges.push_back({top(c), top(c + 1), l0});
        edges.push_back({bottom(c), top(c + 1), diag});  // diagonals
        edges.push_back({top(c), bottom(c + 1), diag});
    }
    return edges;
}

LeaderState make_rest_grid(const MsdParams& params, Vec2 head_mid, Vec2 heading) {
    assert(params.valid());
    const int cols = params.leader_count / 2;
    const double l0 = params.rest_length;
    const Vec2 t = heading.normalized();
    const Vec2 n = t.perp();
    LeaderState state;
    state.positions.resize(params.leader_count);
    state.velocities.assign(params.leader_count, Vec2{0.0, 0.0});
    for (int c = 0; c < cols; ++c) {
        const Vec2 mid = head_mid - t * (l0 * c);
        state.positions[2 * c] = mid - n * (0.5 * l0);
        state.positions[2 * c + 1] = mid + n * (0.5 * l0);
    }
    return state;
}

ConvexQuad mesh_quad(const LeaderState& state, int h) {
    ConvexQuad q;
    q.v = {state.positions[2 * h], state.positions[2 * h + 1], state.positions[2 * h + 3],
           state.positions[2 * h + 2]};
    return q;
}

std::vector<Vec2> internal_forces(const LeaderState& state, const std::vector<SpringEdge>& edges,
                                  const MsdParams& params) {
    std::vector<Vec2> forces(state.count(), Vec2{0.0, 0.0});
    for (const SpringEdge& e : edges) {
        const Vec2 dx = state.positions[e.k] - state.positions[e.l];
        const double dist = dx.norm();
        if (dist <= kTol.coincident_points) {
            throw CoincidentLeaders("internal_forces: leaders " + std::to_string(e.k) + " and " +
                                    std::to_string(e.l) + " coincide");
        }
        const Vec2 spring = dx * (-params.kappa * (dist - e.rest) / dist);
        const Vec2 damper = (state.velocities[e.k] - state.velocities[e.l]) * (-params.c);
        forces[e.k] += spring + damper;
        forces[e.l] -= spring + damper;
    }
    return forces;
}

double system_energy(const LeaderState& state, const std::vector<SpringEdge>& edges,
                     const MsdParams& params) {
    // Each edge appears in E_k of both endpoints; the leading 1/2 halves
    // that double count, so one term per edge remains.
    double spring = 0.0;
    for (const SpringEdge& e : edges) {
        const double stretch = (state.positions[e.k] - state.positions[e.l]).norm() - e.rest;
        spring += params.kappa / (2.0 * params.m) * stretch * stretch;
    }
    double kinetic = 0.0;
    for (const Vec2& v : state.velocities) {
        kinetic += 0.5 * v.squared_norm();
    }
    return spring + kinetic;
}

LeaderState step(const LeaderState& state, const std::vector<Vec2>& external,
                 const std::vector<SpringEdge>& edges, const MsdParams& params, double dt) {
    assert(dt > 0.0 && dt <= 0.05);
    const std::vector<Vec2> internal = internal_forces(state, edges, params);
    LeaderState next = state;
    for (int k = 0; k < state.count(); ++k) {
        const Vec2 total = internal[k] + external[k];
        if (!total.finite()) {
            throw NonFiniteForce("step: non-finite force on leader " + std::to_string(k));
        }
        next.velocities[k] += total * (dt / params.m);
        next.positions[k] += next.velocities[k] * dt;
    }
    next.time += dt;
    return next;
}

ElongationReport elongation_report(const LeaderState& state, const std::vector<SpringEdge>& edges,
                                   const MsdParams& params) {
    (void)params;
    ElongationReport report;
    report.ratios.reserve(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        const SpringEdge& e = edges[i];
        const double len = (state.positions[e.k] - state.positions[e.l]).norm();
        const double ratio = std::abs(len - e.rest) / e.rest;
        report.ratios.push_back(ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
        if (ratio > kElongationLimit) {
            report.over_limit.push_back(static_cast<int>(i));
        }
    }
    return report;
}

}  // namespace lfcov
