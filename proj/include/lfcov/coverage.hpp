#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lfcov/geometry.hpp"
#include "lfcov/leader_network.hpp"

namespace lfcov {

// Static rectangle composed of one cell per mesh; the flattening targets.
// Column c of the leader grid maps to x = (mesh_count - c) * cell_width, so
// the head column lands on the right edge and a rest grid maps by pure
// translation when the cell dims equal the rest length.
struct VirtualDomain {
    double cell_width = 1.0;
    double cell_height = 1.0;
    int mesh_count = 4;
    Rect rectangle;
    std::vector<Vec2> virtual_vertices;  // M entries, grid corners

    // Corner quad of virtual mesh h, ordered like the real mesh quad.
    ConvexQuad cell_quad(int h) const;
};

VirtualDomain make_virtual_domain(int leader_count, double cell_width, double cell_height);

struct FollowerState {
    std::vector<Vec2> positions;          // real domain
    std::vector<int> mesh_index;          // h with p inside mesh(h)
    std::vector<Vec2> virtual_positions;  // T_h(p)

    int count() const { return static_cast<int>(positions.size()); }
};

// Density over the virtual rectangle; constant 1 for now, kept as a hook.
struct DensityField {
    std::function<double(Vec2, double)> phi;

    static DensityField uniform() {
        return {[](Vec2, double) { return 1.0; }};
    }
};

enum class CoverageLaw { lloyd, exact, decentralized };

struct CoverageGains {
    double K = 1.0;  // convergence rate [1/s]
    CoverageLaw law = CoverageLaw::exact;

    bool valid() const { return K > 0.0; }
};

// One homography per mesh, mapping the real quad onto its virtual cell.
// Throws DegenerateMesh when a mesh fails the convexity invariant.
std::vector<Homography> mesh_homographies(const LeaderState& leaders, const VirtualDomain& vd);

// Assign each follower to the lowest-index mesh containing it and flatten.
// Throws FollowerEscapedDomain.
FollowerState assign_and_flatten(const std::vector<Vec2>& followers, const LeaderState& leaders,
                                 const std::vector<Homography>& homographies,
                                 const VirtualDomain& vd);

// Locational cost over the bounded Voronoi cells, exact for uniform density
// via fan triangulation and the degree-2 edge-midpoint rule.
double locational_cost(const std::vector<Vec2>& virtual_followers, const VirtualDomain& vd,
                       const DensityField& density);

std::vector<Vec2> centroids(const std::vector<Vec2>& virtual_followers, const VirtualDomain& vd,
                            const DensityField& density);

// Central finite differences of the stacked centroid map, step
// 1e-6 * max(rect dims). Blocks of non-Voronoi-neighbor pairs are forced to
// zero unless zero_non_neighbors is false (used to verify sparsity).
// Throws TopologyBoundary when a perturbation changes the adjacency.
Eigen::MatrixXd centroid_jacobian(const std::vector<Vec2>& virtual_followers,
                                  const VirtualDomain& vd, const DensityField& density,
                                  bool zero_non_neighbors = true);

struct VirtualControlInfo {
    CoverageLaw law_used = CoverageLaw::exact;
    bool ill_conditioned_fallback = false;
    double condition_estimate = 0.0;
};

// Velocity command per virtual follower. The exact law solves
// (I - dC/dp) v = K (C - p); condition estimates above 1e8 fall back to the
// decentralized law. dC/dt is identically zero in the static rectangle.
std::vector<Vec2> virtual_control(const std::vector<Vec2>& virtual_followers,
                                  const VirtualDomain& vd, const DensityField& density,
                                  const CoverageGains& gains,
                                  VirtualControlInfo* info = nullptr);

// Forward difference of the flattening map through the homography
// constructor: advance the mesh vertices by velocity * delta and rebuild.
Vec2 homography_time_derivative(const Homography& H_now, const LeaderState& leaders,
                                const std::vector<Vec2>& leader_velocities, int h, Vec2 p,
                                const VirtualDomain& vd, double delta = 1e-6);

// Solves J pdot = vtilde_dot - dTdt for the real-domain velocity.
Vec2 pull_back_velocity(Vec2 p, const Homography& H_h, Vec2 dTdt, Vec2 virtual_velocity);

// Sum of distances between followers and their cell centroids (E_c).
double aggregate_error(const std::vector<Vec2>& virtual_followers, const VirtualDomain& vd,
                       const DensityField& density);

// Max disagreement of adjacent flattening maps over shared mesh edges.
double seam_mismatch(const LeaderState& leaders, const VirtualDomain& vd);

}  // namespace lfcov
