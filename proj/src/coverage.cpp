#include "lfcov/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lfcov {

namespace {

std::vector<Vec2> centroids_of(const std::vector<Polygon>& cells) {
    std::vector<Vec2> out;
    out.reserve(cells.size());
    for (const Polygon& cell : cells) {
        out.push_back(polygon_centroid(cell));
    }
    return out;
}

}  // namespace

ConvexQuad VirtualDomain::cell_quad(int h) const {
    ConvexQuad q;
    q.v = {virtual_vertices[2 * h], virtual_vertices[2 * h + 1], virtual_vertices[2 * h + 3],
           virtual_vertices[2 * h + 2]};
    return q;
}

VirtualDomain make_virtual_domain(int leader_count, double cell_width, double cell_height) {
    VirtualDomain vd;
    vd.cell_width = cell_width;
    vd.cell_height = cell_height;
    vd.mesh_count = leader_count / 2 - 1;
    vd.rectangle = Rect{{0.0, 0.0}, vd.mesh_count * cell_width, cell_height};
    vd.virtual_vertices.resize(leader_count);
    const int cols = leader_count / 2;
    for (int c = 0; c < cols; ++c) {
        const double x = (vd.mesh_count - c) * cell_width;
        vd.virtual_vertices[2 * c] = {x, 0.0};
        vd.virtual_vertices[2 * c + 1] = {x, cell_height};
    }
    return vd;
}

std::vector<Homography> mesh_homographies(const LeaderState& leaders, const VirtualDomain& vd) {
    std::vector<Homography> homs;
    homs.reserve(vd.mesh_count);
    for (int h = 0; h < vd.mesh_count; ++h) {
        const ConvexQuad real = mesh_quad(leaders, h);
        if (!quad_is_valid(real)) {
            throw DegenerateMesh("mesh " + std::to_string(h) + " is not strictly convex");
        }
        homs.push_back(homography_from_quads(real, vd.cell_quad(h)));
    }
    return homs;
}

FollowerState assign_and_flatten(const std::vector<Vec2>& followers, const LeaderState& leaders,
                                 const std::vector<Homography>& homographies,
                                 const VirtualDomain& vd) {
    FollowerState state;
    state.positions = followers;
    state.mesh_index.resize(followers.size());
    state.virtual_positions.resize(followers.size());
    for (size_t i = 0; i < followers.size(); ++i) {
        int mesh = -1;
        for (int h = 0; h < vd.mesh_count; ++h) {
            if (point_in_quad(mesh_quad(leaders, h), followers[i])) {
                mesh = h;  // lowest h wins on shared edges
                break;
            }
        }
        if (mesh < 0) {
            throw FollowerEscapedDomain("follower " + std::to_string(i) +
                                        " is outside every mesh");
        }
        state.mesh_index[i] = mesh;
        Vec2 image = apply(homographies[mesh], followers[i]);
        // Boundary followers can land an ulp outside the rectangle; clamp
        // keeps the image a valid Voronoi generator (within the 1e-9
        // flattening tolerance).
        const Rect& rect = vd.rectangle;
        image.x = std::clamp(image.x, rect.min_corner.x, rect.min_corner.x + rect.width);
        image.y = std::clamp(image.y, rect.min_corner.y, rect.min_corner.y + rect.height);
        state.virtual_positions[i] = image;
    }
    return state;
}

double locational_cost(const std::vector<Vec2>& virtual_followers, const VirtualDomain& vd,
                       const DensityField& density) {
    const std::vector<Polygon> cells = bounded_voronoi(virtual_followers, vd.rectangle);
    double cost = 0.0;
    for (size_t i = 0; i < cells.size(); ++i) {
        const Polygon& cell = cells[i];
        if (cell.v.size() < 3) continue;
        const Vec2 apex = polygon_centroid(cell);
        const Vec2 p = virtual_followers[i];
        for (size_t k = 0; k < cell.v.size(); ++k) {
            const Vec2 a = apex;
            const Vec2 b = cell.v[k];
            const Vec2 c = cell.v[(k + 1) % cell.v.size()];
            const double area = 0.5 * (b - a).cross(c - a);
            // Edge-midpoint rule, exact for quadratic integrands.
            const Vec2 m0 = (a + b) * 0.5, m1 = (b + c) * 0.5, m2 = (c + a) * 0.5;
            cost += area / 3.0 * (density.phi(m0, 0.0) * (m0 - p).squared_norm() +
                                  density.phi(m1, 0.0) * (m1 - p).squared_norm() +
                                  density.phi(m2, 0.0) * (m2 - p).squared_norm());
        }
    }
    return cost;
}

std::vector<Vec2> centroids(const std::vector<Vec2>& virtual_followers, const VirtualDomain& vd,
                            const DensityField& density) {
    (void)density;  // uniform density: mass centroid = polygon centroid
    return centroids_of(bounded_voronoi(virtual_followers, vd.rectangle));
}

Eigen::MatrixXd centroid_jacobian(const std::vector<Vec2>& virtual_followers,
                                  const VirtualDomain& vd, const DensityField& density,
                                  bool zero_non_neighbors) {
    (void)density;
    const int n = static_cast<int>(virtual_followers.size());
    const double eps = 1e-6 * std::max(vd.rectangle.width, vd.rectangle.height);
    const Rect& rect = vd.rectangle;
    for (int i = 0; i < n; ++i) {
        const Vec2 p = virtual_followers[i];
        if (p.x - rect.min_corner.x < eps || rect.min_corner.x + rect.width - p.x < eps ||
            p.y - rect.min_corner.y < eps || rect.min_corner.y + rect.height - p.y < eps) {
            throw TopologyBoundary("centroid_jacobian: follower " + std::to_string(i) +
                                   " within the probe step of the domain boundary");
        }
    }
    const auto base_adj =
        bounded_voronoi_tessellation(virtual_followers, vd.rectangle).neighbors;

    Eigen::MatrixXd J(2 * n, 2 * n);
    std::vector<Vec2> work = virtual_followers;
    for (int j = 0; j < n; ++j) {
        for (int axis = 0; axis < 2; ++axis) {
            double& coord = axis == 0 ? work[j].x : work[j].y;
            const double saved = coord;

            coord = saved + eps;
            const auto plus = bounded_voronoi_tessellation(work, vd.rectangle);
            coord = saved - eps;
            const auto minus = bounded_voronoi_tessellation(work, vd.rectangle);
            coord = saved;

            if (plus.neighbors != base_adj || minus.neighbors != base_adj) {
                throw TopologyBoundary("centroid_jacobian: perturbation of follower " +
                                       std::to_string(j) + " changes the Voronoi adjacency");
            }
            const auto c_plus = centroids_of(plus.cells);
            const auto c_minus = centroids_of(minus.cells);
            for (int i = 0; i < n; ++i) {
                const Vec2 d = (c_plus[i] - c_minus[i]) / (2.0 * eps);
                J(2 * i, 2 * j + axis) = d.x;
                J(2 * i + 1, 2 * j + axis) = d.y;
            }
        }
    }

    if (zero_non_neighbors) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const auto& nbrs = base_adj[i];
                if (!std::binary_search(nbrs.begin(), nbrs.end(), j)) {
                    J.block<2, 2>(2 * i, 2 * j).setZero();
                }
            }
        }
    }
    return J;
}

std::vector<Vec2> virtual_control(const std::vector<Vec2>& virtual_followers,
                                  const VirtualDomain& vd, const DensityField& density,
                                  const CoverageGains& gains, VirtualControlInfo* info) {
    const int n = static_cast<int>(virtual_followers.size());
    const std::vector<Vec2> C = centroids(virtual_followers, vd, density);
    Eigen::VectorXd err(2 * n);
    for (int i = 0; i < n; ++i) {
        err[2 * i] = gains.K * (C[i].x - virtual_followers[i].x);
        err[2 * i + 1] = gains.K * (C[i].y - virtual_followers[i].y);
    }

    VirtualControlInfo local;
    local.law_used = gains.law;
    Eigen::VectorXd v = err;  // lloyd
    if (gains.law != CoverageLaw::lloyd) {
        const Eigen::MatrixXd dCdp = centroid_jacobian(virtual_followers, vd, density);
        if (gains.law == CoverageLaw::decentralized) {
            v = (Eigen::MatrixXd::Identity(2 * n, 2 * n) + dCdp) * err;
        } else {
            const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2 * n, 2 * n) - dCdp;
            const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU |
                                                               Eigen::ComputeThinV);
            const double smin = svd.singularValues().minCoeff();
            local.condition_estimate =
                smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                           : std::numeric_limits<double>::infinity();
            if (local.condition_estimate > 1e8) {
                local.ill_conditioned_fallback = true;
                local.law_used = CoverageLaw::decentralized;
                v = (Eigen::MatrixXd::Identity(2 * n, 2 * n) + dCdp) * err;
            } else {
                v = svd.solve(err);
            }
        }
    }
    if (info) *info = local;

    std::vector<Vec2> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = {v[2 * i], v[2 * i + 1]};
    }
    return out;
}

Vec2 homography_time_derivative(const Homography& H_now, const LeaderState& leaders,
                                const std::vector<Vec2>& leader_velocities, int h, Vec2 p,
                                const VirtualDomain& vd, double delta) {
    LeaderState advanced = leaders;
    const int idx[4] = {2 * h, 2 * h + 1, 2 * h + 3, 2 * h + 2};
    for (int k : idx) {
        advanced.positions[k] += leader_velocities[k] * delta;
    }
    const ConvexQuad quad = mesh_quad(advanced, h);
    if (!quad_is_valid(quad)) {
        throw DegenerateMesh("mesh " + std::to_string(h) + " degenerates within delta");
    }
    const Homography H_adv = homography_from_quads(quad, vd.cell_quad(h));
    return (apply(H_adv, p) - apply(H_now, p)) / delta;
}

Vec2 pull_back_velocity(Vec2 p, const Homography& H_h, Vec2 dTdt, Vec2 virtual_velocity) {
    const Eigen::Matrix2d J = jacobian(H_h, p);
    const double det = J.determinant();
    if (std::abs(det) <= 1e-10) {
        throw SingularJacobian("pull_back_velocity: flattening Jacobian is singular");
    }
    const Vec2 rhs = virtual_velocity - dTdt;
    return {(J(1, 1) * rhs.x - J(0, 1) * rhs.y) / det,
            (-J(1, 0) * rhs.x + J(0, 0) * rhs.y) / det};
}

double aggregate_error(const std::vector<Vec2>& virtual_followers, const VirtualDomain& vd,
                       const DensityField& density) {
    const std::vector<Vec2> C = centroids(virtual_followers, vd, density);
    double sum = 0.0;
    for (size_t i = 0; i < virtual_followers.size(); ++i) {
        sum += (virtual_followers[i] - C[i]).norm();
    }
    return sum;
}

double seam_mismatch(const LeaderState& leaders, const VirtualDomain& vd) {
    const std::vector<Homography> homs = mesh_homographies(leaders, vd);
    double worst = 0.0;
    constexpr int kSamples = 50;
    for (int h = 0; h + 1 < vd.mesh_count; ++h) {
        // Shared rung between mesh h and h+1: leaders 2h+2 and 2h+3.
        const Vec2 a = leaders.positions[2 * h + 2];
        const Vec2 b = leaders.positions[2 * h + 3];
        for (int s = 0; s < kSamples; ++s) {
            const double t = (s + 1.0) / (kSamples + 1.0);
            const Vec2 q = a + (b - a) * t;
            worst = std::max(worst, (apply(homs[h], q) - apply(homs[h + 1], q)).norm());
        }
    }
    return worst;
}

}  // namespace lfcov
