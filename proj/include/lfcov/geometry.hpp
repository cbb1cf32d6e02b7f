#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lfcov/errors.hpp"

namespace lfcov {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    // 90-degree counterclockwise rotation.
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// All geometric tolerances live here so every module compares against the
// same constants.
struct Tolerances {
    double quad_area = 1e-9;          // minimum signed area of a ConvexQuad
    double homography_det = 1e-12;    // singularity threshold for 3x3 maps
    double projective_w = 1e-12;      // vanishing-line threshold in apply()
    double corner_map = 1e-9;         // corner correspondence residual
    double coincident_points = 1e-9;  // Voronoi generators / connected leaders
    double shared_edge = 1e-9;        // Voronoi neighbor edge length
    double boundary_cross = 1e-12;    // point-in-quad edge slack
    double degenerate_area = 1e-12;   // polygon area/centroid threshold
};

inline constexpr Tolerances kTol{};

// Counterclockwise quadrilateral, strictly convex.
struct ConvexQuad {
    std::array<Vec2, 4> v{};
};

double quad_signed_area(const ConvexQuad& q);
bool quad_is_valid(const ConvexQuad& q, const Tolerances& tol = kTol);

struct Rect {
    Vec2 min_corner;
    double width = 0.0;
    double height = 0.0;

    Vec2 max_corner() const { return {min_corner.x + width, min_corner.y + height}; }
    double area() const { return width * height; }
    bool contains(Vec2 p) const {
        return p.x >= min_corner.x && p.x <= min_corner.x + width &&
               p.y >= min_corner.y && p.y <= min_corner.y + height;
    }
};

// Simple counterclockwise polygon.
struct Polygon {
    std::vector<Vec2> v;
};

// 3x3 projective map with h(2,2) normalized to 1.
struct Homography {
    Eigen::Matrix3d h = Eigen::Matrix3d::Identity();

    static Homography identity() { return {}; }
};

// Solves the 8x8 direct linear transform of the four corner
// correspondences. Throws SingularSystem when the system is rank deficient
// or the solution fails to reproduce the corners.
Homography homography_from_quads(const ConvexQuad& src, const ConvexQuad& dst,
                                 const Tolerances& tol = kTol);

Vec2 apply(const Homography& H, Vec2 p, const Tolerances& tol = kTol);

Homography invert(const Homography& H, const Tolerances& tol = kTol);

// Analytic 2x2 Jacobian of the projective map at p.
Eigen::Matrix2d jacobian(const Homography& H, Vec2 p, const Tolerances& tol = kTol);

// Voronoi tessellation of a rectangle by half-plane clipping. Cell i is the
// set of domain points at least as close to points[i] as to any other
// generator; the cells tile the rectangle.
std::vector<Polygon> bounded_voronoi(const std::vector<Vec2>& points, const Rect& domain,
                                     const Tolerances& tol = kTol);

// Cells plus the Delaunay adjacency recovered from the clipping itself:
// every surviving bisector edge is labeled with the generator that cut it.
// One clipping pass per cell, no pairwise polygon comparison.
struct VoronoiTessellation {
    std::vector<Polygon> cells;
    std::vector<std::vector<int>> neighbors;  // sorted generator indices
};

VoronoiTessellation bounded_voronoi_tessellation(const std::vector<Vec2>& points,
                                                 const Rect& domain,
                                                 const Tolerances& tol = kTol);

// Symmetric adjacency: i~j iff cells i and j share a boundary segment
// longer than tol.shared_edge.
std::vector<std::vector<int>> voronoi_neighbors(const std::vector<Polygon>& cells,
                                                const Tolerances& tol = kTol);

double polygon_area(const Polygon& poly);
Vec2 polygon_centroid(const Polygon& poly, const Tolerances& tol = kTol);

bool point_in_quad(const ConvexQuad& quad, Vec2 p, const Tolerances& tol = kTol);

double distance_point_to_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_point_to_polyline(Vec2 p, const std::vector<Vec2>& polyline);

}  // namespace lfcov
