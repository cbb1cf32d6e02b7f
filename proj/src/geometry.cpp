#include "lfcov/geometry.hpp"

#include <algorithm>
#include <limits>

namespace lfcov {

double quad_signed_area(const ConvexQuad& q) {
    double a = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Vec2& p0 = q.v[i];
        const Vec2& p1 = q.v[(i + 1) % 4];
        a += p0.cross(p1);
    }
    return 0.5 * a;
}

bool quad_is_valid(const ConvexQuad& q, const Tolerances& tol) {
    for (int i = 0; i < 4; ++i) {
        if (!q.v[i].finite()) return false;
        const Vec2 e0 = q.v[(i + 1) % 4] - q.v[i];
        const Vec2 e1 = q.v[(i + 2) % 4] - q.v[(i + 1) % 4];
        if (e0.cross(e1) <= 0.0) return false;
    }
    return quad_signed_area(q) >= tol.quad_area;
}

Homography homography_from_quads(const ConvexQuad& src, const ConvexQuad& dst,
                                 const Tolerances& tol) {
    // Unknowns h00..h21 with h22 fixed to 1; two equations per corner.
    Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> b;
    for (int i = 0; i < 4; ++i) {
        const double x = src.v[i].x, y = src.v[i].y;
        const double u = dst.v[i].x, v = dst.v[i].y;
        A.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
        A.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
        b[2 * i] = u;
        b[2 * i + 1] = v;
    }
    const Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(A);
    if (!lu.isInvertible()) {
        throw SingularSystem("homography_from_quads: rank-deficient correspondence system");
    }
    const Eigen::Matrix<double, 8, 1> h = lu.solve(b);

    Homography H;
    H.h << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0;

    for (int i = 0; i < 4; ++i) {
        const Vec2 mapped = apply(H, src.v[i], tol);
        if ((mapped - dst.v[i]).norm() > tol.corner_map) {
            throw SingularSystem("homography_from_quads: corner residual above tolerance");
        }
    }
    return H;
}

Vec2 apply(const Homography& H, Vec2 p, const Tolerances& tol) {
    const double w = H.h(2, 0) * p.x + H.h(2, 1) * p.y + H.h(2, 2);
    if (std::abs(w) <= tol.projective_w) {
        throw ProjectiveInfinity("apply: point lies on the vanishing line");
    }
    return {(H.h(0, 0) * p.x + H.h(0, 1) * p.y + H.h(0, 2)) / w,
            (H.h(1, 0) * p.x + H.h(1, 1) * p.y + H.h(1, 2)) / w};
}

Homography invert(const Homography& H, const Tolerances& tol) {
    const double det = H.h.determinant();
    if (std::abs(det) <= tol.homography_det) {
        throw SingularSystem("invert: homography determinant below tolerance");
    }
    Eigen::Matrix3d inv = H.h.inverse();
    if (std::abs(inv(2, 2)) <= tol.homography_det) {
        throw SingularSystem("invert: inverse has vanishing affine part");
    }
    Homography out;
    out.h = inv / inv(2, 2);
    return out;
}

Eigen::Matrix2d jacobian(const Homography& H, Vec2 p, const Tolerances& tol) {
    const double w = H.h(2, 0) * p.x + H.h(2, 1) * p.y + H.h(2, 2);
    if (std::abs(w) <= tol.projective_w) {
        throw ProjectiveInfinity("jacobian: point lies on the vanishing line");
    }
    const double u = (H.h(0, 0) * p.x + H.h(0, 1) * p.y + H.h(0, 2)) / w;
    const double v = (H.h(1, 0) * p.x + H.h(1, 1) * p.y + H.h(1, 2)) / w;
    Eigen::Matrix2d J;
    J << (H.h(0, 0) - u * H.h(2, 0)) / w, (H.h(0, 1) - u * H.h(2, 1)) / w,
        (H.h(1, 0) - v * H.h(2, 0)) / w, (H.h(1, 1) - v * H.h(2, 1)) / w;
    return J;
}

namespace {

// Polygon whose vertex i also carries the label of the edge starting at
// vertex i: -1 for rectangle sides, j >= 0 for the bisector of generator j.
struct LabeledPolygon {
    std::vector<Vec2> v;
    std::vector<int> label;
};

// Clip against the half-plane n.q <= c, labeling the new cut edge.
LabeledPolygon clip_half_plane(const LabeledPolygon& poly, Vec2 n, double c, int cut_label) {
    LabeledPolygon out;
    const size_t count = poly.v.size();
    out.v.reserve(count + 1);
    out.label.reserve(count + 1);
    for (size_t i = 0; i < count; ++i) {
        const Vec2 a = poly.v[i];
        const Vec2 b = poly.v[(i + 1) % count];
        const double da = n.dot(a) - c;
        const double db = n.dot(b) - c;
        if (da <= 0.0) {
            out.v.push_back(a);
            out.label.push_back(poly.label[i]);
            if (db > 0.0) {
                const double t = da / (da - db);
                out.v.push_back(a + (b - a) * t);
                out.label.push_back(cut_label);
            }
        } else if (db <= 0.0) {
            const double t = da / (da - db);
            out.v.push_back(a + (b - a) * t);
            out.label.push_back(poly.label[i]);
        }
    }
    return out;
}

// Length of the collinear overlap between segments [a1,b1] and [a2,b2],
// zero when they are not collinear.
double collinear_overlap(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2, double line_tol) {
    const Vec2 d = b1 - a1;
    const double len = d.norm();
    if (len < line_tol) return 0.0;
    const Vec2 u = d / len;
    if (std::abs(u.cross(a2 - a1)) > line_tol || std::abs(u.cross(b2 - a1)) > line_tol) {
        return 0.0;
    }
    double t0 = u.dot(a2 - a1);
    double t1 = u.dot(b2 - a1);
    if (t0 > t1) std::swap(t0, t1);
    const double lo = std::max(0.0, t0);
    const double hi = std::min(len, t1);
    return std::max(0.0, hi - lo);
}

}  // namespace

VoronoiTessellation bounded_voronoi_tessellation(const std::vector<Vec2>& points,
                                                 const Rect& domain, const Tolerances& tol) {
    const size_t n = points.size();
    for (size_t i = 0; i < n; ++i) {
        if (!domain.contains(points[i])) {
            throw GeneratorOutsideDomain("bounded_voronoi: generator " + std::to_string(i) +
                                         " outside domain");
        }
        for (size_t j = i + 1; j < n; ++j) {
            if ((points[i] - points[j]).norm() <= tol.coincident_points) {
                throw CoincidentGenerators("bounded_voronoi: generators " + std::to_string(i) +
                                           " and " + std::to_string(j) + " coincide");
            }
        }
    }

    LabeledPolygon rect;
    rect.v = {domain.min_corner,
              {domain.min_corner.x + domain.width, domain.min_corner.y},
              {domain.min_corner.x + domain.width, domain.min_corner.y + domain.height},
              {domain.min_corner.x, domain.min_corner.y + domain.height}};
    rect.label = {-1, -1, -1, -1};

    VoronoiTessellation out;
    out.cells.resize(n);
    std::vector<std::vector<double>> shared_len(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        LabeledPolygon cell = rect;
        for (size_t j = 0; j < n && !cell.v.empty(); ++j) {
            if (j == i) continue;
            const Vec2 nvec = points[j] - points[i];
            const double c = nvec.dot((points[i] + points[j]) * 0.5);
            cell = clip_half_plane(cell, nvec, c, static_cast<int>(j));
        }
        const size_t m = cell.v.size();
        for (size_t k = 0; k < m; ++k) {
            const int label = cell.label[k];
            if (label >= 0) {
                shared_len[i][label] += (cell.v[(k + 1) % m] - cell.v[k]).norm();
            }
        }
        out.cells[i].v = std::move(cell.v);
    }

    out.neighbors.resize(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (shared_len[i][j] > tol.shared_edge && shared_len[j][i] > tol.shared_edge) {
                out.neighbors[i].push_back(static_cast<int>(j));
                out.neighbors[j].push_back(static_cast<int>(i));
            }
        }
    }
    return out;
}

std::vector<Polygon> bounded_voronoi(const std::vector<Vec2>& points, const Rect& domain,
                                     const Tolerances& tol) {
    return bounded_voronoi_tessellation(points, domain, tol).cells;
}

std::vector<std::vector<int>> voronoi_neighbors(const std::vector<Polygon>& cells,
                                                const Tolerances& tol) {
    const int n = static_cast<int>(cells.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double shared = 0.0;
            const size_t ni = cells[i].v.size();
            const size_t nj = cells[j].v.size();
            for (size_t a = 0; a < ni && shared <= tol.shared_edge; ++a) {
                for (size_t b = 0; b < nj && shared <= tol.shared_edge; ++b) {
                    shared = std::max(shared, collinear_overlap(
                                                  cells[i].v[a], cells[i].v[(a + 1) % ni],
                                                  cells[j].v[b], cells[j].v[(b + 1) % nj],
                                                  tol.shared_edge));
                }
            }
            if (shared > tol.shared_edge) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    return adj;
}

double polygon_area(const Polygon& poly) {
    double a = 0.0;
    const size_t n = poly.v.size();
    for (size_t i = 0; i < n; ++i) {
        a += poly.v[i].cross(poly.v[(i + 1) % n]);
    }
    return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& poly, const Tolerances& tol) {
    const size_t n = poly.v.size();
    if (n < 3) {
        throw DegeneratePolygon("polygon_centroid: fewer than 3 vertices");
    }
    const double area = polygon_area(poly);
    if (std::abs(area) < tol.degenerate_area) {
        throw DegeneratePolygon("polygon_centroid: area below tolerance");
    }
    Vec2 c{0.0, 0.0};
    for (size_t i = 0; i < n; ++i) {
        const Vec2 p0 = poly.v[i];
        const Vec2 p1 = poly.v[(i + 1) % n];
        const double w = p0.cross(p1);
        c += (p0 + p1) * w;
    }
    return c / (6.0 * area);
}

bool point_in_quad(const ConvexQuad& quad, Vec2 p, const Tolerances& tol) {
    for (int i = 0; i < 4; ++i) {
        const Vec2 edge = quad.v[(i + 1) % 4] - quad.v[i];
        if (edge.cross(p - quad.v[i]) < -tol.boundary_cross) return false;
    }
    return true;
}

double distance_point_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

double distance_point_to_polyline(Vec2 p, const std::vector<Vec2>& polyline) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < polyline.size(); ++i) {
        best = std::min(best, distance_point_to_segment(p, polyline[i], polyline[i + 1]));
    }
    return best;
}

}  // namespace lfcov
