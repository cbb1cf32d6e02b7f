#include "lfcov/selfcheck.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lfcov/coverage.hpp"
#include "lfcov/forces.hpp"
#include "lfcov/geometry.hpp"
#include "lfcov/leader_network.hpp"
#include "lfcov/simulator.hpp"

namespace lfcov {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + uniform01(rng) * (hi - lo);
}

ConvexQuad random_quad(std::mt19937_64& rng) {
    // Unit square with mild corner jitter stays strictly convex.
    ConvexQuad q;
    q.v = {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}};
    for (Vec2& v : q.v) {
        v.x += uniform(rng, -0.15, 0.15);
        v.y += uniform(rng, -0.15, 0.15);
    }
    return q;
}

CheckResult check(const std::string& name, bool pass, const std::string& detail) {
    return {name, pass, detail};
}

std::vector<CheckResult> energy_suite() {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(2024);
    MsdParams params{1.0, 2.0, 8.0, 1.0, 10};
    const auto edges = build_grid_topology(params);

    bool monotone = true;
    bool momentum_ok = true;
    bool converged = true;
    double worst_violation = 0.0;
    double worst_spring = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        LeaderState state = make_rest_grid(params, {0, 0}, {1, 0});
        for (Vec2& p : state.positions) {
            p.x += uniform(rng, -0.1, 0.1);
            p.y += uniform(rng, -0.1, 0.1);
        }
        const std::vector<Vec2> zero(params.leader_count, Vec2{0, 0});
        double v_prev = system_energy(state, edges, params);
        Vec2 p0{0, 0};
        for (const Vec2& v : state.velocities) p0 += v * params.m;
        const int steps = static_cast<int>(30.0 / 0.002);
        for (int k = 0; k < steps; ++k) {
            state = step(state, zero, edges, params, 0.002);
            const double v_now = system_energy(state, edges, params);
            worst_violation = std::max(worst_violation, (v_now - v_prev) / std::max(v_prev, 1e-300));
            if (v_now > v_prev * (1.0 + 1e-8)) monotone = false;
            v_prev = v_now;
        }
        Vec2 p1{0, 0};
        for (const Vec2& v : state.velocities) p1 += v * params.m;
        if ((p1 - p0).norm() > 1e-10) momentum_ok = false;
        for (const SpringEdge& e : edges) {
            const double len = (state.positions[e.k] - state.positions[e.l]).norm();
            worst_spring = std::max(worst_spring, std::abs(len - e.rest));
        }
        if (worst_spring > 1e-3 * params.rest_length) converged = false;
    }
    std::ostringstream d1;
    d1 << "max relative increase " << worst_violation;
    out.push_back(check("energy non-increasing (homogeneous flow)", monotone, d1.str()));
    out.push_back(check("momentum conserved", momentum_ok, "pairwise force cancellation"));
    std::ostringstream d2;
    d2 << "max spring-length error " << worst_spring << " after 30 s";
    out.push_back(check("converges to rest lengths", converged, d2.str()));
    return out;
}

std::vector<CheckResult> geometry_suite() {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(7);

    double worst_rt = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const ConvexQuad src = random_quad(rng);
        const ConvexQuad dst = random_quad(rng);
        const Homography H = homography_from_quads(src, dst);
        const Homography Hinv = invert(H);
        for (int s = 0; s < 20; ++s) {
            const double a = uniform01(rng), b = uniform01(rng);
            const Vec2 p = src.v[0] * ((1 - a) * (1 - b)) + src.v[1] * (a * (1 - b)) +
                           src.v[2] * (a * b) + src.v[3] * ((1 - a) * b);
            worst_rt = std::max(worst_rt, (apply(Hinv, apply(H, p)) - p).norm());
        }
    }
    out.push_back(check("homography round trip < 1e-9", worst_rt < 1e-9,
                        "worst " + std::to_string(worst_rt)));

    double worst_jac = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Homography H = homography_from_quads(random_quad(rng), random_quad(rng));
        const Vec2 p{uniform(rng, 0.2, 0.8), uniform(rng, 0.2, 0.8)};
        const Eigen::Matrix2d J = jacobian(H, p);
        const double h = 1e-6;
        Eigen::Matrix2d F;
        const Vec2 dx = (apply(H, {p.x + h, p.y}) - apply(H, {p.x - h, p.y})) / (2 * h);
        const Vec2 dy = (apply(H, {p.x, p.y + h}) - apply(H, {p.x, p.y - h})) / (2 * h);
        F << dx.x, dy.x, dx.y, dy.y;
        worst_jac = std::max(worst_jac, (J - F).norm() / F.norm());
    }
    out.push_back(check("analytic Jacobian matches finite differences", worst_jac < 1e-5,
                        "worst relative " + std::to_string(worst_jac)));

    bool partition_ok = true;
    std::ostringstream detail;
    for (int n : {2, 5, 10, 20}) {
        std::vector<Vec2> pts;
        const Rect domain{{0, 0}, 2.0, 1.0};
        while (static_cast<int>(pts.size()) < n) {
            const Vec2 c{uniform(rng, 0.02, 1.98), uniform(rng, 0.02, 0.98)};
            bool ok = true;
            for (const Vec2& p : pts) ok = ok && (c - p).norm() > 1e-3;
            if (ok) pts.push_back(c);
        }
        const auto cells = bounded_voronoi(pts, domain);
        double area = 0.0;
        for (const auto& cell : cells) area += polygon_area(cell);
        if (std::abs(area - domain.area()) > 1e-9 * domain.area()) partition_ok = false;
        int agree = 0, total = 0;
        for (int gx = 0; gx < 200; ++gx) {
            for (int gy = 0; gy < 200; ++gy) {
                const Vec2 q{(gx + 0.5) / 200.0 * 2.0, (gy + 0.5) / 200.0};
                int nearest = 0;
                double d0 = (q - pts[0]).squared_norm(), d1 = 1e300;
                for (int i = 1; i < n; ++i) {
                    const double d = (q - pts[i]).squared_norm();
                    if (d < d0) {
                        d1 = d0;
                        d0 = d;
                        nearest = i;
                    } else {
                        d1 = std::min(d1, d);
                    }
                }
                if (std::sqrt(d1) - std::sqrt(d0) < 1e-9) continue;  // boundary sample
                ++total;
                const Polygon& cell = cells[nearest];
                bool inside = cell.v.size() >= 3;
                for (size_t e = 0; inside && e < cell.v.size(); ++e) {
                    const Vec2 a = cell.v[e], b = cell.v[(e + 1) % cell.v.size()];
                    if ((b - a).cross(q - a) < -1e-9) inside = false;
                }
                if (inside) ++agree;
            }
        }
        if (agree < 0.999 * total) partition_ok = false;
        detail << "N=" << n << " agree " << agree << "/" << total << "; ";
    }
    out.push_back(check("Voronoi partition + grid-sample agreement", partition_ok, detail.str()));
    return out;
}

std::vector<CheckResult> coverage_suite() {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(11);
    const VirtualDomain vd = make_virtual_domain(10, 1.0, 1.0);
    const DensityField density = DensityField::uniform();

    // Lloyd descent decreases the locational cost.
    std::vector<Vec2> p;
    for (int i = 0; i < 8; ++i) {
        p.push_back({uniform(rng, 0.05, 3.95), uniform(rng, 0.05, 0.95)});
    }
    CoverageGains lloyd{1.0, CoverageLaw::lloyd};
    bool descent = true;
    double cost_prev = locational_cost(p, vd, density);
    for (int k = 0; k < 400; ++k) {
        const auto v = virtual_control(p, vd, density, lloyd);
        double move = 0.0;
        for (int i = 0; i < 8; ++i) {
            p[i] += v[i] * 0.01;
            move = std::max(move, v[i].norm());
        }
        const double cost = locational_cost(p, vd, density);
        if (cost > cost_prev * (1.0 + 1e-9)) descent = false;
        cost_prev = cost;
        if (move < 1e-6) break;
    }
    out.push_back(check("Lloyd iteration decreases locational cost", descent,
                        "final cost " + std::to_string(cost_prev)));

    // At the CVT every law commands zero velocity (N=1: center).
    const std::vector<Vec2> single{vd.rectangle.min_corner +
                                   Vec2{vd.rectangle.width / 2, vd.rectangle.height / 2}};
    bool fixed_point = true;
    for (CoverageLaw law : {CoverageLaw::lloyd, CoverageLaw::exact, CoverageLaw::decentralized}) {
        const auto v = virtual_control(single, vd, density, CoverageGains{1.0, law});
        if (v[0].norm() > 1e-12) fixed_point = false;
    }
    out.push_back(check("CVT is a fixed point of all laws", fixed_point, "N=1 center"));

    // Exact and decentralized laws agree within the Neumann remainder.
    bool agree = true;
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Vec2> q;
        for (int i = 0; i < 6; ++i) {
            q.push_back({uniform(rng, 0.1, 3.9), uniform(rng, 0.1, 0.9)});
        }
        try {
            const Eigen::MatrixXd J = centroid_jacobian(q, vd, density);
            const auto v_exact =
                virtual_control(q, vd, density, CoverageGains{1.0, CoverageLaw::exact});
            const auto v_dec =
                virtual_control(q, vd, density, CoverageGains{1.0, CoverageLaw::decentralized});
            double diff = 0.0, scale = 0.0;
            for (int i = 0; i < 6; ++i) {
                diff += (v_exact[i] - v_dec[i]).squared_norm();
                scale += v_exact[i].squared_norm();
            }
            const double bound = J.norm() * J.norm();
            const double rel = std::sqrt(diff / std::max(scale, 1e-300));
            worst = std::max(worst, rel - bound);
            if (rel > bound * 1.5 + 1e-9) agree = false;
        } catch (const TopologyBoundary&) {
            continue;
        }
    }
    out.push_back(check("decentralized law within Neumann remainder of exact", agree,
                        "worst excess " + std::to_string(worst)));
    return out;
}

std::vector<CheckResult> e2e_suite() {
    std::vector<CheckResult> out;
    const Scenario sc = reference_scenario();
    const RunResult result = run(sc);
    out.push_back(check("reference run completes without fault", result.summary.completed,
                        result.summary.fault ? result.summary.fault->message : "ok"));
    const bool safe = result.summary.min_obstacle_distance &&
                      *result.summary.min_obstacle_distance > sc.gains.delta_sensing;
    out.push_back(check("min leader-obstacle distance above safe distance", safe,
                        "min distance " +
                            std::to_string(result.summary.min_obstacle_distance.value_or(-1))));
    const bool deforms = result.summary.max_elongation > 0.05 &&
                         result.summary.max_elongation < kElongationLimit;
    out.push_back(check("domain deforms within the convexity bound", deforms,
                        "max elongation " + std::to_string(result.summary.max_elongation)));
    const bool projections_ok =
        result.summary.total_projections < 0.01 * result.summary.follower_steps;
    out.push_back(check("containment projections below 1%", projections_ok,
                        std::to_string(result.summary.total_projections) + " of " +
                            std::to_string(result.summary.follower_steps)));
    return out;
}

}  // namespace

std::vector<CheckResult> run_check_suite(const std::string& suite) {
    if (suite == "energy") return energy_suite();
    if (suite == "geometry") return geometry_suite();
    if (suite == "coverage") return coverage_suite();
    if (suite == "e2e") return e2e_suite();
    if (suite == "all") {
        std::vector<CheckResult> out;
        for (const auto* name : {"energy", "geometry", "coverage", "e2e"}) {
            const auto part = run_check_suite(name);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    throw UnknownSuite("unknown suite '" + suite +
                       "' (expected energy, geometry, coverage, e2e or all)");
}

}  // namespace lfcov
