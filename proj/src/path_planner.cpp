#include "lfcov/path_planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lfcov {

namespace {

double min_obstacle_distance(Vec2 q, const std::vector<Obstacle>& obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (const Obstacle& obstacle : obstacles) {
        best = std::min(best, nearest_boundary_point(obstacle, q).second);
    }
    return best;
}

Vec2 potential_gradient(Vec2 q, Vec2 goal, const std::vector<Obstacle>& obstacles,
                        const PlannerParams& params) {
    Vec2 grad = (q - goal) * params.k_att;
    const double range = params.repulsion_range();
    for (const Obstacle& obstacle : obstacles) {
        const auto [point, dist] = nearest_boundary_point(obstacle, q);
        const double gap = std::max(dist - params.clearance, 1e-6);
        if (gap >= range) continue;
        const Vec2 away = (q - point).normalized();
        grad += away * (params.k_rep * (1.0 / gap - 1.0 / range) * (-1.0 / (gap * gap)));
    }
    return grad;
}

std::vector<Vec2> moving_average(const std::vector<Vec2>& raw, int window) {
    if (window <= 1 || raw.size() < 3) return raw;
    const int n = static_cast<int>(raw.size());
    const int half = window / 2;
    std::vector<Vec2> smooth(raw.size());
    for (int i = 0; i < n; ++i) {
        const int h = std::min({half, i, n - 1 - i});
        Vec2 acc{0.0, 0.0};
        for (int j = i - h; j <= i + h; ++j) acc += raw[j];
        smooth[i] = acc / static_cast<double>(2 * h + 1);
    }
    return smooth;
}

std::vector<Vec2> resample_uniform(const std::vector<Vec2>& polyline, double ds) {
    std::vector<double> cum(polyline.size(), 0.0);
    for (size_t i = 1; i < polyline.size(); ++i) {
        cum[i] = cum[i - 1] + (polyline[i] - polyline[i - 1]).norm();
    }
    const double total = cum.back();
    std::vector<Vec2> out;
    out.push_back(polyline.front());
    size_t seg = 0;
    for (double s = ds; s < total; s += ds) {
        while (seg + 1 < cum.size() && cum[seg + 1] < s) ++seg;
        const double span = cum[seg + 1] - cum[seg];
        const double t = span > 0.0 ? (s - cum[seg]) / span : 0.0;
        out.push_back(polyline[seg] + (polyline[seg + 1] - polyline[seg]) * t);
    }
    if ((polyline.back() - out.back()).norm() > 1e-9) {
        out.push_back(polyline.back());
    }
    return out;
}

}  // namespace

ReferencePath make_reference_path(std::vector<Vec2> samples, double v_ref) {
    if (samples.size() < 2) {
        throw DegeneratePath("reference path needs at least 2 samples");
    }
    if (v_ref <= 0.0) {
        throw DegeneratePath("reference path needs v_ref > 0");
    }
    ReferencePath path;
    path.v_ref = v_ref;
    path.cumulative_arclength.push_back(0.0);
    path.samples.push_back(samples.front());
    for (size_t i = 1; i < samples.size(); ++i) {
        const double d = (samples[i] - path.samples.back()).norm();
        if (d <= 1e-12) {
            throw DegeneratePath("reference path has coincident consecutive samples at index " +
                                 std::to_string(i));
        }
        path.samples.push_back(samples[i]);
        path.cumulative_arclength.push_back(path.cumulative_arclength.back() + d);
    }
    return path;
}

ReferencePath plan_potential_field(Vec2 start, Vec2 goal, const std::vector<Obstacle>& obstacles,
                                   const PlannerParams& params, double v_ref) {
    for (size_t i = 0; i < obstacles.size(); ++i) {
        if (nearest_boundary_point(obstacles[i], start).second <= params.clearance) {
            throw ConfigError("planner: start is within clearance of obstacle " +
                              std::to_string(i));
        }
        if (nearest_boundary_point(obstacles[i], goal).second <= params.clearance) {
            throw ConfigError("planner: goal is within clearance of obstacle " +
                              std::to_string(i));
        }
    }
    if ((start - goal).norm() < params.goal_tol) {
        throw DegeneratePath("planner: start and goal coincide");
    }

    std::vector<Vec2> raw{start};
    Vec2 q = start;
    double best_goal_dist = (q - goal).norm();
    int since_progress = 0;
    int iter = 0;
    while ((q - goal).norm() >= params.goal_tol) {
        if (++iter > params.max_iters) {
            throw MaxIterations("planner: exceeded " + std::to_string(params.max_iters) +
                                " descent steps");
        }
        const Vec2 grad = potential_gradient(q, goal, obstacles, params);
        const double gnorm = grad.norm();
        if (gnorm < 1e-9) {
            throw LocalMinimum("planner: vanishing gradient away from the goal");
        }
        q -= grad * (params.eta / gnorm);
        raw.push_back(q);
        const double goal_dist = (q - goal).norm();
        if (goal_dist < best_goal_dist - 0.5 * params.eta) {
            best_goal_dist = goal_dist;
            since_progress = 0;
        } else if (++since_progress > params.stall_window) {
            throw LocalMinimum("planner: no progress toward the goal for " +
                               std::to_string(params.stall_window) + " steps");
        }
    }
    raw.push_back(goal);

    // Smoothing can cut corners into the clearance band; shrink the window
    // until the resampled path clears every obstacle (window 1 = raw path,
    // which the barrier keeps clear).
    int window = params.smoothing_window;
    while (true) {
        const std::vector<Vec2> samples = resample_uniform(moving_average(raw, window), params.ds);
        bool clear = true;
        for (const Vec2& s : samples) {
            if (min_obstacle_distance(s, obstacles) < params.clearance - 1e-9) {
                clear = false;
                break;
            }
        }
        if (clear) return make_reference_path(samples, v_ref);
        window /= 2;
    }
}

PathSample query(const ReferencePath& path, double t) {
    const double total = path.total_length();
    const double s = std::min(path.v_ref * std::max(t, 0.0), total);
    if (s >= total) {
        return {path.samples.back(), Vec2{0.0, 0.0}};
    }
    const auto& cum = path.cumulative_arclength;
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const size_t i = std::min<size_t>(std::distance(cum.begin(), it), cum.size() - 1) - 1;
    const double span = cum[i + 1] - cum[i];
    const double lambda = (s - cum[i]) / span;
    const Vec2 gamma = path.samples[i] + (path.samples[i + 1] - path.samples[i]) * lambda;

    auto unit_tangent = [&](size_t k) {
        const size_t lo = k == 0 ? 0 : k - 1;
        const size_t hi = std::min(k + 1, path.samples.size() - 1);
        return (path.samples[hi] - path.samples[lo]).normalized();
    };
    const Vec2 tangent = unit_tangent(i) * (1.0 - lambda) + unit_tangent(i + 1) * lambda;
    return {gamma, tangent.normalized() * path.v_ref};
}

double tracking_error(const ReferencePath& path, Vec2 c_x) {
    return distance_point_to_polyline(c_x, path.samples);
}

}  // namespace lfcov
