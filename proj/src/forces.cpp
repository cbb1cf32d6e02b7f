#include "lfcov/forces.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lfcov {

namespace {

bool point_in_convex_polygon(const std::vector<Vec2>& poly, Vec2 p) {
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 edge = poly[(i + 1) % n] - poly[i];
        if (edge.cross(p - poly[i]) < 0.0) return false;
    }
    return true;
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 == 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

}  // namespace

std::pair<Vec2, double> nearest_boundary_point(const Obstacle& obstacle, Vec2 p) {
    if (const auto* circle = std::get_if<CircleObstacle>(&obstacle)) {
        const Vec2 d = p - circle->center;
        const double dist = d.norm();
        if (dist == 0.0) return {circle->center + Vec2{circle->radius, 0.0}, -circle->radius};
        return {circle->center + d * (circle->radius / dist), dist - circle->radius};
    }
    const auto& poly = std::get<PolygonObstacle>(obstacle).vertices;
    Vec2 best{};
    double best_dist = std::numeric_limits<double>::infinity();
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 q = closest_point_on_segment(p, poly[i], poly[(i + 1) % n]);
        const double d = (p - q).norm();
        if (d < best_dist) {
            best_dist = d;
            best = q;
        }
    }
    if (point_in_convex_polygon(poly, p)) best_dist = -best_dist;
    return {best, best_dist};
}

SensorReading sense(Vec2 leader, const std::vector<Obstacle>& obstacles, const ForceGains& gains) {
    SensorReading reading;
    double best = std::numeric_limits<double>::infinity();
    for (const Obstacle& obstacle : obstacles) {
        const auto [point, dist] = nearest_boundary_point(obstacle, leader);
        if (dist <= 0.0) {
            throw InsideObstacle("sense: leader at (" + std::to_string(leader.x) + ", " +
                                 std::to_string(leader.y) + ") penetrated an obstacle");
        }
        if (dist < best) {
            best = dist;
            reading.nearest = point;
            reading.distance = dist;
        }
    }
    reading.valid = best <= gains.sensing_radius;
    return reading;
}

Vec2 sensing_force(Vec2 leader, const SensorReading& reading, const ForceGains& gains) {
    if (!reading.valid) return {0.0, 0.0};
    const double d = reading.distance;
    if (d <= gains.delta_sensing) {
        throw SafetyBreached("sensing_force: obstacle distance " + std::to_string(d) +
                             " at or below safe distance " + std::to_string(gains.delta_sensing));
    }
    const double gap = d - gains.delta_sensing;
    double magnitude = gains.kappa1 / (gap * gap);
    // Linear ramp to zero over the outer 10% of the sensing range removes
    // the cutoff discontinuity.
    const double ramp_start = 0.9 * gains.sensing_radius;
    if (d > ramp_start) {
        magnitude *= (gains.sensing_radius - d) / (gains.sensing_radius - ramp_start);
    }
    const Vec2 away = (leader - reading.nearest).normalized();
    return away * magnitude;
}

std::vector<Vec2> tracking_force(const LeaderState& state, Vec2 gamma, Vec2 gamma_dot,
                                 const ForceGains& gains) {
    std::vector<Vec2> forces(state.count(), Vec2{0.0, 0.0});
    const Vec2 f = gamma_dot + (gamma - state.head_midpoint()) * gains.kappa2;
    forces[0] = f;
    forces[1] = f;
    return forces;
}

std::pair<Vec2, Vec2> orienting_force(Vec2 x1, Vec2 x2, Vec2 gamma_dot, const ForceGains& gains) {
    const double s = (x1 - x2).dot(gamma_dot);
    const Vec2 f = gamma_dot * (gains.kappa4 * s);
    return {-f, f};
}

Vec2 friction_force(Vec2 velocity, const ForceGains& gains) {
    return velocity * (-gains.kappa3);
}

std::vector<Vec2> total_external(const LeaderState& state, const std::vector<Obstacle>& obstacles,
                                 Vec2 gamma, Vec2 gamma_dot, const ForceGains& gains) {
    std::vector<Vec2> forces = tracking_force(state, gamma, gamma_dot, gains);
    const auto [f1, f2] =
        orienting_force(state.positions[0], state.positions[1], gamma_dot, gains);
    forces[0] += f1;
    forces[1] += f2;
    for (int k = 0; k < state.count(); ++k) {
        forces[k] += friction_force(state.velocities[k], gains);
        const SensorReading reading = sense(state.positions[k], obstacles, gains);
        forces[k] += sensing_force(state.positions[k], reading, gains);
    }
    return forces;
}

}  // namespace lfcov
