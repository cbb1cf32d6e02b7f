#pragma once

#include <variant>
#include <vector>

#include "lfcov/geometry.hpp"
#include "lfcov/leader_network.hpp"

namespace lfcov {

struct ForceGains {
    double kappa1 = 0.5;          // obstacle repulsion gain
    double kappa2 = 1.0;          // tracking feedback gain [1/s]
    double kappa3 = 1.5;          // friction coefficient [N s/m]
    double kappa4 = 1.0;          // orienting gain
    double delta_sensing = 0.2;   // safe distance [m]
    double sensing_radius = 2.0;  // detection range [m]

    bool valid() const {
        return kappa1 > 0.0 && kappa2 > 0.0 && kappa3 > 0.0 && kappa4 > 0.0 &&
               delta_sensing > 0.0 && sensing_radius > delta_sensing;
    }
};

struct CircleObstacle {
    Vec2 center;
    double radius = 1.0;
};

// Convex, counterclockwise.
struct PolygonObstacle {
    std::vector<Vec2> vertices;
};

using Obstacle = std::variant<CircleObstacle, PolygonObstacle>;

struct SensorReading {
    Vec2 nearest;          // o_k
    double distance = 0.0;  // d_k
    bool valid = false;     // false when nothing within sensing_radius
};

// Nearest boundary point of a single obstacle and its distance; negative
// distance means the query point is inside.
std::pair<Vec2, double> nearest_boundary_point(const Obstacle& obstacle, Vec2 p);

// Reading of the nearest obstacle within sensing range. Throws
// InsideObstacle when the leader has penetrated an obstacle.
SensorReading sense(Vec2 leader, const std::vector<Obstacle>& obstacles, const ForceGains& gains);

// Repulsive barrier force of magnitude kappa1/(d - delta)^2, directed from
// the obstacle point toward the leader, ramped linearly to zero on the
// outer 10% of the sensing range. Throws SafetyBreached at d <= delta.
Vec2 sensing_force(Vec2 leader, const SensorReading& reading, const ForceGains& gains);

// Feedforward + feedback drive of the head midpoint toward the path;
// nonzero only for leaders 0 and 1.
std::vector<Vec2> tracking_force(const LeaderState& state, Vec2 gamma, Vec2 gamma_dot,
                                 const ForceGains& gains);

// Equal-and-opposite pair turning the head rung orthogonal to the path
// tangent.
std::pair<Vec2, Vec2> orienting_force(Vec2 x1, Vec2 x2, Vec2 gamma_dot, const ForceGains& gains);

Vec2 friction_force(Vec2 velocity, const ForceGains& gains);

// Per-leader sum of friction, tracking, orienting and sensing forces.
std::vector<Vec2> total_external(const LeaderState& state, const std::vector<Obstacle>& obstacles,
                                 Vec2 gamma, Vec2 gamma_dot, const ForceGains& gains);

}  // namespace lfcov
