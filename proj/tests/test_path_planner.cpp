#include <doctest.h>

#include <cmath>
#include <random>

#include "lfcov/path_planner.hpp"

using namespace lfcov;

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double min_obstacle_distance(Vec2 q, const std::vector<Obstacle>& obstacles) {
    double best = 1e300;
    for (const Obstacle& ob : obstacles) best = std::min(best, nearest_boundary_point(ob, q).second);
    return best;
}

}  // namespace

TEST_CASE("make_reference_path: validation") {
    CHECK_THROWS_AS(make_reference_path({{0, 0}}, 1.0), DegeneratePath);
    CHECK_THROWS_AS(make_reference_path({{0, 0}, {0, 0}}, 1.0), DegeneratePath);
    const ReferencePath p = make_reference_path({{0, 0}, {3, 4}}, 1.0);
    CHECK(p.total_length() == doctest::Approx(5.0));
}

TEST_CASE("plan_potential_field: obstacle-free runs straight") {
    PlannerParams params;
    const ReferencePath path = plan_potential_field({0, 0}, {5, 0}, {}, params, 1.0);
    REQUIRE(path.samples.size() >= 2);
    for (const Vec2& s : path.samples) {
        CHECK(std::abs(s.y) < 1e-3);
        CHECK(s.x > -1e-6);
        CHECK(s.x < 5.0 + 1e-6);
    }
    CHECK((path.samples.back() - Vec2{5, 0}).norm() < params.goal_tol + 1e-9);
}

TEST_CASE("plan_potential_field: clears an obstacle on the segment") {
    PlannerParams params;
    params.clearance = 0.5;
    const std::vector<Obstacle> obstacles{CircleObstacle{{3.0, 0.0}, 0.6}};
    const ReferencePath path = plan_potential_field({0, 0.01}, {6, 0}, obstacles, params, 1.0);
    for (const Vec2& s : path.samples) {
        CHECK(min_obstacle_distance(s, obstacles) >= params.clearance - 1e-9);
    }
}

TEST_CASE("plan_potential_field: degenerate and blocked cases") {
    PlannerParams params;
    CHECK_THROWS_AS(plan_potential_field({1, 1}, {1, 1}, {}, params, 1.0), DegeneratePath);

    // A wide wall straight across the route: descent on the symmetry axis
    // stalls in front of it.
    const std::vector<Obstacle> wall{
        PolygonObstacle{{{3.0, -8.0}, {3.5, -8.0}, {3.5, 8.0}, {3.0, 8.0}}}};
    CHECK_THROWS_AS(plan_potential_field({0, 0}, {6, 0}, wall, params, 1.0), LocalMinimum);

    CHECK_THROWS_AS(
        plan_potential_field({2.9, 0}, {6, 0},
                             std::vector<Obstacle>{CircleObstacle{{3.0, 0.0}, 0.5}}, params, 1.0),
        ConfigError);
}

TEST_CASE("query: start, clamped end, straight-line hand values") {
    const ReferencePath path = make_reference_path({{0, 0}, {10, 0}}, 1.0);
    const PathSample at0 = query(path, 0.0);
    CHECK((at0.gamma - Vec2{0, 0}).norm() < 1e-12);
    CHECK((at0.gamma_dot - Vec2{1, 0}).norm() < 1e-12);

    const PathSample mid = query(path, 3.0);
    CHECK((mid.gamma - Vec2{3, 0}).norm() < 1e-12);
    CHECK((mid.gamma_dot - Vec2{1, 0}).norm() < 1e-12);

    const PathSample past = query(path, 99.0);
    CHECK((past.gamma - Vec2{10, 0}).norm() < 1e-12);
    CHECK(past.gamma_dot.norm() == 0.0);
}

TEST_CASE("query: constant speed and Lipschitz bound on a curved path") {
    std::mt19937_64 rng(31);
    std::vector<Vec2> samples{{0, 0}};
    for (int i = 0; i < 60; ++i) {
        samples.push_back(samples.back() +
                          Vec2{0.1 + 0.2 * uniform01(rng), 0.2 * uniform01(rng) - 0.1});
    }
    const double v_ref = 0.8;
    const ReferencePath path = make_reference_path(samples, v_ref);
    const double t_end = path.total_length() / v_ref;
    for (int k = 0; k < 200; ++k) {
        const double t = t_end * k / 200.0;
        const PathSample s = query(path, t);
        if (v_ref * t < path.total_length() - 1e-9) {
            CHECK(s.gamma_dot.norm() == doctest::Approx(v_ref).epsilon(1e-9));
        }
    }
    for (int k = 0; k < 100; ++k) {
        const double t1 = uniform01(rng) * t_end * 1.2;
        const double t2 = uniform01(rng) * t_end * 1.2;
        const Vec2 g1 = query(path, t1).gamma;
        const Vec2 g2 = query(path, t2).gamma;
        CHECK((g1 - g2).norm() <= v_ref * std::abs(t1 - t2) + 1e-9);
    }
}

TEST_CASE("tracking_error wraps the polyline distance") {
    const ReferencePath path = make_reference_path({{-1, 0}, {1, 0}}, 1.0);
    CHECK(tracking_error(path, {0, 1}) == doctest::Approx(1.0));
    CHECK(tracking_error(path, {0.5, 0}) == doctest::Approx(0.0));
}
