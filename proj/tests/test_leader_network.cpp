#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lfcov/leader_network.hpp"

using namespace lfcov;

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + uniform01(rng) * (hi - lo);
}

std::set<std::pair<int, int>> edge_set(const std::vector<SpringEdge>& edges) {
    std::set<std::pair<int, int>> out;
    for (const SpringEdge& e : edges) {
        out.insert({std::min(e.k, e.l), std::max(e.k, e.l)});
    }
    return out;
}

}  // namespace

TEST_CASE("build_grid_topology: M=4 smallest grid") {
    MsdParams params;
    params.leader_count = 4;
    params.rest_length = 2.0;
    const auto edges = build_grid_topology(params);
    REQUIRE(edges.size() == 6);
    int perimeter = 0, diagonal = 0;
    for (const SpringEdge& e : edges) {
        if (e.rest == doctest::Approx(2.0)) ++perimeter;
        if (e.rest == doctest::Approx(2.0 * std::sqrt(2.0))) ++diagonal;
    }
    CHECK(perimeter == 4);
    CHECK(diagonal == 2);
}

TEST_CASE("build_grid_topology: M=10 exhaustive enumeration") {
    MsdParams params;
    params.leader_count = 10;
    const auto edges = build_grid_topology(params);
    REQUIRE(edges.size() == 21);

    // 2x5 grid: 5 rungs, 8 rails, 8 diagonals.
    std::set<std::pair<int, int>> expected;
    for (int c = 0; c < 5; ++c) expected.insert({2 * c, 2 * c + 1});
    for (int c = 0; c < 4; ++c) {
        expected.insert({2 * c, 2 * c + 2});
        expected.insert({2 * c + 1, 2 * c + 3});
        expected.insert({2 * c, 2 * c + 3});
        expected.insert({2 * c + 1, 2 * c + 2});
    }
    CHECK(edge_set(edges) == expected);
    CHECK(edge_set(edges).size() == edges.size());  // every edge exactly once
}

TEST_CASE("make_rest_grid: meshes are convex and counterclockwise") {
    MsdParams params;
    params.leader_count = 10;
    const LeaderState state = make_rest_grid(params, {3.0, 2.0}, {1.0, 1.0});
    CHECK((state.head_midpoint() - Vec2{3.0, 2.0}).norm() < 1e-12);
    for (int h = 0; h < params.mesh_count(); ++h) {
        CHECK(quad_is_valid(mesh_quad(state, h)));
    }
    const auto edges = build_grid_topology(params);
    for (const SpringEdge& e : edges) {
        const double len = (state.positions[e.k] - state.positions[e.l]).norm();
        CHECK(len == doctest::Approx(e.rest).epsilon(1e-12));
    }
}

TEST_CASE("internal_forces: rest grid, single spring, action-reaction") {
    MsdParams params;
    params.leader_count = 10;
    const auto edges = build_grid_topology(params);
    const LeaderState rest = make_rest_grid(params, {0, 0}, {1, 0});
    for (const Vec2& f : internal_forces(rest, edges, params)) {
        CHECK(f.norm() < 1e-12);
    }

    // Two leaders, one spring kappa=1, rest 1, stretched to length 2.
    MsdParams two;
    two.leader_count = 4;  // params only gate validity; edges given explicitly
    two.kappa = 1.0;
    LeaderState pair;
    pair.positions = {{0, 0}, {2, 0}};
    pair.velocities = {{0, 0}, {0, 0}};
    const std::vector<SpringEdge> spring{{0, 1, 1.0}};
    const auto forces = internal_forces(pair, spring, two);
    CHECK((forces[0] - Vec2{1.0, 0.0}).norm() < 1e-12);
    CHECK((forces[1] - Vec2{-1.0, 0.0}).norm() < 1e-12);

    std::mt19937_64 rng(11);
    LeaderState random_state = rest;
    for (Vec2& p : random_state.positions) {
        p += Vec2{uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3)};
    }
    for (Vec2& v : random_state.velocities) {
        v = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    }
    Vec2 total{0, 0};
    for (const Vec2& f : internal_forces(random_state, edges, params)) total += f;
    CHECK(total.norm() < 1e-12);

    LeaderState coincident = rest;
    coincident.positions[1] = coincident.positions[0];
    CHECK_THROWS_AS(internal_forces(coincident, edges, params), CoincidentLeaders);
}

TEST_CASE("system_energy: rest, single spring, rigid translation") {
    MsdParams params;
    params.leader_count = 10;
    const auto edges = build_grid_topology(params);
    const LeaderState rest = make_rest_grid(params, {0, 0}, {1, 0});
    CHECK(system_energy(rest, edges, params) == doctest::Approx(0.0).epsilon(1e-15));

    MsdParams single;
    single.leader_count = 4;
    single.kappa = 1.0;
    single.m = 1.0;
    LeaderState pair;
    pair.positions = {{0, 0}, {2, 0}};
    pair.velocities = {{0, 0}, {0, 0}};
    CHECK(system_energy(pair, {{0, 1, 1.0}}, single) == doctest::Approx(0.5));

    LeaderState moving = rest;
    const Vec2 v{0.7, -0.4};
    for (Vec2& vel : moving.velocities) vel = v;
    CHECK(system_energy(moving, edges, params) ==
          doctest::Approx(0.5 * params.leader_count * v.squared_norm()));
}

TEST_CASE("step: hand integration and time bookkeeping") {
    MsdParams params;
    params.leader_count = 4;
    params.m = 1.0;
    const auto edges = build_grid_topology(params);
    const LeaderState rest = make_rest_grid(params, {0, 0}, {1, 0});

    const std::vector<Vec2> zero(4, Vec2{0, 0});
    const LeaderState still = step(rest, zero, edges, params, 0.01);
    CHECK(still.time == doctest::Approx(0.01));
    for (int k = 0; k < 4; ++k) {
        CHECK((still.positions[k] - rest.positions[k]).norm() < 1e-15);
    }

    // Semi-implicit Euler with constant external force from rest.
    std::vector<Vec2> force(4, Vec2{1.0, 0.0});
    const LeaderState pushed = step(rest, force, edges, params, 0.1);
    for (int k = 0; k < 4; ++k) {
        CHECK((pushed.velocities[k] - Vec2{0.1, 0.0}).norm() < 1e-12);
        CHECK((pushed.positions[k] - rest.positions[k] - Vec2{0.01, 0.0}).norm() < 1e-12);
    }

    std::vector<Vec2> bad(4, Vec2{std::numeric_limits<double>::quiet_NaN(), 0.0});
    CHECK_THROWS_AS(step(rest, bad, edges, params, 0.01), NonFiniteForce);
}

TEST_CASE("homogeneous flow: Lyapunov decrease and momentum conservation") {
    MsdParams params{1.0, 1.0, 10.0, 1.0, 10};
    const auto edges = build_grid_topology(params);
    std::mt19937_64 rng(12);
    const std::vector<Vec2> zero(params.leader_count, Vec2{0, 0});

    for (int trial = 0; trial < 3; ++trial) {
        LeaderState state = make_rest_grid(params, {0, 0}, {1, 0});
        for (Vec2& p : state.positions) {
            p += Vec2{uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1)};
        }
        for (Vec2& v : state.velocities) {
            v = {uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)};
        }
        Vec2 momentum0{0, 0};
        for (const Vec2& v : state.velocities) momentum0 += v * params.m;

        double energy = system_energy(state, edges, params);
        for (int k = 0; k < 10000; ++k) {
            state = step(state, zero, edges, params, 0.002);
            const double next = system_energy(state, edges, params);
            CHECK(next <= energy * (1.0 + 1e-8));
            energy = next;
        }
        Vec2 momentum1{0, 0};
        for (const Vec2& v : state.velocities) momentum1 += v * params.m;
        CHECK((momentum1 - momentum0).norm() < 1e-10);
    }
}

TEST_CASE("homogeneous flow converges to rest lengths") {
    MsdParams params{1.0, 2.0, 8.0, 1.0, 10};
    const auto edges = build_grid_topology(params);
    std::mt19937_64 rng(13);
    LeaderState state = make_rest_grid(params, {0, 0}, {1, 0});
    for (Vec2& p : state.positions) {
        p += Vec2{uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1)};
    }
    const std::vector<Vec2> zero(params.leader_count, Vec2{0, 0});
    const int steps = static_cast<int>(30.0 / 0.002);
    for (int k = 0; k < steps; ++k) {
        state = step(state, zero, edges, params, 0.002);
    }
    for (const SpringEdge& e : edges) {
        const double len = (state.positions[e.k] - state.positions[e.l]).norm();
        CHECK(std::abs(len - e.rest) < 1e-3 * params.rest_length);
    }
    for (const Vec2& v : state.velocities) {
        CHECK((v - state.velocities[0]).norm() < 1e-3);
    }
}

TEST_CASE("elongation_report: rest, bound constant, flagged edge") {
    MsdParams params;
    params.leader_count = 4;
    const auto edges = build_grid_topology(params);
    const LeaderState rest = make_rest_grid(params, {0, 0}, {1, 0});
    const ElongationReport at_rest = elongation_report(rest, edges, params);
    CHECK(at_rest.max_ratio == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(at_rest.over_limit.empty());

    CHECK(std::abs(kElongationLimit - 0.1715729) < 1e-6);
    CHECK(at_rest.limit == kElongationLimit);

    // Stretch one rung to 1.2x its rest length.
    LeaderState stretched = rest;
    stretched.positions[1] = stretched.positions[0] + Vec2{0.0, 1.2};
    const ElongationReport report = elongation_report(stretched, edges, params);
    CHECK(report.max_ratio == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(std::find(report.over_limit.begin(), report.over_limit.end(), 0) !=
          report.over_limit.end());
}

TEST_CASE("Lemma 1: elongations within the bound keep every mesh convex") {
    MsdParams params;
    params.leader_count = 10;
    const auto edges = build_grid_topology(params);
    const LeaderState rest = make_rest_grid(params, {0, 0}, {1, 0});
    std::mt19937_64 rng(14);

    auto max_ratio = [&](const LeaderState& s) {
        double worst = 0.0;
        for (const SpringEdge& e : edges) {
            const double len = (s.positions[e.k] - s.positions[e.l]).norm();
            worst = std::max(worst, std::abs(len - e.rest) / e.rest);
        }
        return worst;
    };

    const double target = 0.17;
    int near_bound = 0;
    for (int trial = 0; trial < 100000; ++trial) {
        std::vector<Vec2> direction(params.leader_count);
        for (Vec2& d : direction) {
            d = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
        }
        auto displaced = [&](double s) {
            LeaderState out = rest;
            for (int k = 0; k < params.leader_count; ++k) {
                out.positions[k] += direction[k] * s;
            }
            return out;
        };
        // Scale the perturbation up to the elongation bound.
        double lo = 0.0, hi = 0.5;
        if (max_ratio(displaced(hi)) > target) {
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                (max_ratio(displaced(mid)) <= target ? lo : hi) = mid;
            }
        } else {
            lo = hi;
        }
        const LeaderState sample = displaced(lo);
        const double ratio = max_ratio(sample);
        REQUIRE(ratio <= target + 1e-12);
        if (ratio > 0.16) ++near_bound;
        for (int h = 0; h < params.mesh_count(); ++h) {
            REQUIRE(quad_is_valid(mesh_quad(sample, h)));
        }
    }
    // The search must actually reach the bound, not hover near zero.
    CHECK(near_bound > 50000);
}
