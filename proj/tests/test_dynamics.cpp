#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cprrt/dynamics.hpp"
#include "cprrt/rng.hpp"
#include "support/oracles.hpp"

using namespace cprrt;

namespace {

State random_pose(Rng& rng) {
    State s;
    s.x = rng.uniform(0, 100);
    s.y = rng.uniform(0, 100);
    s.theta = rng.uniform(-M_PI, M_PI);
    return s;
}

}  // namespace

TEST_CASE("holonomic steer truncates a straight line at eta") {
    const ModelParams params = ModelParams::defaults(Model::holonomic);
    const auto t = steer(params, State{0, 0, 0, 0, 0}, State{10, 0, 0, 0, 0});
    REQUIRE(t.has_value());
    CHECK(t->states.back().x == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(t->states.back().y == doctest::Approx(0.0));
    CHECK(t->length == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("dubins steer along an aligned ray degenerates to a straight prefix") {
    const ModelParams params = ModelParams::defaults(Model::dubins);
    const auto t = steer(params, State{0, 0, 0, 0, 0}, State{10, 0, 0, 0, 0});
    REQUIRE(t.has_value());
    CHECK(t->states.back().x == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(std::abs(t->states.back().y) < 1e-9);
    CHECK(std::abs(t->states.back().theta) < 1e-9);
    CHECK(t->length == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("dubins steer toward a pose behind makes progress under the metric") {
    const ModelParams params = ModelParams::defaults(Model::dubins);
    const State from{50, 50, 0, 0, 0};
    const State toward{30, 50, 0, 0, 0};  // directly behind
    const auto t = steer(params, from, toward);
    REQUIRE(t.has_value());
    CHECK(distance(params, t->states.back(), toward) < distance(params, from, toward));
    CHECK(oracle::reintegration_error(*t, Model::dubins) < 1e-3);
}

TEST_CASE("dubins shortest path: aligned collinear poses give the Euclidean length") {
    const auto t = dubins_shortest_path(State{0, 0, 0, 0, 0}, State{10, 0, 0, 0, 0}, 0.2);
    CHECK(t.length == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("dubins shortest path: a half-turn costs at least pi/kappa_max") {
    for (const double kappa : {0.1, 0.2, 0.5}) {
        const double len = dubins_length(State{0, 0, 0, 0, 0}, State{0, 0, M_PI, 0, 0}, kappa);
        CHECK(len >= M_PI / kappa - 1e-9);
    }
}

TEST_CASE("dubins solver matches the six-word tangent-construction oracle") {
    Rng rng(101);
    for (int i = 0; i < 1000; ++i) {
        const State q0 = random_pose(rng);
        const State q1 = random_pose(rng);
        const DubinsPath path = dubins_solve(q0, q1, 0.2);
        const auto words = oracle::dubins_word_lengths(q0, q1, 0.2);
        double oracle_best = std::numeric_limits<double>::infinity();
        for (const double w : words) {
            CHECK(path.length() <= w + 1e-9);
            oracle_best = std::min(oracle_best, w);
        }
        CHECK(path.length() == doctest::Approx(oracle_best).epsilon(1e-9));
        CHECK(path.length() >= dist(q0.pos(), q1.pos()) - 1e-9);

        const State end = path.at(path.length());
        CHECK(dist(end.pos(), q1.pos()) < 1e-6);
        CHECK(std::abs(wrap_angle(end.theta - q1.theta)) < 1e-6);
    }
}

TEST_CASE("dubins length is invariant under rigid motions") {
    Rng rng(102);
    for (int i = 0; i < 300; ++i) {
        const State q0 = random_pose(rng);
        const State q1 = random_pose(rng);
        const double base = dubins_length(q0, q1, 0.2);

        const double dx = rng.uniform(-50, 50), dy = rng.uniform(-50, 50);
        const double rot = rng.uniform(-M_PI, M_PI);
        const auto move = [&](const State& q) {
            State out;
            out.x = std::cos(rot) * q.x - std::sin(rot) * q.y + dx;
            out.y = std::sin(rot) * q.x + std::cos(rot) * q.y + dy;
            out.theta = wrap_angle(q.theta + rot);
            return out;
        };
        CHECK(dubins_length(move(q0), move(q1), 0.2) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("distance: holonomic Euclidean, dubins equals the path length") {
    const ModelParams hol = ModelParams::defaults(Model::holonomic);
    CHECK(distance(hol, State{0, 0, 0, 0, 0}, State{3, 4, 0, 0, 0}) == doctest::Approx(5.0));

    const ModelParams dub = ModelParams::defaults(Model::dubins);
    CHECK(distance(dub, State{0, 0, 0, 0, 0}, State{10, 0, 0, 0, 0}) ==
          doctest::Approx(10.0).epsilon(1e-9));

    Rng rng(103);
    for (int i = 0; i < 200; ++i) {
        const State a = random_pose(rng);
        const State b = random_pose(rng);
        CHECK(distance(dub, a, b) ==
              doctest::Approx(dubins_shortest_path(a, b, dub.kappa_max).length).epsilon(1e-9));
    }
}

TEST_CASE("trajectory cost is the arc length and adds under concatenation") {
    Trajectory single;
    single.states.push_back(State{1, 2, 0, 0, 0});
    CHECK(trajectory_cost(single) == 0.0);

    const ModelParams params = ModelParams::defaults(Model::holonomic);
    const auto t1 = steer(params, State{0, 0, 0, 0, 0}, State{5, 0, 0, 0, 0});
    REQUIRE(t1.has_value());
    CHECK(trajectory_cost(*t1) == doctest::Approx(5.0).epsilon(1e-12));

    const auto t2 = steer(params, t1->states.back(), State{5, 4, 0, 0, 0});
    REQUIRE(t2.has_value());
    const Trajectory joined = concat(*t1, *t2);
    CHECK(trajectory_cost(joined) ==
          doctest::Approx(trajectory_cost(*t1) + trajectory_cost(*t2)).epsilon(1e-9));
    CHECK(joined.states.size() == t1->states.size() + t2->states.size() - 1);
}

TEST_CASE("steer invariants across models") {
    Rng rng(104);
    for (const Model model : {Model::holonomic, Model::dubins, Model::car5d}) {
        const ModelParams params = ModelParams::defaults(model);
        int produced = 0;
        for (int i = 0; i < 150; ++i) {
            State from = random_pose(rng);
            State toward = random_pose(rng);
            if (model == Model::car5d) {
                from.v = rng.uniform(0, params.v_max);
                from.kappa = rng.uniform(-params.kappa_max, params.kappa_max);
            }
            if (model == Model::holonomic) from.theta = toward.theta = 0;
            const auto t = steer(params, from, toward);
            if (!t) continue;
            ++produced;
            CHECK(t->length <= params.eta + 1e-9);
            CHECK(t->states.front() == from);
            // Consecutive states stay within the discretization spacing
            // (chord length never exceeds arc length).
            for (std::size_t s = 1; s < t->states.size(); ++s) {
                CHECK(dist(t->states[s - 1].pos(), t->states[s].pos()) <= params.spacing + 1e-9);
            }
            CHECK(oracle::reintegration_error(*t, model) < 1e-3);
            if (model != Model::car5d) {
                CHECK(distance(params, t->states.back(), toward) <=
                      distance(params, from, toward) + 1e-9);
            }
        }
        // car5d extensions legitimately fail when the target needs a U-turn
        // that cannot fit in one eta-length arc.
        CHECK(produced > (model == Model::car5d ? 60 : 140));
    }
}

TEST_CASE("car5d steering converges toward the reference and respects bounds") {
    const ModelParams params = ModelParams::defaults(Model::car5d);
    Rng rng(105);
    int ok = 0;
    for (int i = 0; i < 50; ++i) {
        State from = random_pose(rng);
        from.v = rng.uniform(0, params.v_max);
        State toward = random_pose(rng);
        const auto t = steer(params, from, toward);
        if (!t) continue;
        ++ok;
        CHECK(distance(params, t->states.back(), toward) < distance(params, from, toward));
        for (const State& s : t->states) {
            CHECK(s.v >= -1e-9);
            CHECK(s.v <= params.v_max + 1e-9);
            CHECK(std::abs(s.kappa) <= params.kappa_max + 1e-9);
        }
    }
    CHECK(ok >= 25);
}

TEST_CASE("car5d connect reaches the target within the snap tolerance") {
    const ModelParams params = ModelParams::defaults(Model::car5d);
    const State from{10, 10, 0.3, 2.0, 0.0};
    State to{18, 12, 0.2, 2.0, 0.0};
    const auto t = connect(params, from, to);
    REQUIRE(t.has_value());
    const double dth = 2.0 * wrap_angle(t->states.back().theta - to.theta);
    const double err = std::sqrt(dist_sq(t->states.back().pos(), to.pos()) + dth * dth);
    CHECK(err <= kCar5dSnapTol + 1e-12);
}

TEST_CASE("steer from == toward returns the single-state trajectory") {
    for (const Model model : {Model::holonomic, Model::dubins, Model::car5d}) {
        const ModelParams params = ModelParams::defaults(model);
        const State s{42, 17, 0.5, 0, 0};
        const auto t = steer(params, s, s);
        REQUIRE(t.has_value());
        CHECK(t->states.size() == 1);
        CHECK(t->length == 0.0);
    }
}
