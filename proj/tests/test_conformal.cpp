#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cprrt/conformal.hpp"
#include "cprrt/json_io.hpp"
#include "cprrt/rng.hpp"
#include "cprrt/worldgen.hpp"
#include "support/oracles.hpp"

using namespace cprrt;

namespace {

PredictedPath make_path(std::initializer_list<Vec2> pts) {
    PredictedPath p;
    p.points = pts;
    return p;
}

Trajectory traj_from_points(std::initializer_list<Vec2> pts) {
    Trajectory t;
    for (const Vec2& p : pts) t.states.push_back(State{p.x, p.y, 0, 0, 0});
    return t;
}

PredictedPath random_path(Rng& rng, std::size_t n) {
    PredictedPath p;
    for (std::size_t i = 0; i < n; ++i) {
        p.points.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    }
    return p;
}

Trajectory random_traj(Rng& rng, std::size_t n) {
    Trajectory t;
    for (std::size_t i = 0; i < n; ++i) {
        t.states.push_back(State{rng.uniform(0, 100), rng.uniform(0, 100), 0, 0, 0});
    }
    return t;
}

}  // namespace

TEST_CASE("voronoi_index: generator point, tie-break, brute-force agreement") {
    const auto path = make_path({{0, 0}, {10, 0}, {20, 0}, {30, 0}});
    CHECK(voronoi_index(path, {20, 0}) == 2);      // the third point
    CHECK(voronoi_index(path, {5, 0}) == 0);       // equidistant from 0 and 1
    CHECK(voronoi_index(path, {15, 100}) == 1);    // equidistant from 1 and 2

    Rng rng(7);
    const auto p = random_path(rng, 40);
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q{rng.uniform(-10, 110), rng.uniform(-10, 110)};
        CHECK(voronoi_index(p, q) == oracle::brute_voronoi_index(p, q));
    }
}

TEST_CASE("ncs zero and single-cell cases") {
    const auto path = make_path({{0, 0}, {10, 0}, {20, 0}});
    CHECK(ncs(path, traj_from_points({{0, 0}, {10, 0}, {20, 0}})) == 0.0);

    const auto single = make_path({{0, 0}});
    CHECK(ncs(single, traj_from_points({{0, 0}, {3, 4}})) == doctest::Approx(5.0));
}

TEST_CASE("ncs equals the literal two-stage score on random pairs") {
    Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        const auto path = random_path(rng, 2 + rng.uniform_index(30));
        const auto traj = random_traj(rng, 1 + rng.uniform_index(60));
        CHECK(ncs(path, traj) == oracle::ncs_two_stage(path, traj));
    }
}

TEST_CASE("ncs is invariant to sample order and monotone under refinement") {
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const auto path = random_path(rng, 10);
        auto traj = random_traj(rng, 20);
        const double base = ncs(path, traj);

        auto reversed = traj;
        std::reverse(reversed.states.begin(), reversed.states.end());
        CHECK(ncs(path, reversed) == base);

        auto refined = traj;
        refined.states.push_back(State{rng.uniform(0, 100), rng.uniform(0, 100), 0, 0, 0});
        CHECK(ncs(path, refined) >= base);
    }
}

TEST_CASE("conformal quantile: the forced arithmetic cases") {
    std::vector<double> fifty;
    for (int i = 1; i <= 50; ++i) fifty.push_back(i);
    // r = ceil(0.9 * 51) = 46.
    CHECK(conformal_quantile(fifty, 0.1) == 46.0);

    CHECK(conformal_quantile({1, 2, 3, 4, 5}, 0.1) ==
          std::numeric_limits<double>::infinity());

    // r = ceil(0.8 * 11) = 9.
    CHECK(conformal_quantile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0.2) == 9.0);
}

TEST_CASE("conformal quantile equals the sort-and-index oracle") {
    Rng rng(10);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> scores;
        const std::size_t n = 1 + rng.uniform_index(80);
        for (std::size_t k = 0; k < n; ++k) scores.push_back(rng.uniform(0, 50));
        const double alpha = rng.uniform(0.01, 0.6);
        const double got = conformal_quantile(scores, alpha);
        const double want = oracle::quantile_sort_index(scores, alpha);
        if (std::isinf(want)) {
            CHECK(std::isinf(got));
        } else {
            CHECK(got == want);
        }
    }
}

TEST_CASE("q_hat is monotone non-increasing in alpha") {
    Rng rng(11);
    std::vector<double> scores;
    for (int i = 0; i < 60; ++i) scores.push_back(rng.uniform(0, 30));
    double prev = std::numeric_limits<double>::infinity();
    for (const double alpha : {0.02, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double q = conformal_quantile(scores, alpha);
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("calibrate scores records through the predictor and takes the quantile") {
    // Predictor pins the path; each record's solution deviates by a known
    // amount, so the scores are exactly 1..50 in shuffled order.
    std::vector<CalibrationRecord> records;
    PlanningProblem base;
    base.world = World({0, 0, 100, 100}, {});
    base.goal_center = {100, 100};
    base.goal_radius = 3.0;
    Rng rng(12);
    std::vector<double> devs;
    for (int i = 1; i <= 50; ++i) devs.push_back(i);
    for (int i = 49; i > 0; --i) std::swap(devs[static_cast<std::size_t>(i)],
                                           devs[rng.uniform_index(static_cast<std::size_t>(i + 1))]);
    for (const double d : devs) {
        CalibrationRecord rec;
        rec.problem = base;
        rec.solution = traj_from_points({{0, 0}, {10, d}});
        records.push_back(rec);
    }
    const PredictorFn fixed = [](const PlanningProblem&) -> std::optional<PredictedPath> {
        PredictedPath p;
        p.points = {{0, 0}, {10, 0}};
        return p;
    };
    const auto model = calibrate(records, 0.1, fixed, "fixed", "test");
    CHECK(model.n_cal == 50);
    CHECK(model.q_hat == 46.0);
    CHECK(model.scores.front() == 1.0);
    CHECK(model.scores.back() == 50.0);
    CHECK(model.skipped == 0);

    // Predictor failures skip records and shrink n_cal.
    int calls = 0;
    const PredictorFn flaky = [&](const PlanningProblem& p) -> std::optional<PredictedPath> {
        if (++calls % 10 == 0) return std::nullopt;
        return fixed(p);
    };
    calls = 0;
    const auto partial = calibrate(records, 0.1, flaky, "flaky", "test");
    CHECK(partial.n_cal == 45);
    CHECK(partial.skipped == 5);
}

TEST_CASE("in_point_set combines the ball and the Voronoi cell") {
    PredictionRegions regions;
    regions.path = make_path({{0, 0}, {20, 0}});
    regions.q_hat = 5.0;

    CHECK(in_point_set(regions, 0, {0, 0}));
    CHECK(in_point_set(regions, 0, {5, 0}));          // on the ball boundary
    CHECK_FALSE(in_point_set(regions, 0, {5.0001, 0}));
    CHECK_FALSE(in_point_set(regions, 1, {5, 0}));    // wrong cell
    CHECK_FALSE(in_point_set(regions, 0, {11, 0}));   // cell of waypoint 1

    Rng rng(13);
    PredictionRegions r2;
    r2.path = random_path(rng, 25);
    r2.q_hat = 8.0;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q{rng.uniform(0, 100), rng.uniform(0, 100)};
        bool in_union = false;
        for (std::size_t k = 0; k < r2.path.points.size() && !in_union; ++k) {
            in_union = in_point_set(r2, k, q);
        }
        const std::size_t nearest = voronoi_index(r2.path, q);
        CHECK(in_union == (dist(q, r2.path.points[nearest]) <= r2.q_hat));
    }
}

TEST_CASE("prediction-set membership: score route equals decomposition route") {
    PredictionRegions regions;
    regions.path = make_path({{0, 0}, {50, 50}, {100, 100}});
    regions.q_hat = 10.0;
    CHECK(trajectory_in_prediction_set(regions, traj_from_points({{0, 0}, {50, 50}})));
    CHECK_FALSE(trajectory_in_prediction_set(regions, traj_from_points({{0, 0}, {0, 30}})));

    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        PredictionRegions r;
        r.path = random_path(rng, 2 + rng.uniform_index(20));
        r.q_hat = rng.uniform(0, 25);
        const auto traj = random_traj(rng, 1 + rng.uniform_index(40));
        CHECK(trajectory_in_prediction_set(r, traj) == trajectory_in_pointwise_union(r, traj));
    }
}

TEST_CASE("score-level exchangeability: held-out coverage near 1 - alpha") {
    // 500 rounds of 51 iid scores; calibrate on 50, test the held-out one.
    Rng rng(15);
    const double alpha = 0.1;
    int covered = 0;
    const int rounds = 500;
    for (int m = 0; m < rounds; ++m) {
        std::vector<double> scores;
        for (int i = 0; i < 50; ++i) scores.push_back(rng.gaussian_pair().first);
        const double held_out = rng.gaussian_pair().first;
        if (held_out <= conformal_quantile(scores, alpha)) ++covered;
    }
    const double coverage = static_cast<double>(covered) / rounds;
    CHECK(coverage >= 1.0 - alpha - 0.04);
    CHECK(coverage <= 1.0);
}

TEST_CASE("verify_record accepts good records and rejects broken ones") {
    CalibrationRecord rec;
    rec.problem.world = World({0, 0, 100, 100}, {});
    rec.problem.goal_center = {100, 100};
    rec.problem.goal_radius = 3.0;
    rec.solution = traj_from_points({{0, 0}, {100, 100}});
    std::string why;
    CHECK(verify_record(rec, &why));

    CalibrationRecord bad_start = rec;
    bad_start.solution = traj_from_points({{5, 5}, {100, 100}});
    CHECK_FALSE(verify_record(bad_start, &why));
    CHECK(why == "solution does not start at x_init");

    CalibrationRecord bad_goal = rec;
    bad_goal.solution = traj_from_points({{0, 0}, {50, 50}});
    CHECK_FALSE(verify_record(bad_goal, &why));
    CHECK(why == "solution does not end in the goal disc");

    CalibrationRecord colliding = rec;
    colliding.problem.world = World({0, 0, 100, 100}, {{40, 40, 60, 60}});
    CHECK_FALSE(verify_record(colliding, &why));
    CHECK(why == "solution collides");
}

TEST_CASE("calibration model JSON round-trip, including the +inf convention") {
    CalibrationModel m;
    m.q_hat = 7.25;
    m.alpha = 0.1;
    m.n_cal = 50;
    m.scores = {1.0, 2.0, 7.25};
    m.predictor_tag = "astar";
    m.distribution_tag = "D10";
    m.skipped = 2;
    const auto back = calibration_model_from_json(calibration_model_to_json(m));
    CHECK(back.q_hat == m.q_hat);
    CHECK(back.alpha == m.alpha);
    CHECK(back.n_cal == m.n_cal);
    CHECK(back.scores == m.scores);
    CHECK(back.predictor_tag == m.predictor_tag);
    CHECK(back.distribution_tag == m.distribution_tag);
    CHECK(back.skipped == m.skipped);

    m.q_hat = std::numeric_limits<double>::infinity();
    const auto j = calibration_model_to_json(m);
    CHECK(j.at("q_hat") == "inf");
    CHECK(std::isinf(calibration_model_from_json(j).q_hat));
}
