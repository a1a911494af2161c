#include "cprrt/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace cprrt {

std::size_t voronoi_index(const PredictedPath& path, const Vec2& q) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.points.size(); ++k) {
        const double d2 = dist_sq(path.points[k], q);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = k;
        }
    }
    return best;
}

double ncs(const PredictedPath& path, const Trajectory& trajectory) {
    double worst = 0.0;
    for (const State& s : trajectory.states) {
        const Vec2 q = s.pos();
        const double d = dist(path.points[voronoi_index(path, q)], q);
        worst = std::max(worst, d);
    }
    return worst;
}

bool verify_record(const CalibrationRecord& record, std::string* why) {
    const auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (record.solution.states.size() < 2) return fail("solution has fewer than 2 states");
    if (dist(record.solution.front().pos(), record.problem.x_init.pos()) > 1e-6) {
        return fail("solution does not start at x_init");
    }
    if (!in_goal(record.problem, record.solution.back())) {
        return fail("solution does not end in the goal disc");
    }
    for (std::size_t i = 0; i + 1 < record.solution.states.size(); ++i) {
        if (!segment_free(record.problem.world, record.solution.states[i].pos(),
                          record.solution.states[i + 1].pos(), 0.25)) {
            return fail("solution collides");
        }
    }
    return true;
}

double conformal_quantile(std::vector<double> scores, double alpha) {
    const int n = static_cast<int>(scores.size());
    const int r = static_cast<int>(std::ceil((1.0 - alpha) * (n + 1)));
    if (r > n) return std::numeric_limits<double>::infinity();
    std::sort(scores.begin(), scores.end());
    return scores[static_cast<std::size_t>(r - 1)];
}

CalibrationModel calibrate(const std::vector<CalibrationRecord>& records, double alpha,
                           const PredictorFn& predictor, const std::string& predictor_tag,
                           const std::string& distribution_tag) {
    CalibrationModel model;
    model.alpha = alpha;
    model.predictor_tag = predictor_tag;
    model.distribution_tag = distribution_tag;
    for (const auto& record : records) {
        const auto path = predictor(record.problem);
        if (!path) {
            ++model.skipped;
            std::cerr << "calibrate: predictor failed on a record, skipping\n";
            continue;
        }
        model.scores.push_back(ncs(*path, record.solution));
    }
    std::sort(model.scores.begin(), model.scores.end());
    model.n_cal = static_cast<int>(model.scores.size());
    model.q_hat = conformal_quantile(model.scores, alpha);
    if (!std::isfinite(model.q_hat)) {
        std::cerr << "calibrate: quantile rank exceeds n_cal=" << model.n_cal
                  << ", q_hat set to +inf\n";
    }
    return model;
}

bool in_point_set(const PredictionRegions& regions, std::size_t k, const Vec2& q) {
    if (voronoi_index(regions.path, q) != k) return false;
    return dist(regions.path.points[k], q) <= regions.q_hat;
}

bool trajectory_in_prediction_set(const PredictionRegions& regions,
                                  const Trajectory& trajectory) {
    return ncs(regions.path, trajectory) <= regions.q_hat;
}

bool trajectory_in_pointwise_union(const PredictionRegions& regions,
                                   const Trajectory& trajectory) {
    const std::size_t lp = regions.path.points.size();
    for (const State& s : trajectory.states) {
        const Vec2 q = s.pos();
        bool inside = false;
        for (std::size_t k = 0; k < lp && !inside; ++k) {
            inside = in_point_set(regions, k, q);
        }
        if (!inside) return false;
    }
    return true;
}

}  // namespace cprrt
