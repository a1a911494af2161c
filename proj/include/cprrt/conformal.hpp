#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cprrt/predictor.hpp"
#include "cprrt/state.hpp"
#include "cprrt/world.hpp"

namespace cprrt {

// Index of the waypoint whose Voronoi cell contains q; ties go to the lowest
// index so the cells partition the plane.
std::size_t voronoi_index(const PredictedPath& path, const Vec2& q);

// Nonconformity score: the largest distance from any trajectory sample to
// its Voronoi-assigned waypoint. Positional parts only; the trajectory must
// be discretized at <= 0.25 m spacing.
double ncs(const PredictedPath& path, const Trajectory& trajectory);

struct CalibrationRecord {
    PlanningProblem problem;
    Trajectory solution;
};

// Checks the record invariants: solution starts at x_init, ends inside the
// goal disc, and is collision-free under 0.25 m segment checks.
bool verify_record(const CalibrationRecord& record, std::string* why = nullptr);

struct CalibrationModel {
    double q_hat = std::numeric_limits<double>::infinity();
    double alpha = 0.1;
    int n_cal = 0;
    std::vector<double> scores;  // ascending, retained for audit
    std::string predictor_tag;
    std::string distribution_tag;
    int skipped = 0;  // records dropped on predictor failure
};

// r-th smallest score with r = ceil((1-alpha)(n+1)); +inf when r > n.
double conformal_quantile(std::vector<double> scores, double alpha);

using PredictorFn = std::function<std::optional<PredictedPath>(const PlanningProblem&)>;

// Scores every record with the predictor and takes the conformal quantile.
// Records where the predictor fails are skipped (n_cal shrinks) with a
// warning on stderr.
CalibrationModel calibrate(const std::vector<CalibrationRecord>& records, double alpha,
                           const PredictorFn& predictor,
                           const std::string& predictor_tag = "astar",
                           const std::string& distribution_tag = "");

// Point-wise prediction sets C_k: ball of radius q_hat around waypoint k
// intersected with its Voronoi cell.
struct PredictionRegions {
    PredictedPath path;
    double q_hat = std::numeric_limits<double>::infinity();
};

bool in_point_set(const PredictionRegions& regions, std::size_t k, const Vec2& q);

// Membership via the score: ncs(path, trajectory) <= q_hat.
bool trajectory_in_prediction_set(const PredictionRegions& regions,
                                  const Trajectory& trajectory);

// Membership via the decomposition: every sample lies in some C_k. Agrees
// exactly with trajectory_in_prediction_set; both routes are exposed so the
// equivalence is testable.
bool trajectory_in_pointwise_union(const PredictionRegions& regions,
                                   const Trajectory& trajectory);

}  // namespace cprrt
