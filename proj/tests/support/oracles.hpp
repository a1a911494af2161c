#pragma once

// Independent oracle implementations used only by tests. These deliberately
// avoid the library code paths they are checking.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cprrt/predictor.hpp"
#include "cprrt/state.hpp"
#include "cprrt/world.hpp"

namespace cprrt::oracle {

// Monte-Carlo estimate of the obstacle-union fraction of the bounds area.
double mc_occupancy(const World& world, int samples, std::uint64_t seed);

// Plain scan over the obstacle list (no spatial index).
bool brute_is_free(const World& world, const Vec2& p);

// Exact closed-rect intersection test for the whole segment; also reports
// the longest chord any single rectangle cuts out of the segment.
bool exact_segment_blocked(const World& world, const Vec2& a, const Vec2& b,
                           double* max_chord = nullptr);

// BFS over the 10x10 coarse maze-cell graph; edges exist when the straight
// segment between adjacent cell centers is free.
bool maze_cells_connected(const World& world);

// Dijkstra on the same unit lattice as the predictor, tracking integer
// straight/diagonal step counts so costs are exactly reproducible.
struct GridCost {
    int straight = 0;
    int diagonal = 0;
    double cost() const;
};
std::optional<GridCost> dijkstra_grid_cost(const PlanningProblem& problem);

// Step counts recovered from a lattice path (consecutive unit/diagonal moves).
GridCost count_grid_steps(const std::vector<Vec2>& points);

// Per-word Dubins lengths by explicit tangent-circle construction; +inf when
// a word is infeasible. Indices follow the library's word order
// (LSL, RSR, LSR, RSL, RLR, LRL). CCC words take the shorter of the two
// middle-circle placements.
std::array<double, 6> dubins_word_lengths(const State& q0, const State& q1, double kappa_max);

// Re-integrates a trajectory from its first state and control record with
// dense RK4; returns the largest position error against the stored states.
double reintegration_error(const Trajectory& t, Model model);

// Linear-scan nearest-waypoint assignment with the lowest-index tie rule.
std::size_t brute_voronoi_index(const PredictedPath& path, const Vec2& q);

// Literal two-stage score: partition samples into Voronoi cells, take
// per-cell maxima, then the overall max.
double ncs_two_stage(const PredictedPath& path, const Trajectory& trajectory);

// Sort-and-index conformal quantile.
double quantile_sort_index(std::vector<double> scores, double alpha);

}  // namespace cprrt::oracle
