#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cprrt/dynamics.hpp"
#include "cprrt/sampler.hpp"
#include "cprrt/world.hpp"

namespace cprrt {

struct TreeNode {
    State state;
    int parent = -1;           // -1 for the root
    Trajectory incoming;       // empty for the root
    double cost = 0.0;         // cost-to-come
    std::vector<int> children;
};

struct Tree {
    std::vector<TreeNode> nodes;
};

struct PlannerConfig {
    std::uint64_t max_iterations = 20000;
    double gamma = 0.0;   // shrinking-ball constant; 0 = estimate from free area
    int dimension = 2;    // d in the r_n rule
    std::uint64_t seed = 0;
    bool stop_at_first = false;
    bool validate = false;  // run tree invariant checks during the run
};

struct PlanStats {
    bool solved = false;
    std::uint64_t iterations_to_first = 0;  // valid iff solved
    double time_to_first_s = 0.0;           // valid iff solved
    double first_cost = 0.0;                // cost of the first goal node at discovery
    double best_cost = std::numeric_limits<double>::infinity();
    std::uint64_t iterations_run = 0;
    std::size_t node_count = 0;
    std::uint64_t sampler_fallbacks = 0;
    double gamma_used = 0.0;
};

struct PlanResult {
    Tree tree;
    std::optional<Trajectory> best;
    PlanStats stats;
};

// RRT* (sample - nearest - steer - obstacle check - near - choose parent -
// extend - rewire) with the sampler picked by cfg. `regions` is required for
// the cp sampler and ignored otherwise.
PlanResult plan(const PlanningProblem& problem, const ModelParams& params,
                const SamplerConfig& sampler, const PlannerConfig& cfg,
                const PredictionRegions* regions = nullptr);

// Lowest-cost goal-reaching path by backtracking, or nullopt.
std::optional<Trajectory> extract_solution(const Tree& tree, const PlanningProblem& problem);

// Throws std::logic_error when a tree invariant is violated.
void validate_tree(const Tree& tree, const PlanningProblem& problem,
                   const ModelParams& params);

}  // namespace cprrt
