#pragma once

#include <cstdint>

#include "cprrt/conformal.hpp"
#include "cprrt/rng.hpp"
#include "cprrt/state.hpp"
#include "cprrt/world.hpp"

namespace cprrt {

struct SamplerConfig {
    enum class Kind { uniform, goal_biased, cp };
    enum class KSelection { uniform_random, cyclic };

    Kind kind = Kind::uniform;
    double p_bias = 0.5;         // cp: mass on the biased component, in [0, 1)
    double goal_bias_prob = 0.1; // goal_biased: probability of the Gaussian draw
    double goal_std = 10.0;      // goal_biased: per-axis std in meters
    KSelection k_selection = KSelection::uniform_random;
    int max_attempts = 200;      // rejection cap per biased draw
};

// Uniform draw over free space; non-positional dims uniform over their
// ranges. All samplers return states whose position is free.
State sample_uniform_free(const World& world, const ModelParams& params, Rng& rng);

// Gaussian around the goal center with probability goal_bias_prob, uniform
// otherwise. Gaussian draws are rejected until free (capped, then uniform).
State goal_biased_sample(const PlanningProblem& problem, const ModelParams& params,
                         const SamplerConfig& cfg, Rng& rng);

// Early-exit variant of in_point_set used in the rejection loop; same
// predicate, evaluated against squared distances with neighbors-first
// competitor order.
bool in_point_set_fast(const PredictionRegions& regions, std::size_t k, const Vec2& q);

// The CP-driven draw: with probability p_bias, uniform over
// A_k = free space, intersected with C_k for a selected waypoint k, via
// rejection inside the ball's bounding box; otherwise uniform over free
// space. An empty A_k falls back to the uniform draw and bumps *fallbacks.
// `iteration` drives the cyclic k selection.
State sample_cp(const PredictionRegions& regions, const World& world,
                const ModelParams& params, const SamplerConfig& cfg, Rng& rng,
                std::uint64_t iteration, std::uint64_t* fallbacks);

}  // namespace cprrt
