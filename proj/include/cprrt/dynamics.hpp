#pragma once

#include <optional>

#include "cprrt/dubins.hpp"
#include "cprrt/state.hpp"

namespace cprrt {

// Nearest-neighbor metric. Holonomic: Euclidean. Dubins: shortest-path length
// from a to b (asymmetric). Car5d: weighted Euclidean over (x, y, theta).
double distance(const ModelParams& params, const State& a, const State& b);

// Grows a feasible trajectory from `from` toward `toward`, at most params.eta
// long. Returns nullopt when the extension failed to make progress (car5d
// steering may not converge). `from == toward` yields a single-state
// trajectory.
std::optional<Trajectory> steer(const ModelParams& params, const State& from,
                                const State& toward);

// Exact (or tolerance-snapped, for car5d) connection from `from` to `to`,
// used by ChooseParent and Rewire. No length cap for holonomic/dubins; car5d
// fails when the target is not reached within the snap tolerance.
std::optional<Trajectory> connect(const ModelParams& params, const State& from,
                                  const State& to);

// How far a car5d connection endpoint may sit from the requested target.
constexpr double kCar5dSnapTol = 0.3;

}  // namespace cprrt
