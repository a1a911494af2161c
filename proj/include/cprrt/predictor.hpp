#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cprrt/world.hpp"

namespace cprrt {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PathSource { astar, external };

// Positional waypoint path from a predictor. First point is the start
// position, last point lies inside the goal disc.
struct PredictedPath {
    std::vector<Vec2> points;
    PathSource source = PathSource::astar;

    std::size_t size() const { return points.size(); }
};

// A* on a 1 m lattice over the world bounds, 8-connected, Euclidean
// heuristic, straight cost 1 and diagonal cost sqrt(2). A lattice cell is
// occupied iff its center is not free. Targets the free in-disc cell nearest
// the goal center. Returns nullopt when no lattice path exists.
std::optional<PredictedPath> astar_predict(const PlanningProblem& problem);

// Reads a JSON array of [x, y] points, clamps them to the world bounds and
// normalizes the endpoints (prepend start if the first point is off by more
// than 0.5 m, append the goal center if the last point is outside the goal
// disc). Points inside obstacles are kept. Throws ParseError / EmptyPathError.
PredictedPath load_external_path(const std::string& file_path,
                                 const PlanningProblem& problem);

}  // namespace cprrt
