#pragma once

#include <cstdint>

#include "cprrt/world.hpp"

namespace cprrt {

// Random clutter world: axis-aligned rectangles are added until the union
// covers density_percent of the area within +/-2 points (cell-center
// rasterization at 0.5 m). A 2 m disc around the start and the goal disc are
// kept clear. Deterministic given (density_percent, seed). Throws
// std::runtime_error when the target occupancy cannot be reached.
PlanningProblem generate_density_world(int density_percent, std::uint64_t seed);

// Perfect maze on a 10x10 coarse grid (recursive backtracker), walls as 2 m
// thick rectangles. Start (0,0), goal disc of radius 3 around (100,100).
// Deterministic given seed.
PlanningProblem generate_maze_world(std::uint64_t seed);

}  // namespace cprrt
