#pragma once

#include <array>

#include "cprrt/state.hpp"

namespace cprrt {

enum class DubinsSeg : char { left = 'L', straight = 'S', right = 'R' };

enum class DubinsWord { LSL, RSR, LSR, RSL, RLR, LRL };

// A concrete Dubins path: three segments with nonnegative arc lengths in
// meters, traversed at unit speed from q0.
struct DubinsPath {
    State q0;
    double radius = 5.0;
    DubinsWord word = DubinsWord::LSL;
    std::array<double, 3> seg_len{0.0, 0.0, 0.0};

    double length() const { return seg_len[0] + seg_len[1] + seg_len[2]; }
    std::array<DubinsSeg, 3> segments() const;

    // Pose after arc length s (clamped to [0, length()]).
    State at(double s) const;
};

// Shortest of the six Dubins words between two poses.
DubinsPath dubins_solve(const State& q0, const State& q1, double kappa_max);

// Length of the shortest Dubins path; cheaper than dubins_solve when only the
// metric value is needed.
double dubins_length(const State& q0, const State& q1, double kappa_max);

// Discretizes a solved path into a trajectory, optionally truncated to the
// first max_length meters. States are spaced at most `spacing` apart with
// cuts at curvature switches, so re-integrating the control record
// reproduces them.
Trajectory dubins_trajectory(const DubinsPath& path, double spacing,
                             double max_length = -1.0);

Trajectory dubins_shortest_path(const State& q0, const State& q1, double kappa_max,
                                double spacing = 0.25);

}  // namespace cprrt
