#pragma once

#include <optional>
#include <vector>

#include "cprrt/geom.hpp"
#include "cprrt/state.hpp"

namespace cprrt {

// 2-D workspace: rectangular bounds minus a union of rectangular obstacles.
// Immutable after construction; finalize() must be called after the obstacle
// list is filled (constructors and loaders do this).
class World {
public:
    World() : bounds_{0.0, 0.0, 100.0, 100.0} {}
    World(Rect bounds, std::vector<Rect> obstacles,
          std::optional<int> density_label = std::nullopt);

    const Rect& bounds() const { return bounds_; }
    const std::vector<Rect>& obstacles() const { return obstacles_; }
    std::optional<int> density_label() const { return density_label_; }

    double diagonal() const {
        return std::hypot(bounds_.width(), bounds_.height());
    }

    // True iff p is inside bounds and outside every obstacle. Obstacle
    // boundaries count as occupied; world bounds count as inside.
    bool is_free(const Vec2& p) const;

    // Fraction of the bounds area covered by the obstacle union, measured by
    // cell-center rasterization.
    double occupancy_fraction(double cell = 0.5) const;

private:
    Rect bounds_;
    std::vector<Rect> obstacles_;
    std::optional<int> density_label_;

    // Uniform-grid bucket index over obstacle ids; pure accelerator, results
    // identical to scanning the full list.
    double cell_size_ = 0.0;
    int grid_nx_ = 0;
    int grid_ny_ = 0;
    std::vector<std::vector<int>> buckets_;

    void finalize();
};

// True iff every sample at spacing <= resolution along [a, b], endpoints
// included, is free.
bool segment_free(const World& world, const Vec2& a, const Vec2& b,
                  double resolution = 0.25);

struct PlanningProblem {
    World world;
    State x_init;           // positional part must be free
    Vec2 goal_center;
    double goal_radius = 3.0;
};

// Goal test on the positional part only; the goal disc is closed.
bool in_goal(const PlanningProblem& problem, const State& state);

}  // namespace cprrt
