#include "cprrt/world.hpp"

#include <cmath>
#include <stdexcept>

namespace cprrt {

World::World(Rect bounds, std::vector<Rect> obstacles, std::optional<int> density_label)
    : bounds_(bounds), obstacles_(std::move(obstacles)), density_label_(density_label) {
    for (const auto& ob : obstacles_) {
        if (!bounds_.contains_rect(ob)) {
            throw std::invalid_argument("obstacle outside world bounds");
        }
    }
    finalize();
}

void World::finalize() {
    // ~2 m buckets keep per-point candidate lists short in dense worlds.
    cell_size_ = 2.0;
    grid_nx_ = std::max(1, static_cast<int>(std::ceil(bounds_.width() / cell_size_)));
    grid_ny_ = std::max(1, static_cast<int>(std::ceil(bounds_.height() / cell_size_)));
    buckets_.assign(static_cast<std::size_t>(grid_nx_) * grid_ny_, {});
    for (int idx = 0; idx < static_cast<int>(obstacles_.size()); ++idx) {
        const Rect& ob = obstacles_[static_cast<std::size_t>(idx)];
        const int ix0 = std::clamp(static_cast<int>((ob.xmin - bounds_.xmin) / cell_size_), 0, grid_nx_ - 1);
        const int ix1 = std::clamp(static_cast<int>((ob.xmax - bounds_.xmin) / cell_size_), 0, grid_nx_ - 1);
        const int iy0 = std::clamp(static_cast<int>((ob.ymin - bounds_.ymin) / cell_size_), 0, grid_ny_ - 1);
        const int iy1 = std::clamp(static_cast<int>((ob.ymax - bounds_.ymin) / cell_size_), 0, grid_ny_ - 1);
        for (int iy = iy0; iy <= iy1; ++iy) {
            for (int ix = ix0; ix <= ix1; ++ix) {
                buckets_[static_cast<std::size_t>(iy) * grid_nx_ + ix].push_back(idx);
            }
        }
    }
}

bool World::is_free(const Vec2& p) const {
    if (!bounds_.contains(p)) return false;
    const int ix = std::clamp(static_cast<int>((p.x - bounds_.xmin) / cell_size_), 0, grid_nx_ - 1);
    const int iy = std::clamp(static_cast<int>((p.y - bounds_.ymin) / cell_size_), 0, grid_ny_ - 1);
    for (const int idx : buckets_[static_cast<std::size_t>(iy) * grid_nx_ + ix]) {
        if (obstacles_[static_cast<std::size_t>(idx)].contains(p)) return false;
    }
    return true;
}

double World::occupancy_fraction(double cell) const {
    const int nx = static_cast<int>(std::round(bounds_.width() / cell));
    const int ny = static_cast<int>(std::round(bounds_.height() / cell));
    long occupied = 0;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Vec2 c{bounds_.xmin + (ix + 0.5) * cell, bounds_.ymin + (iy + 0.5) * cell};
            if (!is_free(c)) ++occupied;
        }
    }
    return static_cast<double>(occupied) / (static_cast<double>(nx) * ny);
}

bool segment_free(const World& world, const Vec2& a, const Vec2& b, double resolution) {
    if (resolution <= 0.0) throw std::invalid_argument("resolution must be positive");
    const double len = dist(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / resolution)));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        if (!world.is_free({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)})) return false;
    }
    return true;
}

bool in_goal(const PlanningProblem& problem, const State& state) {
    return dist(state.pos(), problem.goal_center) <= problem.goal_radius;
}

}  // namespace cprrt
