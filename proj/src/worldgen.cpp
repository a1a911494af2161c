#include "cprrt/worldgen.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cprrt/rng.hpp"

namespace cprrt {

namespace {

constexpr double kWorldSize = 100.0;
constexpr double kRasterCell = 0.5;
constexpr int kRasterN = 200;
// Clearance discs kept obstacle-free around the start and the goal. 8 m
// leaves room for the curvature-constrained models (turning radius 5 m) to
// enter and leave the corners; tighter clearances produce instances the
// Dubins and car models cannot finish.
constexpr double kStartClearRadius = 8.0;
constexpr double kGoalClearRadius = 8.0;
constexpr double kGoalRadius = 3.0;

// Occupancy bitmap over 0.5 m cell centers; mirrors World::occupancy_fraction.
class OccupancyRaster {
public:
    OccupancyRaster() : covered_(kRasterN * kRasterN, 0) {}

    int count() const { return count_; }
    double percent() const { return 100.0 * count_ / (kRasterN * kRasterN); }

    // Cells newly covered if `r` were added.
    int added_by(const Rect& r) const {
        int added = 0;
        for_cells(r, [&](int idx, const Vec2&) {
            if (!covered_[static_cast<std::size_t>(idx)]) ++added;
        });
        return added;
    }

    void add(const Rect& r) {
        for_cells(r, [&](int idx, const Vec2&) {
            if (!covered_[static_cast<std::size_t>(idx)]) {
                covered_[static_cast<std::size_t>(idx)] = 1;
                ++count_;
            }
        });
    }

private:
    template <typename F>
    void for_cells(const Rect& r, F&& f) const {
        const int ix0 = std::max(0, static_cast<int>(std::floor(r.xmin / kRasterCell)) - 1);
        const int ix1 = std::min(kRasterN - 1, static_cast<int>(std::ceil(r.xmax / kRasterCell)) + 1);
        const int iy0 = std::max(0, static_cast<int>(std::floor(r.ymin / kRasterCell)) - 1);
        const int iy1 = std::min(kRasterN - 1, static_cast<int>(std::ceil(r.ymax / kRasterCell)) + 1);
        for (int iy = iy0; iy <= iy1; ++iy) {
            for (int ix = ix0; ix <= ix1; ++ix) {
                const Vec2 c{(ix + 0.5) * kRasterCell, (iy + 0.5) * kRasterCell};
                if (r.contains(c)) f(iy * kRasterN + ix, c);
            }
        }
    }

    std::vector<char> covered_;
    int count_ = 0;
};

PlanningProblem make_problem(World world) {
    PlanningProblem p;
    p.world = std::move(world);
    p.x_init = State{};
    p.goal_center = {kWorldSize, kWorldSize};
    p.goal_radius = kGoalRadius;
    return p;
}

// Obstacles may merge into walls, so solvability has to be checked rather
// than assumed: BFS over free 1 m lattice cells from the start to the goal
// disc (the same lattice the path predictor plans on).
bool lattice_connected(const World& world, const Vec2& start, const Vec2& goal_center,
                       double goal_radius) {
    constexpr int n = static_cast<int>(kWorldSize) + 1;
    std::vector<char> blocked(n * n), seen(n * n, 0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            blocked[static_cast<std::size_t>(y * n + x)] =
                !world.is_free({static_cast<double>(x), static_cast<double>(y)});
    const int sx = std::clamp(static_cast<int>(std::lround(start.x)), 0, n - 1);
    const int sy = std::clamp(static_cast<int>(std::lround(start.y)), 0, n - 1);
    if (blocked[static_cast<std::size_t>(sy * n + sx)]) return false;
    std::vector<int> stack{sy * n + sx};
    seen[static_cast<std::size_t>(sy * n + sx)] = 1;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cx = cur % n, cy = cur / n;
        if (dist({static_cast<double>(cx), static_cast<double>(cy)}, goal_center) <= goal_radius) {
            return true;
        }
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= n || ny < 0 || ny >= n) continue;
                const int idx = ny * n + nx;
                if (seen[static_cast<std::size_t>(idx)] || blocked[static_cast<std::size_t>(idx)]) continue;
                seen[static_cast<std::size_t>(idx)] = 1;
                stack.push_back(idx);
            }
    }
    return false;
}

bool try_generate_density(int density_percent, Rng& rng, std::vector<Rect>& out) {
    const Vec2 start{0.0, 0.0};
    const Vec2 goal{kWorldSize, kWorldSize};
    OccupancyRaster raster;
    out.clear();

    const double target = density_percent;
    int attempts = 0;
    const int max_attempts = 200000;
    while (raster.percent() < target - 0.5 && attempts < max_attempts) {
        ++attempts;
        const double remaining = target - raster.percent();
        double lo = 4.0, hi = 16.0;
        if (remaining < 3.0) {
            lo = 1.0;
            hi = 6.0;
        }
        const double w = rng.uniform(lo, hi);
        const double h = rng.uniform(lo, hi);
        const double x = rng.uniform(0.0, kWorldSize - w);
        const double y = rng.uniform(0.0, kWorldSize - h);
        Rect rect{x, y, x + w, y + h};
        // Passages narrower than kMinGap would be threaded by the
        // unit-lattice predictor but not by the curvature-constrained
        // models (turning radius 5 m). Obstacles therefore either merge
        // with what they nearly touch or keep a real gap: candidates at a
        // small positive distance from an existing rectangle are rejected,
        // and edges close to the boundary snap onto it.
        constexpr double kMinGap = 4.0;
        if (rect.xmin < kMinGap) rect.xmin = 0.0;
        if (rect.ymin < kMinGap) rect.ymin = 0.0;
        if (rect.xmax > kWorldSize - kMinGap) rect.xmax = kWorldSize;
        if (rect.ymax > kWorldSize - kMinGap) rect.ymax = kWorldSize;
        bool pinches = false;
        for (const Rect& o : out) {
            const double gx = std::max({0.0, o.xmin - rect.xmax, rect.xmin - o.xmax});
            const double gy = std::max({0.0, o.ymin - rect.ymax, rect.ymin - o.ymax});
            const double gap = std::hypot(gx, gy);
            if (gap > 0.0 && gap < kMinGap) {
                pinches = true;
                break;
            }
        }
        if (pinches) continue;
        if (rect.intersects_disc(start, kStartClearRadius)) continue;
        if (rect.intersects_disc(goal, kGoalClearRadius)) continue;
        const double next_pct = raster.percent() + 100.0 * raster.added_by(rect) / (kRasterN * kRasterN);
        if (next_pct > target + 1.5) continue;
        raster.add(rect);
        out.push_back(rect);
    }
    return std::abs(raster.percent() - target) <= 2.0;
}

}  // namespace

PlanningProblem generate_density_world(int density_percent, std::uint64_t seed) {
    if (density_percent < 1 || density_percent > 60) {
        throw std::invalid_argument("density_percent must be in [1, 60]");
    }
    std::vector<Rect> obstacles;
    for (int round = 0; round < 25; ++round) {
        Rng rng(mix_seed(seed, 0xD1C3ULL, static_cast<std::uint64_t>(density_percent),
                         static_cast<std::uint64_t>(round)));
        if (!try_generate_density(density_percent, rng, obstacles)) continue;
        World world({0.0, 0.0, kWorldSize, kWorldSize}, std::move(obstacles), density_percent);
        if (!lattice_connected(world, {0.0, 0.0}, {kWorldSize, kWorldSize}, kGoalRadius)) {
            obstacles.clear();
            continue;  // merged obstacles sealed the goal off; redraw
        }
        return make_problem(std::move(world));
    }
    throw std::runtime_error("generate_density_world: could not reach target occupancy (density too high for clearance constraints)");
}

PlanningProblem generate_maze_world(std::uint64_t seed) {
    constexpr int n = 6;           // coarse grid
    constexpr double cell = 100.0 / 6;   // meters
    constexpr double half_wall = 1.0;

    // Carve a perfect maze with an iterative recursive backtracker.
    Rng rng(mix_seed(seed, 0x3A2EULL));
    std::vector<char> visited(n * n, 0);
    std::vector<char> passage_east(n * n, 0);   // between (i,j) and (i+1,j)
    std::vector<char> passage_north(n * n, 0);  // between (i,j) and (i,j+1)
    std::vector<int> stack;
    stack.push_back(0);
    visited[0] = 1;
    while (!stack.empty()) {
        const int cur = stack.back();
        const int ci = cur % n;
        const int cj = cur / n;
        std::array<int, 4> dirs{0, 1, 2, 3};  // E, N, W, S
        for (int k = 3; k > 0; --k) {
            std::swap(dirs[static_cast<std::size_t>(k)], dirs[rng.uniform_index(static_cast<std::size_t>(k + 1))]);
        }
        bool advanced = false;
        for (const int d : dirs) {
            const int ni = ci + (d == 0 ? 1 : d == 2 ? -1 : 0);
            const int nj = cj + (d == 1 ? 1 : d == 3 ? -1 : 0);
            if (ni < 0 || ni >= n || nj < 0 || nj >= n) continue;
            const int nxt = nj * n + ni;
            if (visited[static_cast<std::size_t>(nxt)]) continue;
            if (d == 0) passage_east[static_cast<std::size_t>(cur)] = 1;
            if (d == 2) passage_east[static_cast<std::size_t>(nxt)] = 1;
            if (d == 1) passage_north[static_cast<std::size_t>(cur)] = 1;
            if (d == 3) passage_north[static_cast<std::size_t>(nxt)] = 1;
            visited[static_cast<std::size_t>(nxt)] = 1;
            stack.push_back(nxt);
            advanced = true;
            break;
        }
        if (!advanced) stack.pop_back();
    }

    // Walls on every uncarved interior edge, extended one half-thickness past
    // the edge ends so corners close.
    std::vector<Rect> walls;
    const auto clipped = [](double a, double b, double c, double d) {
        return Rect{std::max(0.0, a), std::max(0.0, b), std::min(kWorldSize, c),
                    std::min(kWorldSize, d)};
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int idx = j * n + i;
            if (i + 1 < n && !passage_east[static_cast<std::size_t>(idx)]) {
                const double ex = (i + 1) * cell;
                walls.push_back(clipped(ex - half_wall, j * cell - half_wall,
                                        ex + half_wall, (j + 1) * cell + half_wall));
            }
            if (j + 1 < n && !passage_north[static_cast<std::size_t>(idx)]) {
                const double ey = (j + 1) * cell;
                walls.push_back(clipped(i * cell - half_wall, ey - half_wall,
                                        (i + 1) * cell + half_wall, ey + half_wall));
            }
        }
    }
    return make_problem(World({0.0, 0.0, kWorldSize, kWorldSize}, std::move(walls)));
}

}  // namespace cprrt
