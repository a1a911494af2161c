#include "cprrt/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <algorithm>

#include <json.hpp>

namespace cprrt {

namespace {

struct Lattice {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0;

    Vec2 point(int ix, int iy) const { return {x0 + ix, y0 + iy}; }
    int index(int ix, int iy) const { return iy * nx + ix; }
};

// Heap keys are floats: cell costs on the (straight, diagonal) lattice are
// separated by ~8e-4 or more, far above float rounding at this scale, so
// narrower entries cannot flip a pop across genuinely different costs.
struct OpenEntry {
    float f;
    float h;
    int idx;
    bool operator>(const OpenEntry& o) const {
        if (f != o.f) return f > o.f;
        if (h != o.h) return h > o.h;
        return idx > o.idx;
    }
};

constexpr double kSqrt2 = 1.4142135623730951;

}  // namespace

std::optional<PredictedPath> astar_predict(const PlanningProblem& problem) {
    const World& world = problem.world;
    const Rect& b = world.bounds();
    Lattice g;
    g.x0 = b.xmin;
    g.y0 = b.ymin;
    g.nx = static_cast<int>(std::floor(b.width())) + 1;
    g.ny = static_cast<int>(std::floor(b.height())) + 1;

    // Work on a one-cell occupied border so the expansion loop needs no
    // bounds checks. Padded indices order cells the same way as raw ones, so
    // the (f, h, index) tie-break is unchanged.
    const int W = g.nx + 2;
    const int H = g.ny + 2;
    const auto pad_index = [W](int ix, int iy) { return (iy + 1) * W + (ix + 1); };
    const auto pad_point = [&](int pidx) {
        return g.point(pidx % W - 1, pidx / W - 1);
    };

    thread_local std::vector<char> occupied;
    occupied.assign(static_cast<std::size_t>(W) * H, 1);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            occupied[static_cast<std::size_t>(pad_index(ix, iy))] = !world.is_free(g.point(ix, iy));

    const auto to_cell = [&](const Vec2& p, int& ix, int& iy) {
        ix = std::clamp(static_cast<int>(std::lround(p.x - g.x0)), 0, g.nx - 1);
        iy = std::clamp(static_cast<int>(std::lround(p.y - g.y0)), 0, g.ny - 1);
    };

    int sx, sy;
    to_cell(problem.x_init.pos(), sx, sy);
    if (occupied[static_cast<std::size_t>(pad_index(sx, sy))]) return std::nullopt;

    // Free in-disc lattice cells, nearest to the goal center first.
    std::vector<std::pair<double, int>> goal_cells;
    {
        const Vec2 c = problem.goal_center;
        const double r = problem.goal_radius;
        const int ix0 = std::max(0, static_cast<int>(std::ceil(c.x - r - g.x0)));
        const int ix1 = std::min(g.nx - 1, static_cast<int>(std::floor(c.x + r - g.x0)));
        const int iy0 = std::max(0, static_cast<int>(std::ceil(c.y - r - g.y0)));
        const int iy1 = std::min(g.ny - 1, static_cast<int>(std::floor(c.y + r - g.y0)));
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix) {
                const int idx = pad_index(ix, iy);
                if (occupied[static_cast<std::size_t>(idx)]) continue;
                const double d = dist(g.point(ix, iy), c);
                if (d <= r) goal_cells.emplace_back(d, idx);
            }
        std::sort(goal_cells.begin(), goal_cells.end());
    }
    if (goal_cells.empty()) return std::nullopt;
    const int target = goal_cells.front().second;
    const Vec2 target_pt = pad_point(target);

    // Scratch buffers persist across calls; the benchmark pipeline predicts
    // once per run and reallocation otherwise dominates small searches.
    const std::size_t n = static_cast<std::size_t>(W) * H;
    thread_local std::vector<double> cost;
    thread_local std::vector<int> parent;
    thread_local std::vector<char> closed;
    cost.assign(n, std::numeric_limits<double>::infinity());
    parent.assign(n, -1);
    closed.assign(n, 0);
    thread_local std::vector<OpenEntry> open;
    open.clear();
    const auto push_open = [&](const OpenEntry& e) {
        open.push_back(e);
        std::push_heap(open.begin(), open.end(), std::greater<>{});
    };
    const auto pop_open = [&] {
        std::pop_heap(open.begin(), open.end(), std::greater<>{});
        const OpenEntry e = open.back();
        open.pop_back();
        return e;
    };

    const double tx = target_pt.x, ty = target_pt.y;
    const auto heuristic = [&](int pidx) {
        const double dx = g.x0 + (pidx % W - 1) - tx;
        const double dy = g.y0 + (pidx / W - 1) - ty;
        return std::sqrt(dx * dx + dy * dy);
    };

    const int start = pad_index(sx, sy);
    cost[static_cast<std::size_t>(start)] = 0.0;
    const float h0 = static_cast<float>(heuristic(start));
    push_open({h0, h0, start});

    const int off[8] = {-W - 1, -W, -W + 1, -1, 1, W - 1, W, W + 1};
    const double step_cost[8] = {kSqrt2, 1.0, kSqrt2, 1.0, 1.0, kSqrt2, 1.0, kSqrt2};

    int reached = -1;
    while (!open.empty()) {
        const OpenEntry top = pop_open();
        if (closed[static_cast<std::size_t>(top.idx)]) continue;
        closed[static_cast<std::size_t>(top.idx)] = 1;
        if (top.idx == target) {
            reached = top.idx;
            break;
        }
        const double base = cost[static_cast<std::size_t>(top.idx)];
        for (int k = 0; k < 8; ++k) {
            const int nidx = top.idx + off[k];
            if (occupied[static_cast<std::size_t>(nidx)] || closed[static_cast<std::size_t>(nidx)]) continue;
            const double gc = base + step_cost[k];
            if (gc < cost[static_cast<std::size_t>(nidx)]) {
                cost[static_cast<std::size_t>(nidx)] = gc;
                parent[static_cast<std::size_t>(nidx)] = top.idx;
                const float h = static_cast<float>(heuristic(nidx));
                push_open({static_cast<float>(gc) + h, h, nidx});
            }
        }
    }

    // The nearest in-disc cell may be unreachable while another is not; the
    // exhausted search above already holds optimal costs for the whole
    // reachable component, so fall back without re-running.
    if (reached < 0) {
        for (const auto& [d, idx] : goal_cells) {
            if (std::isfinite(cost[static_cast<std::size_t>(idx)])) {
                reached = idx;
                break;
            }
        }
    }
    if (reached < 0) return std::nullopt;

    PredictedPath path;
    path.source = PathSource::astar;
    for (int cur = reached; cur >= 0; cur = parent[static_cast<std::size_t>(cur)]) {
        path.points.push_back(pad_point(cur));
    }
    std::reverse(path.points.begin(), path.points.end());
    path.points.front() = problem.x_init.pos();
    if (path.points.size() < 2) path.points.push_back(pad_point(reached));
    return path;
}

PredictedPath load_external_path(const std::string& file_path, const PlanningProblem& problem) {
    std::ifstream in(file_path);
    if (!in) throw ParseError("cannot open path file: " + file_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid path file: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("path file must be a JSON array of [x, y] points");

    const Rect& b = problem.world.bounds();
    PredictedPath path;
    path.source = PathSource::external;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2) {
            throw ParseError("path points must be [x, y] pairs");
        }
        Vec2 p{item[0].get<double>(), item[1].get<double>()};
        p.x = std::clamp(p.x, b.xmin, b.xmax);
        p.y = std::clamp(p.y, b.ymin, b.ymax);
        path.points.push_back(p);
    }

    const Vec2 start = problem.x_init.pos();
    if (!path.points.empty() && dist(path.points.front(), start) > 0.5) {
        path.points.insert(path.points.begin(), start);
    }
    if (!path.points.empty() &&
        dist(path.points.back(), problem.goal_center) > problem.goal_radius) {
        path.points.push_back(problem.goal_center);
    }
    if (path.points.size() < 2) {
        throw EmptyPathError("external path has fewer than 2 points after normalization");
    }
    return path;
}

}  // namespace cprrt
