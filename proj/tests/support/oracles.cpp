#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "cprrt/rng.hpp"

namespace cprrt::oracle {

double mc_occupancy(const World& world, int samples, std::uint64_t seed) {
    Rng rng(seed);
    const Rect& b = world.bounds();
    int occupied = 0;
    for (int i = 0; i < samples; ++i) {
        const Vec2 p{rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax)};
        bool inside = false;
        for (const Rect& r : world.obstacles()) {
            if (r.contains(p)) {
                inside = true;
                break;
            }
        }
        if (inside) ++occupied;
    }
    return static_cast<double>(occupied) / samples;
}

bool brute_is_free(const World& world, const Vec2& p) {
    if (!world.bounds().contains(p)) return false;
    for (const Rect& r : world.obstacles()) {
        if (r.contains(p)) return false;
    }
    return true;
}

bool exact_segment_blocked(const World& world, const Vec2& a, const Vec2& b,
                           double* max_chord) {
    if (max_chord) *max_chord = 0.0;
    if (!world.bounds().contains(a) || !world.bounds().contains(b)) {
        if (max_chord) *max_chord = std::numeric_limits<double>::infinity();
        return true;  // bounds are convex, so an endpoint outside means blocked
    }
    const double len = dist(a, b);
    bool blocked = false;
    for (const Rect& r : world.obstacles()) {
        double t0, t1;
        if (clip_segment_rect(a, b, r, t0, t1)) {
            blocked = true;
            if (max_chord) *max_chord = std::max(*max_chord, (t1 - t0) * len);
        }
    }
    return blocked;
}

bool maze_cells_connected(const World& world) {
    constexpr int n = 6;
    constexpr double cell = 100.0 / 6;
    const auto center = [&](int i, int j) { return Vec2{(i + 0.5) * cell, (j + 0.5) * cell}; };
    std::vector<char> seen(n * n, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop();
        const int ci = cur % n, cj = cur / n;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int ni = ci + di[d], nj = cj + dj[d];
            if (ni < 0 || ni >= n || nj < 0 || nj >= n) continue;
            const int nidx = nj * n + ni;
            if (seen[static_cast<std::size_t>(nidx)]) continue;
            if (!segment_free(world, center(ci, cj), center(ni, nj), 0.25)) continue;
            seen[static_cast<std::size_t>(nidx)] = 1;
            queue.push(nidx);
        }
    }
    return seen[n * n - 1] != 0;
}

double GridCost::cost() const { return straight + diagonal * std::sqrt(2.0); }

std::optional<GridCost> dijkstra_grid_cost(const PlanningProblem& problem) {
    const World& world = problem.world;
    const Rect& b = world.bounds();
    const int nx = static_cast<int>(std::floor(b.width())) + 1;
    const int ny = static_cast<int>(std::floor(b.height())) + 1;
    const auto point = [&](int idx) {
        return Vec2{b.xmin + idx % nx, b.ymin + idx / nx};
    };

    std::vector<char> occupied(static_cast<std::size_t>(nx) * ny);
    for (int idx = 0; idx < nx * ny; ++idx) {
        occupied[static_cast<std::size_t>(idx)] = !world.is_free(point(idx));
    }

    const int sx = std::clamp(static_cast<int>(std::lround(problem.x_init.x - b.xmin)), 0, nx - 1);
    const int sy = std::clamp(static_cast<int>(std::lround(problem.x_init.y - b.ymin)), 0, ny - 1);
    const int start = sy * nx + sx;
    if (occupied[static_cast<std::size_t>(start)]) return std::nullopt;

    std::vector<std::pair<double, int>> goal_cells;
    for (int idx = 0; idx < nx * ny; ++idx) {
        if (occupied[static_cast<std::size_t>(idx)]) continue;
        const double d = dist(point(idx), problem.goal_center);
        if (d <= problem.goal_radius) goal_cells.emplace_back(d, idx);
    }
    std::sort(goal_cells.begin(), goal_cells.end());
    if (goal_cells.empty()) return std::nullopt;

    const double SQRT2 = std::sqrt(2.0);
    std::vector<double> costs(static_cast<std::size_t>(nx) * ny,
                              std::numeric_limits<double>::infinity());
    std::vector<GridCost> counts(static_cast<std::size_t>(nx) * ny);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    costs[static_cast<std::size_t>(start)] = 0.0;
    heap.push({0.0, start});
    while (!heap.empty()) {
        const auto [c, idx] = heap.top();
        heap.pop();
        if (c > costs[static_cast<std::size_t>(idx)]) continue;
        const int cx = idx % nx, cy = idx / nx;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx2 = cx + dx, ny2 = cy + dy;
                if (nx2 < 0 || nx2 >= nx || ny2 < 0 || ny2 >= ny) continue;
                const int nidx = ny2 * nx + nx2;
                if (occupied[static_cast<std::size_t>(nidx)]) continue;
                const bool diag = dx != 0 && dy != 0;
                const double nc = c + (diag ? SQRT2 : 1.0);
                if (nc < costs[static_cast<std::size_t>(nidx)]) {
                    costs[static_cast<std::size_t>(nidx)] = nc;
                    counts[static_cast<std::size_t>(nidx)] = counts[static_cast<std::size_t>(idx)];
                    if (diag) {
                        ++counts[static_cast<std::size_t>(nidx)].diagonal;
                    } else {
                        ++counts[static_cast<std::size_t>(nidx)].straight;
                    }
                    heap.push({nc, nidx});
                }
            }
    }
    for (const auto& [d, idx] : goal_cells) {
        if (std::isfinite(costs[static_cast<std::size_t>(idx)])) {
            return counts[static_cast<std::size_t>(idx)];
        }
    }
    return std::nullopt;
}

GridCost count_grid_steps(const std::vector<Vec2>& points) {
    GridCost out;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const int dx = static_cast<int>(std::lround(points[i].x - points[i - 1].x));
        const int dy = static_cast<int>(std::lround(points[i].y - points[i - 1].y));
        if (dx != 0 && dy != 0) {
            ++out.diagonal;
        } else {
            ++out.straight;
        }
    }
    return out;
}

namespace {

// Circle center for a turn of the given sense (+1 left, -1 right).
Vec2 turn_center(const State& q, int sense, double r) {
    return {q.x - sense * r * std::sin(q.theta), q.y + sense * r * std::cos(q.theta)};
}

double arc_amount(int sense, double from, double to) {
    return sense > 0 ? mod_two_pi(to - from) : mod_two_pi(from - to);
}

double csc_length(const State& q0, const State& q1, int s0, int s1, double r) {
    const Vec2 c0 = turn_center(q0, s0, r);
    const Vec2 c1 = turn_center(q1, s1, r);
    const Vec2 w = c1 - c0;
    const double D = w.norm();
    const double phi = std::atan2(w.y, w.x);
    double psi, p;
    if (s0 == s1) {
        if (D < 1e-15 && std::abs(wrap_angle(q0.theta - q1.theta)) > 1e-12) {
            // Same circle, different headings: the straight piece vanishes
            // and the word degenerates; fall through with psi toward phi.
        }
        psi = phi;
        p = D;
    } else {
        if (D < 2.0 * r) return std::numeric_limits<double>::infinity();
        const double offset = std::asin(std::min(1.0, 2.0 * r / D));
        psi = s0 > 0 ? phi + offset : phi - offset;
        p = std::sqrt(std::max(0.0, D * D - 4.0 * r * r));
    }
    const double t = r * arc_amount(s0, q0.theta, psi);
    const double q = r * arc_amount(s1, psi, q1.theta);
    return t + p + q;
}

// One CCC variant: the middle circle placed at angle phi +/- gamma from c0.
double ccc_variant(const State& q0, const State& q1, int outer_sense, double r, int sign) {
    const Vec2 c0 = turn_center(q0, outer_sense, r);
    const Vec2 c1 = turn_center(q1, outer_sense, r);
    const Vec2 w = c1 - c0;
    const double D = w.norm();
    if (D > 4.0 * r) return std::numeric_limits<double>::infinity();
    const double phi = std::atan2(w.y, w.x);
    const double gamma = std::acos(std::clamp(D / (4.0 * r), -1.0, 1.0));
    const double ang = phi + sign * gamma;
    const Vec2 cm{c0.x + 2.0 * r * std::cos(ang), c0.y + 2.0 * r * std::sin(ang)};

    const Vec2 pt0{0.5 * (c0.x + cm.x), 0.5 * (c0.y + cm.y)};
    const Vec2 pt1{0.5 * (cm.x + c1.x), 0.5 * (cm.y + c1.y)};
    // Heading at a point of a circle traversed with a given sense.
    const auto heading_at = [&](const Vec2& pt, const Vec2& center, int sense) {
        return wrap_angle(std::atan2(pt.y - center.y, pt.x - center.x) + sense * M_PI / 2.0);
    };
    const double psi0 = heading_at(pt0, c0, outer_sense);
    const double psi1 = heading_at(pt1, c1, outer_sense);
    const double t = r * arc_amount(outer_sense, q0.theta, psi0);
    const double p = r * arc_amount(-outer_sense, psi0, psi1);
    const double q = r * arc_amount(outer_sense, psi1, q1.theta);
    return t + p + q;
}

double ccc_length(const State& q0, const State& q1, int outer_sense, double r) {
    return std::min(ccc_variant(q0, q1, outer_sense, r, +1),
                    ccc_variant(q0, q1, outer_sense, r, -1));
}

}  // namespace

std::array<double, 6> dubins_word_lengths(const State& q0, const State& q1, double kappa_max) {
    const double r = 1.0 / kappa_max;
    return {
        csc_length(q0, q1, +1, +1, r),  // LSL
        csc_length(q0, q1, -1, -1, r),  // RSR
        csc_length(q0, q1, +1, -1, r),  // LSR
        csc_length(q0, q1, -1, +1, r),  // RSL
        ccc_length(q0, q1, -1, r),      // RLR
        ccc_length(q0, q1, +1, r),      // LRL
    };
}

namespace {

State rk4_step(const State& s, const ControlStep& u, Model model, double h) {
    const auto f = [&](const State& x, double* d) {
        switch (model) {
            case Model::holonomic:
                d[0] = u.u0;
                d[1] = u.u1;
                d[2] = d[3] = d[4] = 0.0;
                break;
            case Model::dubins:
                d[0] = std::cos(x.theta);
                d[1] = std::sin(x.theta);
                d[2] = u.u0;
                d[3] = d[4] = 0.0;
                break;
            case Model::car5d:
                d[0] = x.v * std::cos(x.theta);
                d[1] = x.v * std::sin(x.theta);
                d[2] = x.v * x.kappa;
                d[3] = u.u0;
                d[4] = u.u1;
                break;
        }
    };
    double k1[5], k2[5], k3[5], k4[5];
    const auto shifted = [](const State& x, const double* d, double sc) {
        State y = x;
        y.x += d[0] * sc;
        y.y += d[1] * sc;
        y.theta += d[2] * sc;
        y.v += d[3] * sc;
        y.kappa += d[4] * sc;
        return y;
    };
    f(s, k1);
    f(shifted(s, k1, h / 2), k2);
    f(shifted(s, k2, h / 2), k3);
    f(shifted(s, k3, h), k4);
    State out = s;
    out.x += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    out.y += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    out.theta += h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
    out.v += h / 6 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3]);
    out.kappa += h / 6 * (k1[4] + 2 * k2[4] + 2 * k3[4] + k4[4]);
    return out;
}

}  // namespace

double reintegration_error(const Trajectory& t, Model model) {
    if (t.states.empty()) return 0.0;
    State cur = t.states.front();
    double worst = 0.0;
    for (std::size_t i = 0; i < t.controls.size(); ++i) {
        const ControlStep& u = t.controls[i];
        // Substep finer than the stored spacing.
        const int substeps = 8;
        for (int k = 0; k < substeps; ++k) cur = rk4_step(cur, u, model, u.duration / substeps);
        worst = std::max(worst, dist(cur.pos(), t.states[i + 1].pos()));
    }
    return worst;
}

std::size_t brute_voronoi_index(const PredictedPath& path, const Vec2& q) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.points.size(); ++k) {
        const double d = dist(path.points[k], q);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

double ncs_two_stage(const PredictedPath& path, const Trajectory& trajectory) {
    std::map<std::size_t, std::vector<Vec2>> cells;
    for (const State& s : trajectory.states) {
        cells[brute_voronoi_index(path, s.pos())].push_back(s.pos());
    }
    double overall = 0.0;
    for (const auto& [k, samples] : cells) {
        double cell_max = 0.0;
        for (const Vec2& q : samples) cell_max = std::max(cell_max, dist(q, path.points[k]));
        overall = std::max(overall, cell_max);
    }
    return overall;
}

double quantile_sort_index(std::vector<double> scores, double alpha) {
    std::sort(scores.begin(), scores.end());
    const int n = static_cast<int>(scores.size());
    const int r = static_cast<int>(std::ceil((1.0 - alpha) * (n + 1)));
    if (r > n) return std::numeric_limits<double>::infinity();
    return scores[static_cast<std::size_t>(r - 1)];
}

}  // namespace cprrt::oracle
