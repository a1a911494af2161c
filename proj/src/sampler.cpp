#include "cprrt/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cprrt {

// Same predicate as in_point_set, with an early exit over the competing
// waypoints: q lies in V(k) under the lowest-index tie rule iff every j < k
// is strictly farther and every j > k is at least as far. Rejection sampling
// calls this per attempt, and failing attempts usually lose to an adjacent
// waypoint immediately.
bool in_point_set_fast(const PredictionRegions& regions, std::size_t k, const Vec2& q) {
    const auto& pts = regions.path.points;
    const double dk = dist_sq(pts[k], q);
    if (dk > regions.q_hat * regions.q_hat) return false;
    const std::size_t lp = pts.size();

    // Jump probe: a dominating waypoint usually sits where q projects onto
    // the path, so test a small window there before scanning outward.
    if (lp > 4) {
        const std::size_t kn = k + 1 < lp ? k + 1 : k - 1;
        const Vec2 tangent = kn > k ? pts[kn] - pts[k] : pts[k] - pts[kn];
        const double spacing_sq = tangent.norm_sq();
        if (spacing_sq > 1e-12) {
            const double offset = (q - pts[k]).dot(tangent) / spacing_sq;
            const auto jump = static_cast<long>(k) + std::lround(offset);
            const long lo = std::max(jump - 2, 0L);
            const long hi = std::min(jump + 2, static_cast<long>(lp) - 1);
            for (long j = lo; j <= hi; ++j) {
                if (j == static_cast<long>(k)) continue;
                const double dj = dist_sq(pts[static_cast<std::size_t>(j)], q);
                if (j < static_cast<long>(k) ? dj <= dk : dj < dk) return false;
            }
        }
    }

    for (std::size_t step = 1; step < lp; ++step) {
        if (k >= step) {
            const std::size_t j = k - step;
            if (dist_sq(pts[j], q) <= dk) return false;
        }
        if (k + step < lp) {
            const std::size_t j = k + step;
            if (dist_sq(pts[j], q) < dk) return false;
        }
        if (step > k && k + step >= lp) break;
    }
    return true;
}

namespace {

// theta, v, kappa uniform over their ranges; position left untouched.
void fill_tail_dims(State& s, const ModelParams& params, Rng& rng) {
    switch (params.model) {
        case Model::holonomic:
            break;
        case Model::dubins:
            s.theta = rng.uniform(-M_PI, M_PI);
            break;
        case Model::car5d:
            s.theta = rng.uniform(-M_PI, M_PI);
            s.v = rng.uniform(0.0, params.v_max);
            s.kappa = rng.uniform(-params.kappa_max, params.kappa_max);
            break;
    }
}

}  // namespace

State sample_uniform_free(const World& world, const ModelParams& params, Rng& rng) {
    const Rect& b = world.bounds();
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const Vec2 p{rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax)};
        if (!world.is_free(p)) continue;
        State s;
        s.x = p.x;
        s.y = p.y;
        fill_tail_dims(s, params, rng);
        return s;
    }
    throw std::runtime_error("sample_uniform_free: no free point found");
}

State goal_biased_sample(const PlanningProblem& problem, const ModelParams& params,
                         const SamplerConfig& cfg, Rng& rng) {
    if (cfg.goal_bias_prob > 0.0 && rng.bernoulli(cfg.goal_bias_prob)) {
        for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
            const auto [z0, z1] = rng.gaussian_pair();
            const Vec2 p{problem.goal_center.x + cfg.goal_std * z0,
                         problem.goal_center.y + cfg.goal_std * z1};
            if (!problem.world.is_free(p)) continue;
            State s;
            s.x = p.x;
            s.y = p.y;
            fill_tail_dims(s, params, rng);
            return s;
        }
    }
    return sample_uniform_free(problem.world, params, rng);
}

namespace {

// Largest value of q . axis over the convex region
// {|q| <= R} cut by {q . u_a <= h_a} and {q . u_b <= h_b}; half-planes may be
// disabled with active_* = false. Candidates: the unconstrained disc optimum,
// chord endpoints of each half-plane boundary, and the half-plane corner.
double max_along(const Vec2& axis, double R, const Vec2& u_a, double h_a, bool active_a,
                 const Vec2& u_b, double h_b, bool active_b) {
    const auto feasible = [&](const Vec2& q) {
        if (q.norm_sq() > R * R + 1e-9) return false;
        if (active_a && q.dot(u_a) > h_a + 1e-9) return false;
        if (active_b && q.dot(u_b) > h_b + 1e-9) return false;
        return true;
    };
    double best = 0.0;  // the origin is always feasible (h_* >= 0)
    const auto consider = [&](const Vec2& q) {
        if (!feasible(q)) return;
        best = std::max(best, q.dot(axis));
    };
    consider(axis * R);
    const auto chord = [&](const Vec2& u, double h) {
        if (h >= R) return;  // inactive against the disc
        const double half = std::sqrt(std::max(0.0, R * R - h * h));
        const Vec2 perp{-u.y, u.x};
        consider(u * h + perp * half);
        consider(u * h - perp * half);
    };
    if (active_a) chord(u_a, h_a);
    if (active_b) chord(u_b, h_b);
    if (active_a && active_b) {
        const double det = u_a.x * u_b.y - u_a.y * u_b.x;
        if (std::abs(det) > 1e-12) {
            consider({(h_a * u_b.y - h_b * u_a.y) / det, (u_a.x * h_b - u_b.x * h_a) / det});
        }
    }
    return best;
}

}  // namespace

State sample_cp(const PredictionRegions& regions, const World& world,
                const ModelParams& params, const SamplerConfig& cfg, Rng& rng,
                std::uint64_t iteration, std::uint64_t* fallbacks) {
    if (cfg.p_bias > 0.0 && rng.bernoulli(cfg.p_bias)) {
        const auto& pts = regions.path.points;
        const std::size_t lp = pts.size();
        const std::size_t k = cfg.k_selection == SamplerConfig::KSelection::cyclic
                                  ? static_cast<std::size_t>(iteration % lp)
                                  : rng.uniform_index(lp);
        const Vec2 center = pts[k];
        const double radius = std::min(regions.q_hat, world.diagonal());

        // Proposal region: a rectangle in the local path frame covering
        // ball(p_k, radius) clipped by the bisector half-planes against the
        // adjacent waypoints. This still covers C_k, so rejection keeps the
        // draw exactly uniform over A_k, while the acceptance rate stays
        // high even for wide balls around a thin Voronoi slab.
        Vec2 u_prev{0, 0}, u_next{0, 0};
        double h_prev = 0.0, h_next = 0.0;
        bool has_prev = k > 0, has_next = k + 1 < lp;
        if (has_prev) {
            const Vec2 d = pts[k - 1] - center;
            const double len = d.norm();
            if (len > 1e-12) {
                u_prev = d * (1.0 / len);
                h_prev = 0.5 * len;
            } else {
                has_prev = false;
            }
        }
        if (has_next) {
            const Vec2 d = pts[k + 1] - center;
            const double len = d.norm();
            if (len > 1e-12) {
                u_next = d * (1.0 / len);
                h_next = 0.5 * len;
            } else {
                has_next = false;
            }
        }
        Vec2 tangent{1.0, 0.0};
        if (has_prev && has_next) {
            const Vec2 t = pts[k + 1] - pts[k - 1];
            const double len = t.norm();
            if (len > 1e-12) tangent = t * (1.0 / len);
        } else if (has_next) {
            tangent = u_next;
        } else if (has_prev) {
            tangent = u_prev * -1.0;
        }
        const Vec2 normal{-tangent.y, tangent.x};
        const double t_hi = max_along(tangent, radius, u_prev, h_prev, has_prev, u_next,
                                      h_next, has_next);
        const double t_lo = -max_along(tangent * -1.0, radius, u_prev, h_prev, has_prev,
                                       u_next, h_next, has_next);
        const double s_hi = max_along(normal, radius, u_prev, h_prev, has_prev, u_next,
                                      h_next, has_next);
        const double s_lo = -max_along(normal * -1.0, radius, u_prev, h_prev, has_prev,
                                       u_next, h_next, has_next);

        for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
            const double t = rng.uniform(t_lo, t_hi);
            const double s = rng.uniform(s_lo, s_hi);
            const Vec2 p = center + tangent * t + normal * s;
            if (!in_point_set_fast(regions, k, p) || !world.is_free(p)) continue;
            State out;
            out.x = p.x;
            out.y = p.y;
            fill_tail_dims(out, params, rng);
            return out;
        }
        if (fallbacks) ++(*fallbacks);
    }
    return sample_uniform_free(world, params, rng);
}

}  // namespace cprrt
