#include "cprrt/dynamics.hpp"

#include <array>
#include <cmath>

namespace cprrt {

namespace {

double weighted_pose_dist(const ModelParams& params, const State& a, const State& b) {
    const double dth = params.theta_weight * wrap_angle(a.theta - b.theta);
    return std::sqrt(dist_sq(a.pos(), b.pos()) + dth * dth);
}

Trajectory single_state(const State& s) {
    Trajectory t;
    t.states.push_back(s);
    t.length = 0.0;
    return t;
}

Trajectory steer_holonomic(const ModelParams& params, const State& from, const State& toward,
                           double max_length) {
    const Vec2 delta = toward.pos() - from.pos();
    const double d = delta.norm();
    if (d < 1e-12) return single_state(from);
    const double len = max_length >= 0.0 ? std::min(d, max_length) : d;
    const Vec2 dir = delta * (1.0 / d);

    Trajectory t;
    t.states.push_back(from);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / params.spacing)));
    const double ds = len / steps;
    for (int i = 1; i <= steps; ++i) {
        State s;
        s.x = from.x + dir.x * ds * i;
        s.y = from.y + dir.y * ds * i;
        t.states.push_back(s);
        t.controls.push_back({ds, dir.x, dir.y});
    }
    t.length = len;
    return t;
}

// ---- car5d LQR tracking ---------------------------------------------------

using Mat5 = std::array<std::array<double, 5>, 5>;

Mat5 mat_mul(const Mat5& a, const Mat5& b) {
    Mat5 r{};
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 5; ++k) {
            const double aik = a[i][k];
            if (aik == 0.0) continue;
            for (int j = 0; j < 5; ++j) r[i][j] += aik * b[k][j];
        }
    return r;
}

Mat5 mat_tmul(const Mat5& a, const Mat5& b) {  // a^T * b
    Mat5 r{};
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i) {
            const double aki = a[k][i];
            if (aki == 0.0) continue;
            for (int j = 0; j < 5; ++j) r[i][j] += aki * b[k][j];
        }
    return r;
}

struct LqrGains {
    double K[2][5];
};

// Infinite-horizon discrete LQR for the error dynamics of a unicycle with
// velocity/curvature integrators, linearized about a straight reference at
// speed v_ref (reference-aligned frame, so the matrices are constant).
// Error state: (longitudinal, lateral, heading, speed, curvature).
LqrGains solve_lqr(double v_ref, double dt) {
    Mat5 A{};
    for (int i = 0; i < 5; ++i) A[i][i] = 1.0;
    A[0][3] = dt;
    A[1][2] = v_ref * dt;
    A[2][4] = v_ref * dt;

    const double q_diag[5] = {1.0, 1.0, 4.0, 0.5, 0.5};
    const double r_diag[2] = {1.0, 1.0};

    Mat5 P{};
    for (int i = 0; i < 5; ++i) P[i][i] = q_diag[i];

    for (int iter = 0; iter < 20000; ++iter) {
        const Mat5 PA = mat_mul(P, A);
        // S = R + B^T P B with B rows 3,4 scaled by dt.
        const double s00 = r_diag[0] + dt * dt * P[3][3];
        const double s01 = dt * dt * P[3][4];
        const double s10 = dt * dt * P[4][3];
        const double s11 = r_diag[1] + dt * dt * P[4][4];
        const double det = s00 * s11 - s01 * s10;
        // M = B^T P A (2x5).
        double M[2][5];
        for (int j = 0; j < 5; ++j) {
            M[0][j] = dt * PA[3][j];
            M[1][j] = dt * PA[4][j];
        }
        const Mat5 APA = mat_tmul(A, PA);
        Mat5 next{};
        double diff = 0.0;
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const double si = (s11 * M[0][i] - s01 * M[1][i]) / det;
                const double ti = (-s10 * M[0][i] + s00 * M[1][i]) / det;
                double v = APA[i][j] - (si * M[0][j] + ti * M[1][j]);
                if (i == j) v += q_diag[i];
                next[i][j] = v;
            }
        }
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                const double sym = 0.5 * (next[i][j] + next[j][i]);
                diff = std::max(diff, std::abs(sym - P[i][j]));
                next[i][j] = next[j][i] = sym;
            }
        P = next;
        if (diff < 1e-9) break;
    }

    LqrGains g;
    const double s00 = r_diag[0] + dt * dt * P[3][3];
    const double s01 = dt * dt * P[3][4];
    const double s10 = dt * dt * P[4][3];
    const double s11 = r_diag[1] + dt * dt * P[4][4];
    const double det = s00 * s11 - s01 * s10;
    const Mat5 PA = mat_mul(P, A);
    for (int j = 0; j < 5; ++j) {
        const double m0 = dt * PA[3][j];
        const double m1 = dt * PA[4][j];
        g.K[0][j] = (s11 * m0 - s01 * m1) / det;
        g.K[1][j] = (-s10 * m0 + s00 * m1) / det;
    }
    return g;
}

State car5d_rk4(const State& s, double u_v, double u_k, double h) {
    const auto f = [&](const State& x, double* d) {
        d[0] = x.v * std::cos(x.theta);
        d[1] = x.v * std::sin(x.theta);
        d[2] = x.v * x.kappa;
        d[3] = u_v;
        d[4] = u_k;
    };
    double k1[5], k2[5], k3[5], k4[5];
    const auto shift = [](const State& x, const double* d, double scale) {
        State y = x;
        y.x += d[0] * scale;
        y.y += d[1] * scale;
        y.theta += d[2] * scale;
        y.v += d[3] * scale;
        y.kappa += d[4] * scale;
        return y;
    };
    f(s, k1);
    f(shift(s, k1, h / 2.0), k2);
    f(shift(s, k2, h / 2.0), k3);
    f(shift(s, k3, h), k4);
    State out = s;
    out.x += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    out.y += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    out.theta = wrap_angle(s.theta + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]));
    out.v += h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    out.kappa += h / 6.0 * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]);
    return out;
}

struct Car5dStop {
    double max_arc;                  // hard arc-length cap
    double reach_tol;                // stop early when this close (weighted), <0 disables
    int max_steps;
};

Trajectory car5d_track(const ModelParams& params, const State& from, const State& toward,
                       const Car5dStop& stop) {
    const Vec2 delta = toward.pos() - from.pos();
    const double line_len = delta.norm();
    if (line_len < 1e-12) return single_state(from);
    const Vec2 dir = delta * (1.0 / line_len);
    const double theta_ref = std::atan2(dir.y, dir.x);
    const double v_ref = 0.3 * params.v_max;

    // Gains depend only on (v_ref, dt); cache the default pair once.
    constexpr double kDefaultVref = 0.3 * 5.0;
    constexpr double kDefaultDt = 0.05;
    static const LqrGains default_gains = solve_lqr(kDefaultVref, kDefaultDt);
    const bool default_setup =
        std::abs(v_ref - kDefaultVref) < 1e-12 && std::abs(params.dt - kDefaultDt) < 1e-12;
    const LqrGains local = default_setup ? default_gains : solve_lqr(v_ref, params.dt);
    const double dt = params.dt;

    Trajectory t;
    t.states.push_back(from);
    State cur = from;
    double arc = 0.0;
    double s_ref = 0.0;
    for (int step = 0; step < stop.max_steps; ++step) {
        if (stop.reach_tol >= 0.0 && weighted_pose_dist(params, cur, toward) <= stop.reach_tol) break;

        s_ref = std::min(s_ref + v_ref * dt, line_len);
        const Vec2 ref_pos = from.pos() + dir * s_ref;
        const double ref_v = s_ref < line_len ? v_ref : 0.0;

        // Error in the reference-aligned frame.
        const double ex = cur.x - ref_pos.x;
        const double ey = cur.y - ref_pos.y;
        const double c = std::cos(theta_ref), s = std::sin(theta_ref);
        const double e[5] = {c * ex + s * ey, -s * ex + c * ey,
                             wrap_angle(cur.theta - theta_ref), cur.v - ref_v, cur.kappa};
        double u_v = 0.0, u_k = 0.0;
        for (int j = 0; j < 5; ++j) {
            u_v -= local.K[0][j] * e[j];
            u_k -= local.K[1][j] * e[j];
        }
        u_v = std::clamp(u_v, -params.accel_max, params.accel_max);
        u_k = std::clamp(u_k, -params.kappa_rate_max, params.kappa_rate_max);
        // Respect state bounds by limiting the ZOH control instead of
        // clamping the state, so re-integration reproduces the trajectory.
        u_v = std::clamp(u_v, (0.0 - cur.v) / dt, (params.v_max - cur.v) / dt);
        u_k = std::clamp(u_k, (-params.kappa_max - cur.kappa) / dt,
                         (params.kappa_max - cur.kappa) / dt);

        double h = dt;
        double step_arc = cur.v * h + 0.5 * u_v * h * h;
        if (arc + step_arc > stop.max_arc) {
            // Shrink the final step so the arc cap is hit exactly.
            const double want = stop.max_arc - arc;
            if (want <= 1e-12) break;
            if (std::abs(u_v) < 1e-12) {
                h = cur.v > 1e-12 ? want / cur.v : dt;
            } else {
                const double disc = cur.v * cur.v + 2.0 * u_v * want;
                h = disc > 0.0 ? (-cur.v + std::sqrt(disc)) / u_v : dt;
            }
            h = std::clamp(h, 1e-9, dt);
            step_arc = cur.v * h + 0.5 * u_v * h * h;
        }
        const State next = car5d_rk4(cur, u_v, u_k, h);
        t.states.push_back(next);
        t.controls.push_back({h, u_v, u_k});
        arc += step_arc;
        cur = next;
        if (arc >= stop.max_arc - 1e-12) break;
        if (cur.v < 1e-6 && s_ref >= line_len) break;  // settled at the reference end
    }
    t.length = arc;
    return t;
}

std::optional<Trajectory> steer_car5d(const ModelParams& params, const State& from,
                                      const State& toward) {
    Car5dStop stop;
    stop.max_arc = params.eta;
    stop.reach_tol = 0.05;
    stop.max_steps = 400;
    Trajectory t = car5d_track(params, from, toward, stop);
    if (t.states.size() < 2) return t;  // degenerate from==toward
    const double before = weighted_pose_dist(params, from, toward);
    const double after = weighted_pose_dist(params, t.states.back(), toward);
    if (after >= before - 1e-9) return std::nullopt;
    return t;
}

}  // namespace

double distance(const ModelParams& params, const State& a, const State& b) {
    switch (params.model) {
        case Model::holonomic:
            return dist(a.pos(), b.pos());
        case Model::dubins:
            if (a.pos() == b.pos() && wrap_angle(a.theta - b.theta) == 0.0) return 0.0;
            return dubins_length(a, b, params.kappa_max);
        case Model::car5d:
            return weighted_pose_dist(params, a, b);
    }
    return 0.0;
}

std::optional<Trajectory> steer(const ModelParams& params, const State& from,
                                const State& toward) {
    switch (params.model) {
        case Model::holonomic:
            return steer_holonomic(params, from, toward, params.eta);
        case Model::dubins: {
            if (from.pos() == toward.pos() && wrap_angle(from.theta - toward.theta) == 0.0) {
                return single_state(from);
            }
            const DubinsPath path = dubins_solve(from, toward, params.kappa_max);
            return dubins_trajectory(path, params.spacing, params.eta);
        }
        case Model::car5d:
            return steer_car5d(params, from, toward);
    }
    return std::nullopt;
}

std::optional<Trajectory> connect(const ModelParams& params, const State& from,
                                  const State& to) {
    switch (params.model) {
        case Model::holonomic: {
            Trajectory t = steer_holonomic(params, from, to, -1.0);
            if (t.states.size() >= 2) t.states.back() = to;  // land exactly
            return t;
        }
        case Model::dubins: {
            if (from.pos() == to.pos() && wrap_angle(from.theta - to.theta) == 0.0) {
                return single_state(from);
            }
            const DubinsPath path = dubins_solve(from, to, params.kappa_max);
            Trajectory t = dubins_trajectory(path, params.spacing);
            if (t.states.size() >= 2) t.states.back() = to;
            return t;
        }
        case Model::car5d: {
            Car5dStop stop;
            stop.max_arc = std::max(3.0 * weighted_pose_dist(params, from, to), 15.0);
            stop.reach_tol = kCar5dSnapTol;
            stop.max_steps = 1200;
            Trajectory t = car5d_track(params, from, to, stop);
            if (t.states.size() < 2) return t;
            if (weighted_pose_dist(params, t.states.back(), to) > kCar5dSnapTol) {
                return std::nullopt;
            }
            return t;
        }
    }
    return std::nullopt;
}

}  // namespace cprrt
