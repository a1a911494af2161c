#include "cprrt/dubins.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cprrt {

namespace {

struct WordParams {
    bool valid = false;
    double t = 0.0, p = 0.0, q = 0.0;  // normalized segment lengths
};

// Turn arcs that round to a hair under a full circle are floating-point
// noise for an arc of zero (a pose exactly on a word boundary would
// otherwise pick up a spurious 2*pi turn). Straight/middle segments are
// never snapped.
double snap_turn(double arc) {
    constexpr double two_pi = 2.0 * M_PI;
    return arc > two_pi - 1e-9 ? 0.0 : arc;
}

// Discriminants a hair below zero are tangency configurations, not
// infeasible words.
constexpr double kDiscriminantTol = 1e-12;

// Each word solver works in normalized coordinates: the start pose at the
// origin, the goal at distance d on the x-axis, headings alpha and beta.
WordParams word_lsl(double alpha, double beta, double d) {
    WordParams w;
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double p_sq = 2.0 + d * d - 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa - sb);
    if (p_sq < -kDiscriminantTol) return w;
    const double tmp = std::atan2(cb - ca, d + sa - sb);
    w.t = snap_turn(mod_two_pi(-alpha + tmp));
    w.p = std::sqrt(std::max(0.0, p_sq));
    w.q = snap_turn(mod_two_pi(beta - tmp));
    w.valid = true;
    return w;
}

WordParams word_rsr(double alpha, double beta, double d) {
    WordParams w;
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double p_sq = 2.0 + d * d - 2.0 * std::cos(alpha - beta) + 2.0 * d * (sb - sa);
    if (p_sq < -kDiscriminantTol) return w;
    const double tmp = std::atan2(ca - cb, d - sa + sb);
    w.t = snap_turn(mod_two_pi(alpha - tmp));
    w.p = std::sqrt(std::max(0.0, p_sq));
    w.q = snap_turn(mod_two_pi(-beta + tmp));
    w.valid = true;
    return w;
}

WordParams word_lsr(double alpha, double beta, double d) {
    WordParams w;
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double p_sq = -2.0 + d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa + sb);
    if (p_sq < -kDiscriminantTol) return w;
    w.p = std::sqrt(std::max(0.0, p_sq));
    const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, w.p);
    w.t = snap_turn(mod_two_pi(-alpha + tmp));
    w.q = snap_turn(mod_two_pi(-mod_two_pi(beta) + tmp));
    w.valid = true;
    return w;
}

WordParams word_rsl(double alpha, double beta, double d) {
    WordParams w;
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double p_sq = d * d - 2.0 + 2.0 * std::cos(alpha - beta) - 2.0 * d * (sa + sb);
    if (p_sq < -kDiscriminantTol) return w;
    w.p = std::sqrt(std::max(0.0, p_sq));
    const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, w.p);
    w.t = snap_turn(mod_two_pi(alpha - tmp));
    w.q = snap_turn(mod_two_pi(beta - tmp));
    w.valid = true;
    return w;
}

WordParams word_rlr(double alpha, double beta, double d) {
    WordParams w;
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double tmp = (6.0 - d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa - sb)) / 8.0;
    if (std::abs(tmp) > 1.0) return w;
    w.p = mod_two_pi(2.0 * M_PI - std::acos(tmp));
    w.t = snap_turn(mod_two_pi(alpha - std::atan2(ca - cb, d - sa + sb) + mod_two_pi(w.p / 2.0)));
    w.q = snap_turn(mod_two_pi(alpha - beta - w.t + mod_two_pi(w.p)));
    w.valid = true;
    return w;
}

WordParams word_lrl(double alpha, double beta, double d) {
    WordParams w;
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double tmp = (6.0 - d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sb - sa)) / 8.0;
    if (std::abs(tmp) > 1.0) return w;
    w.p = mod_two_pi(2.0 * M_PI - std::acos(tmp));
    w.t = snap_turn(mod_two_pi(-alpha - std::atan2(ca - cb, d + sa - sb) + w.p / 2.0));
    w.q = snap_turn(mod_two_pi(mod_two_pi(beta) - alpha - w.t + mod_two_pi(w.p)));
    w.valid = true;
    return w;
}

constexpr std::array<DubinsSeg, 3> kWordSegs[6] = {
    {DubinsSeg::left, DubinsSeg::straight, DubinsSeg::left},
    {DubinsSeg::right, DubinsSeg::straight, DubinsSeg::right},
    {DubinsSeg::left, DubinsSeg::straight, DubinsSeg::right},
    {DubinsSeg::right, DubinsSeg::straight, DubinsSeg::left},
    {DubinsSeg::right, DubinsSeg::left, DubinsSeg::right},
    {DubinsSeg::left, DubinsSeg::right, DubinsSeg::left},
};

WordParams solve_word(DubinsWord word, double alpha, double beta, double d) {
    switch (word) {
        case DubinsWord::LSL: return word_lsl(alpha, beta, d);
        case DubinsWord::RSR: return word_rsr(alpha, beta, d);
        case DubinsWord::LSR: return word_lsr(alpha, beta, d);
        case DubinsWord::RSL: return word_rsl(alpha, beta, d);
        case DubinsWord::RLR: return word_rlr(alpha, beta, d);
        case DubinsWord::LRL: return word_lrl(alpha, beta, d);
    }
    return {};
}

// The closed-form CCC solutions above only place the middle circle on the
// side that yields a middle arc >= pi. The mirrored placement matters at
// tangency boundaries (e.g. a two-arc path whose CSC twin is one ulp
// infeasible), so both placements are offered as extra candidates, built in
// world coordinates.
Vec2 turn_center(const State& q, int sense, double radius) {
    return {q.x - sense * radius * std::sin(q.theta),
            q.y + sense * radius * std::cos(q.theta)};
}

WordParams ccc_mirror(const State& q0, const State& q1, int outer_sense, double radius,
                      int side) {
    WordParams w;
    const Vec2 c0 = turn_center(q0, outer_sense, radius);
    const Vec2 c1 = turn_center(q1, outer_sense, radius);
    const Vec2 delta = c1 - c0;
    const double d_centers = delta.norm();
    if (d_centers > 4.0 * radius) return w;
    const double phi = std::atan2(delta.y, delta.x);
    const double gamma = std::acos(std::clamp(d_centers / (4.0 * radius), -1.0, 1.0));
    const double ang = phi + side * gamma;
    const Vec2 cm{c0.x + 2.0 * radius * std::cos(ang), c0.y + 2.0 * radius * std::sin(ang)};
    const Vec2 t0{0.5 * (c0.x + cm.x), 0.5 * (c0.y + cm.y)};
    const Vec2 t1{0.5 * (cm.x + c1.x), 0.5 * (cm.y + c1.y)};
    const auto heading_at = [&](const Vec2& pt, const Vec2& c, int sense) {
        return std::atan2(pt.y - c.y, pt.x - c.x) + sense * M_PI / 2.0;
    };
    const auto arc = [](int sense, double from, double to) {
        return snap_turn(sense > 0 ? mod_two_pi(to - from) : mod_two_pi(from - to));
    };
    const double psi0 = heading_at(t0, c0, outer_sense);
    const double psi1 = heading_at(t1, c1, outer_sense);
    w.t = arc(outer_sense, q0.theta, psi0);
    w.p = arc(-outer_sense, psi0, psi1);
    w.q = arc(outer_sense, psi1, q1.theta);
    w.valid = true;
    return w;
}

State advance(const State& s, DubinsSeg seg, double arc, double radius) {
    State out = s;
    switch (seg) {
        case DubinsSeg::straight:
            out.x += arc * std::cos(s.theta);
            out.y += arc * std::sin(s.theta);
            break;
        case DubinsSeg::left: {
            const double phi = arc / radius;
            const Vec2 c{s.x - radius * std::sin(s.theta), s.y + radius * std::cos(s.theta)};
            out.theta = wrap_angle(s.theta + phi);
            out.x = c.x + radius * std::sin(s.theta + phi);
            out.y = c.y - radius * std::cos(s.theta + phi);
            break;
        }
        case DubinsSeg::right: {
            const double phi = arc / radius;
            const Vec2 c{s.x + radius * std::sin(s.theta), s.y - radius * std::cos(s.theta)};
            out.theta = wrap_angle(s.theta - phi);
            out.x = c.x - radius * std::sin(s.theta - phi);
            out.y = c.y + radius * std::cos(s.theta - phi);
            break;
        }
    }
    return out;
}

double seg_curvature(DubinsSeg seg, double radius) {
    switch (seg) {
        case DubinsSeg::left: return 1.0 / radius;
        case DubinsSeg::right: return -1.0 / radius;
        case DubinsSeg::straight: return 0.0;
    }
    return 0.0;
}

}  // namespace

std::array<DubinsSeg, 3> DubinsPath::segments() const {
    return kWordSegs[static_cast<int>(word)];
}

State DubinsPath::at(double s) const {
    s = std::clamp(s, 0.0, length());
    State cur = q0;
    const auto segs = segments();
    for (int i = 0; i < 3; ++i) {
        const double l = seg_len[static_cast<std::size_t>(i)];
        if (s <= l || i == 2) return advance(cur, segs[static_cast<std::size_t>(i)], std::min(s, l), radius);
        cur = advance(cur, segs[static_cast<std::size_t>(i)], l, radius);
        s -= l;
    }
    return cur;
}

DubinsPath dubins_solve(const State& q0, const State& q1, double kappa_max) {
    if (kappa_max <= 0.0) throw std::invalid_argument("kappa_max must be positive");
    const double radius = 1.0 / kappa_max;
    const double dx = q1.x - q0.x;
    const double dy = q1.y - q0.y;
    const double dist_m = std::hypot(dx, dy);
    const double d = dist_m / radius;
    const double theta = dist_m > 0.0 ? std::atan2(dy, dx) : 0.0;
    const double alpha = mod_two_pi(q0.theta - theta);
    const double beta = mod_two_pi(q1.theta - theta);

    DubinsPath best;
    best.q0 = q0;
    best.radius = radius;
    double best_len = std::numeric_limits<double>::infinity();
    const auto consider = [&](DubinsWord word, const WordParams& w) {
        if (!w.valid) return;
        const double len = (w.t + w.p + w.q) * radius;
        if (len < best_len) {
            best_len = len;
            best.word = word;
            best.seg_len = {w.t * radius, w.p * radius, w.q * radius};
        }
    };
    for (int wi = 0; wi < 6; ++wi) {
        const auto word = static_cast<DubinsWord>(wi);
        consider(word, solve_word(word, alpha, beta, d));
    }
    for (const int side : {+1, -1}) {
        consider(DubinsWord::RLR, ccc_mirror(q0, q1, -1, radius, side));
        consider(DubinsWord::LRL, ccc_mirror(q0, q1, +1, radius, side));
    }
    if (!std::isfinite(best_len)) throw std::runtime_error("dubins_solve: no word produced a path");
    return best;
}

double dubins_length(const State& q0, const State& q1, double kappa_max) {
    return dubins_solve(q0, q1, kappa_max).length();
}

Trajectory dubins_trajectory(const DubinsPath& path, double spacing, double max_length) {
    Trajectory out;
    double budget = path.length();
    if (max_length >= 0.0) budget = std::min(budget, max_length);

    out.states.push_back(path.q0);
    State cur = path.q0;
    const auto segs = path.segments();
    double used = 0.0;
    for (int i = 0; i < 3 && budget - used > 1e-12; ++i) {
        const double seg_total = std::min(path.seg_len[static_cast<std::size_t>(i)], budget - used);
        if (seg_total <= 1e-12) continue;
        const auto seg = segs[static_cast<std::size_t>(i)];
        const double kappa = seg_curvature(seg, path.radius);
        const int steps = std::max(1, static_cast<int>(std::ceil(seg_total / spacing)));
        const double ds = seg_total / steps;
        for (int k = 0; k < steps; ++k) {
            cur = advance(cur, seg, ds, path.radius);
            out.states.push_back(cur);
            out.controls.push_back({ds, kappa, 0.0});
        }
        used += seg_total;
    }
    out.length = used;
    return out;
}

Trajectory dubins_shortest_path(const State& q0, const State& q1, double kappa_max,
                                double spacing) {
    return dubins_trajectory(dubins_solve(q0, q1, kappa_max), spacing);
}

}  // namespace cprrt
