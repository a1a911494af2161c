#pragma once

#include <algorithm>
#include <cmath>

namespace cprrt {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // Coordinates stay on the meters scale, so the naive form cannot
    // overflow and is much cheaper than std::hypot.
    double norm() const { return std::sqrt(x * x + y * y); }
    double norm_sq() const { return x * x + y * y; }
};

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }
inline double dist_sq(const Vec2& a, const Vec2& b) { return (a - b).norm_sq(); }

// Axis-aligned rectangle, closed on all sides.
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }

    bool contains(const Vec2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    bool contains_rect(const Rect& r) const {
        return r.xmin >= xmin && r.xmax <= xmax && r.ymin >= ymin && r.ymax <= ymax;
    }
    bool intersects_rect(const Rect& r) const {
        return r.xmin <= xmax && r.xmax >= xmin && r.ymin <= ymax && r.ymax >= ymin;
    }
    // Closed rect vs closed disc.
    bool intersects_disc(const Vec2& c, double radius) const {
        const double cx = std::clamp(c.x, xmin, xmax);
        const double cy = std::clamp(c.y, ymin, ymax);
        return dist_sq({cx, cy}, c) <= radius * radius;
    }
};

// Wraps an angle to [-pi, pi).
inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * M_PI;
    a = std::fmod(a + M_PI, two_pi);
    if (a < 0.0) a += two_pi;
    return a - M_PI;
}

// Wraps an angle to [0, 2*pi).
inline double mod_two_pi(double a) {
    constexpr double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    return a;
}

// Parameter interval [t0, t1] of segment a->b inside the closed rect, or
// false when they do not intersect. Liang-Barsky clipping.
inline bool clip_segment_rect(const Vec2& a, const Vec2& b, const Rect& r,
                              double& t0, double& t1) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    t0 = 0.0;
    t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - r.xmin, r.xmax - a.x, a.y - r.ymin, r.ymax - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;  // parallel and outside
        } else {
            const double t = q[i] / p[i];
            if (p[i] < 0.0) {
                if (t > t1) return false;
                t0 = std::max(t0, t);
            } else {
                if (t < t0) return false;
                t1 = std::min(t1, t);
            }
        }
    }
    return t0 <= t1;
}

inline bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect& r) {
    double t0, t1;
    return clip_segment_rect(a, b, r, t0, t1);
}

}  // namespace cprrt
