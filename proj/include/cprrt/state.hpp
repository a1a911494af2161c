#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cprrt/geom.hpp"

namespace cprrt {

enum class Model { holonomic, dubins, car5d };

const char* model_name(Model m);
Model model_from_name(const std::string& name);

// Robot state. The active components depend on the model:
//   holonomic: (x, y)
//   dubins:    (x, y, theta), theta in [-pi, pi)
//   car5d:     (x, y, theta, v, kappa)
// Unused components stay zero.
struct State {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double v = 0.0;
    double kappa = 0.0;

    Vec2 pos() const { return {x, y}; }
    bool operator==(const State&) const = default;
};

// One piecewise-constant control segment. Interpretation per model:
//   holonomic: (u0, u1) = velocity vector, duration in seconds (unit speed)
//   dubins:    u0 = curvature, duration = arc length (unit speed)
//   car5d:     (u0, u1) = (accel, curvature rate), duration in seconds
struct ControlStep {
    double duration = 0.0;
    double u0 = 0.0;
    double u1 = 0.0;
};

// Discretized trajectory. states.size() == controls.size() + 1; states are
// spaced at most `spacing` apart in arc length. length is the arc length
// accumulated by the model, not the chord sum.
struct Trajectory {
    std::vector<State> states;
    std::vector<ControlStep> controls;
    double length = 0.0;

    bool empty() const { return states.empty(); }
    const State& front() const { return states.front(); }
    const State& back() const { return states.back(); }
};

double trajectory_cost(const Trajectory& t);

// Appends `tail` to `head`; the duplicated junction state is dropped.
Trajectory concat(Trajectory head, const Trajectory& tail);

struct ModelParams {
    Model model = Model::holonomic;
    double eta = 5.0;             // max steer extension, meters
    double kappa_max = 0.2;       // 1/m
    double v_max = 5.0;           // m/s, car5d
    double accel_max = 2.0;       // m/s^2, |u_v| bound
    double kappa_rate_max = 0.5;  // 1/(m s), |u_kappa| bound
    double dt = 0.05;             // car5d integration step, seconds
    double spacing = 0.25;        // trajectory discretization, meters
    double theta_weight = 2.0;    // m/rad, car5d nearest metric

    static ModelParams defaults(Model m) {
        ModelParams p;
        p.model = m;
        return p;
    }
};

}  // namespace cprrt
