#include "cprrt/state.hpp"

#include <stdexcept>

namespace cprrt {

const char* model_name(Model m) {
    switch (m) {
        case Model::holonomic: return "holonomic";
        case Model::dubins: return "dubins";
        case Model::car5d: return "car5d";
    }
    return "holonomic";
}

Model model_from_name(const std::string& name) {
    if (name == "holonomic") return Model::holonomic;
    if (name == "dubins") return Model::dubins;
    if (name == "car5d") return Model::car5d;
    throw std::invalid_argument("unknown model: " + name);
}

double trajectory_cost(const Trajectory& t) { return t.length; }

Trajectory concat(Trajectory head, const Trajectory& tail) {
    if (tail.states.empty()) return head;
    if (head.states.empty()) return tail;
    head.states.insert(head.states.end(), tail.states.begin() + 1, tail.states.end());
    head.controls.insert(head.controls.end(), tail.controls.begin(), tail.controls.end());
    head.length += tail.length;
    return head;
}

}  // namespace cprrt
