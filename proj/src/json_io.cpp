#include "cprrt/json_io.hpp"

#include <fstream>

#include "cprrt/predictor.hpp"

namespace cprrt {

using nlohmann::json;

json problem_to_json(const PlanningProblem& problem) {
    json j;
    const Rect& b = problem.world.bounds();
    j["bounds"] = {b.xmin, b.ymin, b.xmax, b.ymax};
    json obs = json::array();
    for (const Rect& r : problem.world.obstacles()) {
        obs.push_back({r.xmin, r.ymin, r.xmax, r.ymax});
    }
    j["obstacles"] = std::move(obs);
    j["start"] = {problem.x_init.x, problem.x_init.y};
    j["goal_center"] = {problem.goal_center.x, problem.goal_center.y};
    j["goal_radius"] = problem.goal_radius;
    return j;
}

PlanningProblem problem_from_json(const json& j) {
    const auto& jb = j.at("bounds");
    Rect bounds{jb.at(0).get<double>(), jb.at(1).get<double>(), jb.at(2).get<double>(),
                jb.at(3).get<double>()};
    std::vector<Rect> obstacles;
    for (const auto& jo : j.at("obstacles")) {
        obstacles.push_back({jo.at(0).get<double>(), jo.at(1).get<double>(),
                             jo.at(2).get<double>(), jo.at(3).get<double>()});
    }
    PlanningProblem p;
    p.world = World(bounds, std::move(obstacles));
    p.x_init = State{};
    p.x_init.x = j.at("start").at(0).get<double>();
    p.x_init.y = j.at("start").at(1).get<double>();
    p.goal_center = {j.at("goal_center").at(0).get<double>(),
                     j.at("goal_center").at(1).get<double>()};
    p.goal_radius = j.at("goal_radius").get<double>();
    return p;
}

namespace {

json state_to_json(const State& s, Model model) {
    switch (model) {
        case Model::holonomic: return {s.x, s.y};
        case Model::dubins: return {s.x, s.y, s.theta};
        case Model::car5d: return {s.x, s.y, s.theta, s.v, s.kappa};
    }
    return {s.x, s.y};
}

State state_from_json(const json& j) {
    State s;
    s.x = j.at(0).get<double>();
    s.y = j.at(1).get<double>();
    if (j.size() > 2) s.theta = j.at(2).get<double>();
    if (j.size() > 4) {
        s.v = j.at(3).get<double>();
        s.kappa = j.at(4).get<double>();
    }
    return s;
}

}  // namespace

json trajectory_to_json(const Trajectory& t, Model model) {
    json j;
    j["model"] = model_name(model);
    json states = json::array();
    for (const State& s : t.states) states.push_back(state_to_json(s, model));
    j["states"] = std::move(states);
    j["length"] = t.length;
    return j;
}

Trajectory trajectory_from_json(const json& j, Model* model_out) {
    Trajectory t;
    if (model_out) *model_out = model_from_name(j.at("model").get<std::string>());
    for (const auto& js : j.at("states")) t.states.push_back(state_from_json(js));
    t.length = j.at("length").get<double>();
    return t;
}

json calibration_model_to_json(const CalibrationModel& model) {
    json j;
    if (std::isfinite(model.q_hat)) {
        j["q_hat"] = model.q_hat;
    } else {
        j["q_hat"] = "inf";
    }
    j["alpha"] = model.alpha;
    j["n_cal"] = model.n_cal;
    j["scores"] = model.scores;
    j["predictor"] = model.predictor_tag;
    j["distribution"] = model.distribution_tag;
    j["skipped"] = model.skipped;
    return j;
}

CalibrationModel calibration_model_from_json(const json& j) {
    CalibrationModel m;
    if (j.at("q_hat").is_string()) {
        m.q_hat = std::numeric_limits<double>::infinity();
    } else {
        m.q_hat = j.at("q_hat").get<double>();
    }
    m.alpha = j.at("alpha").get<double>();
    m.n_cal = j.at("n_cal").get<int>();
    m.scores = j.at("scores").get<std::vector<double>>();
    m.predictor_tag = j.at("predictor").get<std::string>();
    m.distribution_tag = j.at("distribution").get<std::string>();
    m.skipped = j.value("skipped", 0);
    return m;
}

json tree_to_json(const Tree& tree, Model model) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes) {
        nodes.push_back({{"state", state_to_json(n.state, model)},
                         {"parent", n.parent},
                         {"cost", n.cost}});
    }
    return json{{"model", model_name(model)}, {"nodes", std::move(nodes)}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cprrt
