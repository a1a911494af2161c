#pragma once

#include <string>

#include <json.hpp>

#include "cprrt/conformal.hpp"
#include "cprrt/planner.hpp"
#include "cprrt/state.hpp"
#include "cprrt/world.hpp"

namespace cprrt {

// Problem file:
//   { "bounds": [xmin,ymin,xmax,ymax], "obstacles": [[xmin,ymin,xmax,ymax],...],
//     "start": [x,y], "goal_center": [x,y], "goal_radius": r }
nlohmann::json problem_to_json(const PlanningProblem& problem);
PlanningProblem problem_from_json(const nlohmann::json& j);

// Trajectory file: { "model": tag, "states": [[...],...], "length": L }.
// State arrays carry 2/3/5 components depending on the model; controls are
// not serialized.
nlohmann::json trajectory_to_json(const Trajectory& t, Model model);
Trajectory trajectory_from_json(const nlohmann::json& j, Model* model_out = nullptr);

// Calibration model file:
//   { "q_hat": float|"inf", "alpha": a, "n_cal": n, "scores": [...],
//     "predictor": tag, "distribution": tag, "skipped": k }
nlohmann::json calibration_model_to_json(const CalibrationModel& model);
CalibrationModel calibration_model_from_json(const nlohmann::json& j);

// Tree dump for visualization: nodes with parent ids and states.
nlohmann::json tree_to_json(const Tree& tree, Model model);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace cprrt
