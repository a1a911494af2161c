// Command-line front end: world generation, calibration, planning, and the
// benchmark/sweep/coverage pipelines.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cprrt/harness.hpp"
#include "cprrt/json_io.hpp"
#include "cprrt/worldgen.hpp"

namespace fs = std::filesystem;
using namespace cprrt;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split_list(s)) out.push_back(std::stod(tok));
    return out;
}

CalibrationModel load_calib_model(const std::string& path) {
    return calibration_model_from_json(load_json_file(path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cprrt: conformal-prediction-guided RRT* planning toolkit"};
    app.require_subcommand(1);

    std::string model_str = "holonomic";
    int density = 30;
    double alpha = 0.1;
    double p_bias = 0.5;
    std::uint64_t iters = 20000;
    std::uint64_t seed = 1;
    std::string predictor = "astar";
    std::string out;
    bool serial = false;
    bool full_scale = false;

    const auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--model", model_str, "robot model: holonomic, dubins, car5d");
        cmd->add_option("--density", density, "obstacle density percent");
        cmd->add_option("--alpha", alpha, "miscoverage level");
        cmd->add_option("--p-bias", p_bias, "biased sampling probability");
        cmd->add_option("--iters", iters, "planner iteration budget");
        cmd->add_option("--seed", seed, "base random seed");
        cmd->add_option("--predictor", predictor, "path predictor: astar or file:<path>");
        cmd->add_option("--out", out, "output file or directory");
        cmd->add_flag("--serial", serial, "disable the worker pool");
        cmd->add_flag("--full-scale", full_scale, "full suite sizes (50 worlds x 30 repeats)");
    };

    // gen-worlds
    auto* gen_worlds = app.add_subcommand("gen-worlds", "generate density worlds as JSON");
    int count = 10;
    gen_worlds->add_option("--count", count, "number of worlds");
    add_shared(gen_worlds);
    gen_worlds->callback([&] {
        fs::create_directories(out.empty() ? "." : out);
        for (int i = 0; i < count; ++i) {
            const auto problem =
                generate_density_world(density, mix_seed(seed, 0xd175ULL,
                                                         static_cast<std::uint64_t>(density),
                                                         static_cast<std::uint64_t>(i)));
            char name[64];
            std::snprintf(name, sizeof name, "world_d%02d_%03d.json", density, i);
            save_json_file((fs::path(out.empty() ? "." : out) / name).string(),
                           problem_to_json(problem));
        }
        std::cout << "wrote " << count << " density-" << density << " worlds\n";
    });

    // gen-maze
    auto* gen_maze = app.add_subcommand("gen-maze", "generate maze worlds as JSON");
    gen_maze->add_option("--count", count, "number of mazes");
    add_shared(gen_maze);
    gen_maze->callback([&] {
        fs::create_directories(out.empty() ? "." : out);
        for (int i = 0; i < count; ++i) {
            const auto problem =
                generate_maze_world(mix_seed(seed, 0x3a5eULL, static_cast<std::uint64_t>(i)));
            char name[64];
            std::snprintf(name, sizeof name, "maze_%03d.json", i);
            save_json_file((fs::path(out.empty() ? "." : out) / name).string(),
                           problem_to_json(problem));
        }
        std::cout << "wrote " << count << " mazes\n";
    });

    // build-calib
    auto* build_calib = app.add_subcommand("build-calib", "build a calibration dataset (JSONL)");
    int n_cal = 50;
    build_calib->add_option("--n-cal", n_cal, "number of calibration records");
    add_shared(build_calib);
    build_calib->callback([&] {
        const Model model = model_from_name(model_str);
        const auto built = build_calibration(model, density, n_cal, iters, seed,
                                             serial ? 1 : 0);
        const std::string path = out.empty() ? "calibration.jsonl" : out;
        save_calibration_records(path, built.records, model);
        std::cout << "wrote " << built.records.size() << " records to " << path << " ("
                  << built.resampled << " resampled)\n";
    });

    // calibrate
    auto* calibrate_cmd = app.add_subcommand("calibrate", "compute the conformal quantile");
    std::string records_path;
    std::string distribution_tag;
    calibrate_cmd->add_option("--records", records_path, "calibration JSONL file")->required();
    calibrate_cmd->add_option("--distribution", distribution_tag, "distribution tag, e.g. D10");
    add_shared(calibrate_cmd);
    calibrate_cmd->callback([&] {
        const auto records = load_calibration_records(records_path);
        const auto model = calibrate(records, alpha, make_predictor(predictor), predictor,
                                     distribution_tag.empty() ? ("D" + std::to_string(density))
                                                              : distribution_tag);
        const std::string path = out.empty() ? "calibration_model.json" : out;
        save_json_file(path, calibration_model_to_json(model));
        std::cout << "q_hat=" << model.q_hat << " n_cal=" << model.n_cal << " -> " << path
                  << "\n";
    });

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "solve one problem");
    std::string problem_path, planner_tag = "uniform", calib_path, dump_tree_path;
    bool full_run = false;
    plan_cmd->add_option("--problem", problem_path, "problem JSON file")->required();
    plan_cmd->add_option("--planner", planner_tag, "uniform, goal_biased, or cp");
    plan_cmd->add_option("--calib-model", calib_path, "calibration model JSON (for cp)");
    plan_cmd->add_option("--dump-tree", dump_tree_path, "write the search tree as JSON");
    plan_cmd->add_flag("--full", full_run, "run the whole budget instead of stopping at the first solution");
    add_shared(plan_cmd);
    plan_cmd->callback([&] {
        const Model model = model_from_name(model_str);
        const ModelParams params = ModelParams::defaults(model);
        const PlanningProblem problem = problem_from_json(load_json_file(problem_path));

        PlannerSpec spec = make_planner_spec(planner_tag, p_bias);
        PlannerConfig pc;
        pc.max_iterations = iters;
        pc.seed = seed;
        pc.stop_at_first = !full_run;

        PredictionRegions regions;
        const PredictionRegions* regions_ptr = nullptr;
        if (spec.sampler.kind == SamplerConfig::Kind::cp) {
            if (calib_path.empty()) throw CLI::ValidationError("--calib-model is required for cp");
            const auto calib = load_calib_model(calib_path);
            const auto path = make_predictor(predictor)(problem);
            if (path) {
                regions.path = *path;
                regions.q_hat = calib.q_hat;
                regions_ptr = &regions;
            } else {
                std::cerr << "predictor found no path; planning with uniform sampling\n";
                spec.sampler.kind = SamplerConfig::Kind::uniform;
            }
        }

        const PlanResult res = plan(problem, params, spec.sampler, pc, regions_ptr);
        std::cout << (res.stats.solved ? "solved" : "no solution") << " nodes="
                  << res.stats.node_count;
        if (res.stats.solved) {
            std::cout << " iters_to_first=" << res.stats.iterations_to_first
                      << " time_to_first=" << res.stats.time_to_first_s << "s first_cost="
                      << res.stats.first_cost << " best_cost=" << res.stats.best_cost;
        }
        std::cout << "\n";
        if (!out.empty() && res.best) {
            save_json_file(out, trajectory_to_json(*res.best, model));
        }
        if (!dump_tree_path.empty()) {
            save_json_file(dump_tree_path, tree_to_json(res.tree, model));
        }
    });

    // bench
    auto* bench = app.add_subcommand("bench", "comparative benchmark, CSV output");
    std::string planners_str = "uniform,goal_biased,cp";
    std::string bench_calib_path;
    int n_worlds = 20, repeats = 10;
    bool maze = false;
    bench->add_option("--planners", planners_str, "comma list: uniform,goal_biased,cp");
    bench->add_option("--worlds", n_worlds, "worlds per density");
    bench->add_option("--repeats", repeats, "repeats per world");
    bench->add_option("--calib-model", bench_calib_path, "calibration model JSON (for cp)");
    bench->add_flag("--maze", maze, "use maze worlds");
    add_shared(bench);
    bench->callback([&] {
        ExperimentConfig cfg;
        cfg.model = model_from_name(model_str);
        cfg.densities = {density};
        cfg.maze = maze;
        cfg.n_worlds = full_scale ? 50 : n_worlds;
        cfg.repeats = full_scale ? 30 : repeats;
        cfg.alpha = alpha;
        cfg.iterations = iters;
        cfg.seed = seed;
        cfg.predictor = predictor;
        cfg.serial = serial;
        for (const auto& tag : split_list(planners_str)) {
            cfg.planners.push_back(make_planner_spec(tag, p_bias));
            if (tag == "cp") {
                if (bench_calib_path.empty()) {
                    throw CLI::ValidationError("--calib-model is required for cp");
                }
                cfg.calib = load_calib_model(bench_calib_path);
            }
        }
        const auto result = run_benchmark(cfg);
        const fs::path dir = out.empty() ? "." : out;
        fs::create_directories(dir);
        write_benchmark_csv(result, (dir / "bench_rows.csv").string(),
                            (dir / "bench_aggregate.csv").string());
        for (const auto& a : result.aggregate) {
            std::printf("%-12s success=%.3f mean=%.3fs median=%.3fs improv=%.1f%%\n",
                        a.planner.c_str(), a.success_rate, a.mean_time_s, a.median_time_s,
                        a.mean_improvement_pct);
        }
    });

    // coverage
    auto* coverage = app.add_subcommand("coverage", "empirical coverage report");
    std::string cov_calib_path;
    int n_test = 200;
    coverage->add_option("--calib-model", cov_calib_path, "calibration model JSON")->required();
    coverage->add_option("--n-test", n_test, "number of test problems");
    add_shared(coverage);
    coverage->callback([&] {
        const auto calib = load_calib_model(cov_calib_path);
        const auto report = eval_coverage(density, calib, n_test, iters, seed,
                                          model_from_name(model_str), serial ? 1 : 0);
        const std::string path = out.empty() ? "coverage.json" : out;
        save_json_file(path, coverage_to_json(report));
        std::cout << "coverage=" << report.coverage << " (" << report.covered << "/"
                  << report.n_test << ", q_hat=" << report.q_hat << ")\n";
    });

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "alpha x p_bias parameter sweep");
    std::string sweep_records, alphas_str = "0.02,0.1,0.2,0.3,0.4",
                               p_biases_str = "0.25,0.5,0.75";
    sweep_cmd->add_option("--records", sweep_records, "calibration JSONL file")->required();
    sweep_cmd->add_option("--alphas", alphas_str, "comma list of alpha values");
    sweep_cmd->add_option("--p-biases", p_biases_str, "comma list of p_bias values");
    sweep_cmd->add_option("--worlds", n_worlds, "worlds per density");
    sweep_cmd->add_option("--repeats", repeats, "repeats per world");
    add_shared(sweep_cmd);
    sweep_cmd->callback([&] {
        ExperimentConfig cfg;
        cfg.model = model_from_name(model_str);
        cfg.densities = {density};
        cfg.n_worlds = full_scale ? 50 : n_worlds;
        cfg.repeats = full_scale ? 30 : repeats;
        cfg.iterations = iters;
        cfg.seed = seed;
        cfg.predictor = predictor;
        cfg.serial = serial;
        cfg.calib.distribution_tag = "D" + std::to_string(density);
        const auto records = load_calibration_records(sweep_records);
        const auto result = sweep(cfg, records, parse_doubles(alphas_str),
                                  parse_doubles(p_biases_str));
        const fs::path dir = out.empty() ? "." : out;
        fs::create_directories(dir);
        write_sweep_csv(result, (dir / "sweep_cells.csv").string(),
                        (dir / "sweep_matrix.csv").string());
        std::printf("baseline mean=%.3fs; %zu cells written\n", result.baseline.mean_time_s,
                    result.cells.size());
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
