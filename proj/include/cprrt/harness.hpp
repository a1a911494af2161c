#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cprrt/conformal.hpp"
#include "cprrt/planner.hpp"

namespace cprrt {

struct PlannerSpec {
    std::string tag;  // "uniform", "goal_biased", "cp"
    SamplerConfig sampler;
};

struct ExperimentConfig {
    Model model = Model::holonomic;
    std::vector<int> densities{30};
    bool maze = false;            // maze suite instead of density worlds
    int n_worlds = 20;            // per density (or maze count)
    int repeats = 10;             // runs per (planner, world)
    std::vector<PlannerSpec> planners;
    double alpha = 0.1;
    std::uint64_t iterations = 20000;
    std::uint64_t seed = 1;
    std::string predictor = "astar";  // "astar" or "file:<path>"
    CalibrationModel calib;           // consumed by cp planners
    bool serial = false;
    int threads = 0;  // 0 = hardware concurrency
};

struct RunResult {
    std::string planner;
    std::string problem_id;
    std::uint64_t seed = 0;
    bool success = false;
    double time_s = 0.0;                 // valid iff success
    std::uint64_t iters_to_first = 0;    // valid iff success
    double first_cost = 0.0;             // valid iff success
    std::uint64_t nodes = 0;
    std::uint64_t fallbacks = 0;
};

struct AggregateRow {
    std::string planner;
    int runs = 0;
    double success_rate = 0.0;
    double mean_time_s = 0.0;
    double median_time_s = 0.0;
    double std_time_s = 0.0;
    double mean_first_cost = 0.0;
    // Versus the uniform row of the same suite; 0 when absent.
    double mean_improvement_pct = 0.0;
    double median_improvement_pct = 0.0;
};

struct BenchmarkResult {
    std::vector<RunResult> rows;
    std::vector<AggregateRow> aggregate;
    nlohmann::json config;
};

// Uniform RRT* for the full budget; Remark-style stand-in for the optimal
// solution.
std::optional<Trajectory> solve_approx_optimal(const PlanningProblem& problem,
                                               const ModelParams& params,
                                               std::uint64_t iterations, std::uint64_t seed,
                                               double* cost_out = nullptr);

struct CalibrationBuild {
    std::vector<CalibrationRecord> records;
    int resampled = 0;
};

// Samples problems from the density distribution and solves each with
// uniform RRT*; unsolved problems are resampled. Throws when more than
// 3*n_cal resamples are needed.
CalibrationBuild build_calibration(Model solver_model, int density, int n_cal,
                                   std::uint64_t iterations, std::uint64_t seed,
                                   int threads = 0);

// JSONL: one {"problem": ..., "solution": ...} record per line.
void save_calibration_records(const std::string& path,
                              const std::vector<CalibrationRecord>& records, Model model);
std::vector<CalibrationRecord> load_calibration_records(const std::string& path);

// "astar" or "file:<path>".
PredictorFn make_predictor(const std::string& spec);

PlannerSpec make_planner_spec(const std::string& tag, double p_bias = 0.5);

BenchmarkResult run_benchmark(const ExperimentConfig& cfg);
void write_benchmark_csv(const BenchmarkResult& result, const std::string& rows_path,
                         const std::string& aggregate_path);

struct CoverageReport {
    double alpha = 0.0;
    double q_hat = 0.0;
    int n_test = 0;
    int covered = 0;
    double coverage = 0.0;
    int resampled = 0;
    std::vector<double> scores;
};

// Fresh problems from the calibration distribution; reports the fraction of
// approx-optimal solutions whose score stays within q_hat.
CoverageReport eval_coverage(int density, const CalibrationModel& calib, int n_test,
                             std::uint64_t iterations, std::uint64_t seed,
                             Model solver_model = Model::holonomic, int threads = 0);
nlohmann::json coverage_to_json(const CoverageReport& report);

struct SweepCell {
    double alpha = 0.0;
    double p_bias = 0.0;
    AggregateRow agg;
};

struct SweepResult {
    AggregateRow baseline;  // uniform
    std::vector<SweepCell> cells;
    std::vector<RunResult> rows;
    nlohmann::json config;
};

// Benchmarks cp across the alpha x p_bias grid against one shared uniform
// baseline; calibration is re-run per alpha from the same records.
SweepResult sweep(const ExperimentConfig& base, const std::vector<CalibrationRecord>& records,
                  const std::vector<double>& alphas, const std::vector<double>& p_biases);
void write_sweep_csv(const SweepResult& result, const std::string& cells_path,
                     const std::string& matrix_path);

// Shared CSV plumbing (also used by tests to recompute aggregates).
std::string format_g9(double v);
std::vector<std::vector<std::string>> read_csv(const std::string& path);
const char* build_id();

}  // namespace cprrt
