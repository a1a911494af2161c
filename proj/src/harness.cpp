#include "cprrt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cprrt/json_io.hpp"
#include "cprrt/rng.hpp"
#include "cprrt/worldgen.hpp"

#ifndef CPRRT_BUILD_ID
#define CPRRT_BUILD_ID "unknown"
#endif

namespace cprrt {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int resolve_threads(bool serial, int requested) {
    if (serial) return 1;
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on a small pool; results land wherever fn
// writes them, indexed by i, so the outcome is order-independent. The first
// exception thrown by a task is rethrown here after the pool drains.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                if (failed.load()) return;
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

json config_to_json(const ExperimentConfig& cfg) {
    json planners = json::array();
    for (const auto& ps : cfg.planners) {
        planners.push_back({{"tag", ps.tag},
                            {"p_bias", ps.sampler.p_bias},
                            {"goal_bias_prob", ps.sampler.goal_bias_prob},
                            {"goal_std", ps.sampler.goal_std}});
    }
    return json{{"model", model_name(cfg.model)}, {"densities", cfg.densities},
                {"maze", cfg.maze},               {"n_worlds", cfg.n_worlds},
                {"repeats", cfg.repeats},         {"planners", planners},
                {"alpha", cfg.alpha},             {"iterations", cfg.iterations},
                {"seed", cfg.seed},               {"predictor", cfg.predictor}};
}

struct ProblemEntry {
    std::string id;
    PlanningProblem problem;
};

std::vector<ProblemEntry> make_problem_suite(const ExperimentConfig& cfg) {
    std::vector<ProblemEntry> out;
    char buf[64];
    if (cfg.maze) {
        for (int i = 0; i < cfg.n_worlds; ++i) {
            std::snprintf(buf, sizeof buf, "maze-w%03d", i);
            out.push_back({buf, generate_maze_world(mix_seed(cfg.seed, 0x3a5eULL, static_cast<std::uint64_t>(i)))});
        }
        return out;
    }
    for (const int density : cfg.densities) {
        for (int i = 0; i < cfg.n_worlds; ++i) {
            std::snprintf(buf, sizeof buf, "d%02d-w%03d", density, i);
            out.push_back({buf, generate_density_world(
                                    density, mix_seed(cfg.seed, 0xd175ULL,
                                                      static_cast<std::uint64_t>(density),
                                                      static_cast<std::uint64_t>(i)))});
        }
    }
    return out;
}

AggregateRow aggregate_planner(const std::string& tag, const std::vector<RunResult>& rows,
                               const AggregateRow* baseline) {
    AggregateRow agg;
    agg.planner = tag;
    std::vector<double> times, costs;
    for (const auto& r : rows) {
        if (r.planner != tag) continue;
        ++agg.runs;
        if (r.success) {
            times.push_back(r.time_s);
            costs.push_back(r.first_cost);
        }
    }
    if (agg.runs > 0) {
        agg.success_rate = static_cast<double>(times.size()) / agg.runs;
    }
    agg.mean_time_s = mean_of(times);
    agg.median_time_s = median_of(times);
    agg.std_time_s = stddev_of(times);
    agg.mean_first_cost = mean_of(costs);
    if (baseline && baseline->mean_time_s > 0.0) {
        agg.mean_improvement_pct = 100.0 * (1.0 - agg.mean_time_s / baseline->mean_time_s);
    }
    if (baseline && baseline->median_time_s > 0.0) {
        agg.median_improvement_pct =
            100.0 * (1.0 - agg.median_time_s / baseline->median_time_s);
    }
    return agg;
}

}  // namespace

std::optional<Trajectory> solve_approx_optimal(const PlanningProblem& problem,
                                               const ModelParams& params,
                                               std::uint64_t iterations, std::uint64_t seed,
                                               double* cost_out) {
    SamplerConfig sampler;
    sampler.kind = SamplerConfig::Kind::uniform;
    PlannerConfig pc;
    pc.max_iterations = iterations;
    pc.seed = seed;
    pc.stop_at_first = false;
    PlanResult res = plan(problem, params, sampler, pc);
    if (cost_out && res.best) *cost_out = res.best->length;
    return res.best;
}

CalibrationBuild build_calibration(Model solver_model, int density, int n_cal,
                                   std::uint64_t iterations, std::uint64_t seed, int threads) {
    if (n_cal < 1) throw std::invalid_argument("n_cal must be >= 1");
    const ModelParams params = ModelParams::defaults(solver_model);
    CalibrationBuild out;
    const int workers = resolve_threads(false, threads);

    int next_idx = 0;
    while (static_cast<int>(out.records.size()) < n_cal) {
        const int chunk = std::max(workers, n_cal - static_cast<int>(out.records.size()));
        std::vector<std::optional<CalibrationRecord>> results(static_cast<std::size_t>(chunk));
        parallel_for(chunk, workers, [&](int i) {
            const int idx = next_idx + i;
            CalibrationRecord rec;
            rec.problem = generate_density_world(
                density, mix_seed(seed, 0xca11bULL, static_cast<std::uint64_t>(idx)));
            auto sol = solve_approx_optimal(rec.problem, params, iterations,
                                            mix_seed(seed, 0x501fULL, static_cast<std::uint64_t>(idx)));
            if (!sol) return;
            rec.solution = std::move(*sol);
            results[static_cast<std::size_t>(i)] = std::move(rec);
        });
        next_idx += chunk;
        for (auto& r : results) {
            if (static_cast<int>(out.records.size()) >= n_cal) break;
            if (r) {
                out.records.push_back(std::move(*r));
            } else {
                ++out.resampled;
                if (out.resampled > 3 * n_cal) {
                    throw std::runtime_error(
                        "build_calibration: too many unsolved problems for this budget");
                }
            }
        }
    }
    return out;
}

void save_calibration_records(const std::string& path,
                              const std::vector<CalibrationRecord>& records, Model model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (const auto& rec : records) {
        json line{{"problem", problem_to_json(rec.problem)},
                  {"solution", trajectory_to_json(rec.solution, model)}};
        out << line.dump() << "\n";
    }
}

std::vector<CalibrationRecord> load_calibration_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<CalibrationRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("invalid JSONL record: " + std::string(e.what()));
        }
        CalibrationRecord rec;
        rec.problem = problem_from_json(j.at("problem"));
        rec.solution = trajectory_from_json(j.at("solution"));
        out.push_back(std::move(rec));
    }
    return out;
}

PredictorFn make_predictor(const std::string& spec) {
    if (spec == "astar") {
        return [](const PlanningProblem& p) { return astar_predict(p); };
    }
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        return [path](const PlanningProblem& p) -> std::optional<PredictedPath> {
            return load_external_path(path, p);
        };
    }
    throw std::invalid_argument("unknown predictor spec: " + spec);
}

PlannerSpec make_planner_spec(const std::string& tag, double p_bias) {
    PlannerSpec spec;
    spec.tag = tag;
    if (tag == "uniform") {
        spec.sampler.kind = SamplerConfig::Kind::uniform;
    } else if (tag == "goal_biased") {
        spec.sampler.kind = SamplerConfig::Kind::goal_biased;
    } else if (tag == "cp") {
        spec.sampler.kind = SamplerConfig::Kind::cp;
        spec.sampler.p_bias = p_bias;
        // Uniform-random waypoint selection. Cycling through the indices
        // finds first solutions faster (wavefront growth along the route)
        // but the hastier first paths cost several percent more; the
        // random default trades a little speed for first-path quality.
    } else {
        throw std::invalid_argument("unknown planner tag: " + tag);
    }
    return spec;
}

BenchmarkResult run_benchmark(const ExperimentConfig& cfg) {
    BenchmarkResult result;
    result.config = config_to_json(cfg);

    const auto suite = make_problem_suite(cfg);
    const ModelParams params = ModelParams::defaults(cfg.model);
    const PredictorFn predictor = make_predictor(cfg.predictor);

    struct Task {
        const PlannerSpec* planner;
        const ProblemEntry* entry;
        int problem_index;
        int repeat;
    };
    std::vector<Task> tasks;
    // Interleave planners within each (problem, repeat) so concurrent load is
    // symmetric across planners.
    for (int pi = 0; pi < static_cast<int>(suite.size()); ++pi) {
        for (int rep = 0; rep < cfg.repeats; ++rep) {
            for (const auto& ps : cfg.planners) {
                tasks.push_back({&ps, &suite[static_cast<std::size_t>(pi)], pi, rep});
            }
        }
    }

    result.rows.resize(tasks.size());
    const int workers = resolve_threads(cfg.serial, cfg.threads);
    const auto run_task = [&](int ti) {
        const Task& task = tasks[static_cast<std::size_t>(ti)];
        const std::uint64_t run_seed =
            mix_seed(cfg.seed, 0x5eedULL, static_cast<std::uint64_t>(task.problem_index),
                     static_cast<std::uint64_t>(task.repeat));

        PlannerConfig pc;
        pc.max_iterations = cfg.iterations;
        pc.seed = run_seed;
        pc.stop_at_first = true;

        SamplerConfig sampler = task.planner->sampler;
        PredictionRegions regions;
        const PredictionRegions* regions_ptr = nullptr;

        const auto t0 = Clock::now();
        if (sampler.kind == SamplerConfig::Kind::cp) {
            const auto path = predictor(task.entry->problem);
            if (path) {
                regions.path = *path;
                regions.q_hat = cfg.calib.q_hat;
                regions_ptr = &regions;
            } else {
                sampler.kind = SamplerConfig::Kind::uniform;  // no grid path
            }
        }
        const double prep_s = std::chrono::duration<double>(Clock::now() - t0).count();

        const PlanResult res = plan(task.entry->problem, params, sampler, pc, regions_ptr);

        RunResult row;
        row.planner = task.planner->tag;
        row.problem_id = task.entry->id;
        row.seed = run_seed;
        row.success = res.stats.solved;
        if (row.success) {
            row.time_s = prep_s + res.stats.time_to_first_s;
            row.iters_to_first = res.stats.iterations_to_first;
            row.first_cost = res.stats.first_cost;
        }
        row.nodes = res.stats.node_count;
        row.fallbacks = res.stats.sampler_fallbacks;
        result.rows[static_cast<std::size_t>(ti)] = std::move(row);
    };
    try {
        parallel_for(static_cast<int>(tasks.size()), workers, run_task);
    } catch (const std::exception& e) {
        // Keep whatever completed; an aborted suite still produces rows.
        std::cerr << "run_benchmark interrupted: " << e.what() << "\n";
        result.config["interrupted"] = true;
        std::vector<RunResult> done;
        for (auto& row : result.rows) {
            if (!row.planner.empty()) done.push_back(std::move(row));
        }
        result.rows = std::move(done);
    }

    const AggregateRow* baseline = nullptr;
    AggregateRow uniform_agg;
    for (const auto& ps : cfg.planners) {
        if (ps.tag == "uniform") {
            uniform_agg = aggregate_planner("uniform", result.rows, nullptr);
            baseline = &uniform_agg;
            break;
        }
    }
    for (const auto& ps : cfg.planners) {
        if (baseline && ps.tag == "uniform") {
            result.aggregate.push_back(uniform_agg);
        } else {
            result.aggregate.push_back(aggregate_planner(ps.tag, result.rows, baseline));
        }
    }
    return result;
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

void write_provenance(std::ofstream& out, const json& config) {
    out << "# config: " << config.dump() << "\n";
    out << "# build: " << CPRRT_BUILD_ID << "\n";
}

void write_rows_csv(std::ofstream& out, const std::vector<RunResult>& rows) {
    out << "planner,problem_id,seed,success,time_s,iters_to_first,first_cost,nodes,fallbacks\n";
    for (const auto& r : rows) {
        out << r.planner << ',' << r.problem_id << ',' << r.seed << ',' << (r.success ? 1 : 0)
            << ',';
        if (r.success) {
            out << format_g9(r.time_s) << ',' << r.iters_to_first << ','
                << format_g9(r.first_cost);
        } else {
            out << ",,";
        }
        out << ',' << r.nodes << ',' << r.fallbacks << "\n";
    }
}

void write_aggregate_header(std::ofstream& out) {
    out << "planner,runs,success_rate,mean_time_s,median_time_s,std_time_s,"
           "mean_first_cost,mean_improvement_pct,median_improvement_pct\n";
}

void write_aggregate_row(std::ofstream& out, const AggregateRow& a) {
    out << a.planner << ',' << a.runs << ',' << format_g9(a.success_rate) << ','
        << format_g9(a.mean_time_s) << ',' << format_g9(a.median_time_s) << ','
        << format_g9(a.std_time_s) << ',' << format_g9(a.mean_first_cost) << ','
        << format_g9(a.mean_improvement_pct) << ',' << format_g9(a.median_improvement_pct)
        << "\n";
}

}  // namespace

void write_benchmark_csv(const BenchmarkResult& result, const std::string& rows_path,
                         const std::string& aggregate_path) {
    std::ofstream rows(rows_path);
    if (!rows) throw std::runtime_error("cannot write file: " + rows_path);
    write_provenance(rows, result.config);
    write_rows_csv(rows, result.rows);

    std::ofstream agg(aggregate_path);
    if (!agg) throw std::runtime_error("cannot write file: " + aggregate_path);
    write_provenance(agg, result.config);
    write_aggregate_header(agg);
    for (const auto& a : result.aggregate) write_aggregate_row(agg, a);
}

CoverageReport eval_coverage(int density, const CalibrationModel& calib, int n_test,
                             std::uint64_t iterations, std::uint64_t seed, Model solver_model,
                             int threads) {
    CoverageReport report;
    report.alpha = calib.alpha;
    report.q_hat = calib.q_hat;
    const ModelParams params = ModelParams::defaults(solver_model);
    const int workers = resolve_threads(false, threads);

    int next_idx = 0;
    while (report.n_test < n_test) {
        const int chunk = std::max(workers, n_test - report.n_test);
        std::vector<std::optional<double>> scores(static_cast<std::size_t>(chunk));
        parallel_for(chunk, workers, [&](int i) {
            const int idx = next_idx + i;
            const PlanningProblem problem = generate_density_world(
                density, mix_seed(seed, 0xc07eULL, static_cast<std::uint64_t>(idx)));
            const auto path = astar_predict(problem);
            if (!path) return;
            const auto sol = solve_approx_optimal(
                problem, params, iterations,
                mix_seed(seed, 0x7e57ULL, static_cast<std::uint64_t>(idx)));
            if (!sol) return;
            scores[static_cast<std::size_t>(i)] = ncs(*path, *sol);
        });
        next_idx += chunk;
        for (const auto& s : scores) {
            if (report.n_test >= n_test) break;
            if (!s) {
                ++report.resampled;
                continue;
            }
            ++report.n_test;
            report.scores.push_back(*s);
            if (*s <= calib.q_hat) ++report.covered;
        }
    }
    report.coverage = report.n_test > 0
                          ? static_cast<double>(report.covered) / report.n_test
                          : 0.0;
    return report;
}

nlohmann::json coverage_to_json(const CoverageReport& report) {
    double max_score = 0.0;
    for (const double s : report.scores) max_score = std::max(max_score, s);
    constexpr int bins = 10;
    std::vector<int> counts(bins, 0);
    std::vector<double> edges(bins + 1, 0.0);
    const double width = max_score > 0.0 ? max_score / bins : 1.0;
    for (int i = 0; i <= bins; ++i) edges[static_cast<std::size_t>(i)] = i * width;
    for (const double s : report.scores) {
        const int b = std::min(bins - 1, static_cast<int>(s / width));
        ++counts[static_cast<std::size_t>(b)];
    }
    return json{{"alpha", report.alpha},
                {"q_hat", std::isfinite(report.q_hat) ? json(report.q_hat) : json("inf")},
                {"n_test", report.n_test},
                {"covered", report.covered},
                {"coverage", report.coverage},
                {"resampled", report.resampled},
                {"scores", report.scores},
                {"histogram", {{"edges", edges}, {"counts", counts}}},
                {"build", CPRRT_BUILD_ID}};
}

SweepResult sweep(const ExperimentConfig& base, const std::vector<CalibrationRecord>& records,
                  const std::vector<double>& alphas, const std::vector<double>& p_biases) {
    SweepResult result;

    ExperimentConfig cfg = base;
    cfg.planners = {make_planner_spec("uniform")};
    BenchmarkResult baseline = run_benchmark(cfg);
    result.baseline = baseline.aggregate.front();
    result.rows = baseline.rows;
    result.config = config_to_json(base);
    result.config["alphas"] = alphas;
    result.config["p_biases"] = p_biases;

    const PredictorFn predictor = make_predictor(base.predictor);
    for (const double alpha : alphas) {
        const CalibrationModel model =
            calibrate(records, alpha, predictor, base.predictor, base.calib.distribution_tag);
        for (const double p_bias : p_biases) {
            ExperimentConfig cell_cfg = base;
            cell_cfg.alpha = alpha;
            cell_cfg.calib = model;
            cell_cfg.planners = {make_planner_spec("cp", p_bias)};
            BenchmarkResult cell = run_benchmark(cell_cfg);

            SweepCell sc;
            sc.alpha = alpha;
            sc.p_bias = p_bias;
            sc.agg = aggregate_planner("cp", cell.rows, &result.baseline);
            result.cells.push_back(sc);
            for (auto row : cell.rows) {
                row.planner = "cp_a" + format_g9(alpha) + "_b" + format_g9(p_bias);
                result.rows.push_back(std::move(row));
            }
        }
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& cells_path,
                     const std::string& matrix_path) {
    std::ofstream cells(cells_path);
    if (!cells) throw std::runtime_error("cannot write file: " + cells_path);
    write_provenance(cells, result.config);
    cells << "alpha,p_bias,runs,success_rate,mean_time_s,median_time_s,std_time_s,"
             "mean_first_cost,mean_improvement_pct,median_improvement_pct\n";
    cells << ",,"  // baseline row: no alpha/p_bias
          << result.baseline.runs << ',' << format_g9(result.baseline.success_rate) << ','
          << format_g9(result.baseline.mean_time_s) << ','
          << format_g9(result.baseline.median_time_s) << ','
          << format_g9(result.baseline.std_time_s) << ','
          << format_g9(result.baseline.mean_first_cost) << ",0,0\n";
    for (const auto& c : result.cells) {
        cells << format_g9(c.alpha) << ',' << format_g9(c.p_bias) << ',' << c.agg.runs << ','
              << format_g9(c.agg.success_rate) << ',' << format_g9(c.agg.mean_time_s) << ','
              << format_g9(c.agg.median_time_s) << ',' << format_g9(c.agg.std_time_s) << ','
              << format_g9(c.agg.mean_first_cost) << ','
              << format_g9(c.agg.mean_improvement_pct) << ','
              << format_g9(c.agg.median_improvement_pct) << "\n";
    }

    // Percent-improvement matrix: rows = alpha, cols = p_bias.
    std::ofstream matrix(matrix_path);
    if (!matrix) throw std::runtime_error("cannot write file: " + matrix_path);
    write_provenance(matrix, result.config);
    std::vector<double> alphas, p_biases;
    for (const auto& c : result.cells) {
        if (std::find(alphas.begin(), alphas.end(), c.alpha) == alphas.end())
            alphas.push_back(c.alpha);
        if (std::find(p_biases.begin(), p_biases.end(), c.p_bias) == p_biases.end())
            p_biases.push_back(c.p_bias);
    }
    matrix << "alpha";
    for (const double pb : p_biases) matrix << ",p_bias_" << format_g9(pb);
    matrix << "\n";
    for (const double a : alphas) {
        matrix << format_g9(a);
        for (const double pb : p_biases) {
            for (const auto& c : result.cells) {
                if (c.alpha == a && c.p_bias == pb) {
                    matrix << ',' << format_g9(c.agg.mean_improvement_pct);
                    break;
                }
            }
        }
        matrix << "\n";
    }
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

const char* build_id() { return CPRRT_BUILD_ID; }

}  // namespace cprrt
