#include "cprrt/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "cprrt/kdtree.hpp"
#include "cprrt/rng.hpp"

namespace cprrt {

namespace {

using Clock = std::chrono::steady_clock;

bool trajectory_obstacle_free(const World& world, const Trajectory& t) {
    for (const State& s : t.states) {
        if (!world.is_free(s.pos())) return false;
    }
    return true;
}

// Monte-Carlo estimate of the free-space area; fixed internal seed so the
// value depends only on the world.
double free_area_estimate(const World& world) {
    Rng rng(0x5eedfa11);
    const Rect& b = world.bounds();
    constexpr int n = 20000;
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
        if (world.is_free({rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax)})) {
            ++free_count;
        }
    }
    return b.area() * free_count / n;
}

double unit_ball_volume(int d) {
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// Cheap lower bound on the connection length, used to order and prune
// ChooseParent/Rewire candidates before building trajectories.
double connect_length_lb(const ModelParams& params, const State& a, const State& b) {
    switch (params.model) {
        case Model::holonomic:
            return dist(a.pos(), b.pos());
        case Model::dubins:
            if (a.pos() == b.pos() && wrap_angle(a.theta - b.theta) == 0.0) return 0.0;
            return dubins_length(a, b, params.kappa_max);
        case Model::car5d:
            return dist(a.pos(), b.pos());
    }
    return 0.0;
}

// Euclidean shortlist size for non-Euclidean nearest queries. A small
// shortlist misses well-aligned nodes that sit slightly farther away, which
// measurably hurts Dubins success rates in clutter.
#ifndef CPRRT_NN_CANDIDATES
#define CPRRT_NN_CANDIDATES 16
#endif

int nearest_node(const KdTree2& kd, const std::vector<TreeNode>& nodes,
                 const ModelParams& params, const State& x_rand) {
    if (params.model == Model::holonomic) return kd.nearest(x_rand.pos());
    // Euclidean shortlist re-ranked by the exact metric.
    const auto ids = kd.knn(x_rand.pos(), CPRRT_NN_CANDIDATES);
    int best = ids.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const int id : ids) {
        const double d = distance(params, nodes[static_cast<std::size_t>(id)].state, x_rand);
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    return best;
}

void recompute_subtree_costs(std::vector<TreeNode>& nodes, int root) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        for (const int child : nodes[static_cast<std::size_t>(id)].children) {
            nodes[static_cast<std::size_t>(child)].cost =
                nodes[static_cast<std::size_t>(id)].cost +
                nodes[static_cast<std::size_t>(child)].incoming.length;
            stack.push_back(child);
        }
    }
}

}  // namespace

PlanResult plan(const PlanningProblem& problem, const ModelParams& params,
                const SamplerConfig& sampler, const PlannerConfig& cfg,
                const PredictionRegions* regions) {
    if (sampler.kind == SamplerConfig::Kind::cp && regions == nullptr) {
        throw std::invalid_argument("plan: cp sampler requires prediction regions");
    }
    const auto t_start = Clock::now();

    PlanResult result;
    auto& nodes = result.tree.nodes;
    auto& stats = result.stats;

    double gamma = cfg.gamma;
    if (gamma <= 0.0) {
        const double mu = free_area_estimate(problem.world);
        const int d = cfg.dimension;
        gamma = 2.0 * std::pow(1.0 + 1.0 / d, 1.0 / d) *
                std::pow(mu / unit_ball_volume(d), 1.0 / d);
    }
    stats.gamma_used = gamma;

    Rng rng(cfg.seed);
    KdTree2 kd;
    TreeNode root;
    root.state = problem.x_init;
    nodes.push_back(std::move(root));
    kd.insert(problem.x_init.pos());

    for (std::uint64_t j = 1; j <= cfg.max_iterations; ++j) {
        stats.iterations_run = j;

        State x_rand;
        switch (sampler.kind) {
            case SamplerConfig::Kind::uniform:
                x_rand = sample_uniform_free(problem.world, params, rng);
                break;
            case SamplerConfig::Kind::goal_biased:
                x_rand = goal_biased_sample(problem, params, sampler, rng);
                break;
            case SamplerConfig::Kind::cp:
                x_rand = sample_cp(*regions, problem.world, params, sampler, rng, j - 1,
                                   &stats.sampler_fallbacks);
                break;
        }

        const int nearest_id = nearest_node(kd, nodes, params, x_rand);
        auto steered = steer(params, nodes[static_cast<std::size_t>(nearest_id)].state, x_rand);
        if (!steered || steered->states.size() < 2 || steered->length < 1e-9) continue;
        if (!trajectory_obstacle_free(problem.world, *steered)) continue;
        const State x_new = steered->states.back();

        const std::size_t n = nodes.size();
        const int d = cfg.dimension;
        const double r_n = std::min(
            gamma * std::pow(std::log(static_cast<double>(n)) / static_cast<double>(n), 1.0 / d),
            params.eta);
        const auto near_ids = kd.radius(x_new.pos(), r_n);

        // ChooseParent: cheapest collision-free connection into x_new.
        int best_parent = nearest_id;
        Trajectory best_traj = std::move(*steered);
        double best_cost = nodes[static_cast<std::size_t>(nearest_id)].cost + best_traj.length;
        for (const int z : near_ids) {
            if (z == nearest_id) continue;
            const TreeNode& zn = nodes[static_cast<std::size_t>(z)];
            if (zn.cost + connect_length_lb(params, zn.state, x_new) >= best_cost - 1e-12) continue;
            auto t = connect(params, zn.state, x_new);
            if (!t || t->states.size() < 2) continue;
            const double c = zn.cost + t->length;
            if (c >= best_cost - 1e-12) continue;
            if (!trajectory_obstacle_free(problem.world, *t)) continue;
            best_parent = z;
            best_traj = std::move(*t);
            best_cost = c;
        }

        const int new_id = static_cast<int>(nodes.size());
        TreeNode node;
        node.state = best_traj.states.back();
        node.parent = best_parent;
        node.cost = best_cost;
        node.incoming = std::move(best_traj);
        nodes.push_back(std::move(node));
        nodes[static_cast<std::size_t>(best_parent)].children.push_back(new_id);
        kd.insert(nodes.back().state.pos());

        if (in_goal(problem, nodes.back().state) && !stats.solved) {
            stats.solved = true;
            stats.iterations_to_first = j;
            stats.time_to_first_s =
                std::chrono::duration<double>(Clock::now() - t_start).count();
            stats.first_cost = nodes.back().cost;
            if (cfg.stop_at_first) break;
        }

        // Rewire: pull any near node through x_new when that strictly
        // lowers its cost-to-come.
        for (const int z : near_ids) {
            if (z == 0) continue;  // never reparent the root
            TreeNode& zn = nodes[static_cast<std::size_t>(z)];
            const double base = nodes[static_cast<std::size_t>(new_id)].cost;
            if (base + connect_length_lb(params, nodes[static_cast<std::size_t>(new_id)].state,
                                         zn.state) >= zn.cost - 1e-12) {
                continue;
            }
            auto t = connect(params, nodes[static_cast<std::size_t>(new_id)].state, zn.state);
            if (!t || t->states.size() < 2) continue;
            const double c = base + t->length;
            if (c >= zn.cost - 1e-12) continue;
            if (!trajectory_obstacle_free(problem.world, *t)) continue;
            auto& old_children = nodes[static_cast<std::size_t>(zn.parent)].children;
            old_children.erase(std::find(old_children.begin(), old_children.end(), z));
            zn.parent = new_id;
            zn.incoming = std::move(*t);
            zn.cost = c;
            nodes[static_cast<std::size_t>(new_id)].children.push_back(z);
            recompute_subtree_costs(nodes, z);
        }

        if (cfg.validate && (j % 250 == 0)) validate_tree(result.tree, problem, params);
    }

    stats.node_count = nodes.size();
    result.best = extract_solution(result.tree, problem);
    if (result.best) stats.best_cost = result.best->length;
    if (cfg.validate) validate_tree(result.tree, problem, params);
    return result;
}

std::optional<Trajectory> extract_solution(const Tree& tree, const PlanningProblem& problem) {
    int best = -1;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (!in_goal(problem, tree.nodes[i].state)) continue;
        if (best < 0 || tree.nodes[i].cost < tree.nodes[static_cast<std::size_t>(best)].cost) {
            best = static_cast<int>(i);
        }
    }
    if (best < 0) return std::nullopt;

    std::vector<int> chain;
    for (int cur = best; cur >= 0; cur = tree.nodes[static_cast<std::size_t>(cur)].parent) {
        chain.push_back(cur);
    }
    Trajectory out;
    out.states.push_back(tree.nodes[static_cast<std::size_t>(chain.back())].state);
    for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) {
        out = concat(std::move(out), tree.nodes[static_cast<std::size_t>(*it)].incoming);
    }
    return out;
}

void validate_tree(const Tree& tree, const PlanningProblem& problem,
                   const ModelParams& params) {
    const auto& nodes = tree.nodes;
    if (nodes.empty()) throw std::logic_error("tree has no root");
    if (nodes[0].parent != -1 || nodes[0].cost != 0.0) {
        throw std::logic_error("root must have no parent and zero cost");
    }
    const double endpoint_tol = params.model == Model::car5d ? kCar5dSnapTol + 1e-9 : 1e-9;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const TreeNode& n = nodes[i];
        if (n.parent < 0 || n.parent >= static_cast<int>(nodes.size())) {
            throw std::logic_error("bad parent id");
        }
        const TreeNode& p = nodes[static_cast<std::size_t>(n.parent)];
        if (std::abs(n.cost - (p.cost + n.incoming.length)) > 1e-9) {
            throw std::logic_error("cost-to-come inconsistent with parent");
        }
        if (n.incoming.states.size() < 2) throw std::logic_error("edge trajectory too short");
        if (!(n.incoming.states.front() == p.state)) {
            throw std::logic_error("edge does not start at the parent state");
        }
        if (dist(n.incoming.states.back().pos(), n.state.pos()) > endpoint_tol) {
            throw std::logic_error("edge does not end at the node state");
        }
        for (const State& s : n.incoming.states) {
            if (!problem.world.is_free(s.pos())) throw std::logic_error("edge collides");
        }
        // Acyclicity: parent chains must terminate at the root.
        std::size_t hops = 0;
        for (int cur = static_cast<int>(i); cur != 0; cur = nodes[static_cast<std::size_t>(cur)].parent) {
            if (++hops > nodes.size()) throw std::logic_error("parent chain cycle");
        }
    }
}

}  // namespace cprrt
