#pragma once

#include <algorithm>
#include <vector>

#include "cprrt/geom.hpp"

namespace cprrt {

// Incremental 2-D kd-tree over point ids (insertion order). No rebalancing;
// queries are exact and deterministic, ties resolved by lowest id.
class KdTree2 {
public:
    int insert(const Vec2& p) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({p, -1, -1});
        if (id == 0) return 0;
        int cur = 0;
        int depth = 0;
        for (;;) {
            const bool left = coord(p, depth) < coord(nodes_[static_cast<std::size_t>(cur)].p, depth);
            int& child = left ? nodes_[static_cast<std::size_t>(cur)].left
                              : nodes_[static_cast<std::size_t>(cur)].right;
            if (child < 0) {
                child = id;
                return id;
            }
            cur = child;
            ++depth;
        }
    }

    std::size_t size() const { return nodes_.size(); }
    const Vec2& point(int id) const { return nodes_[static_cast<std::size_t>(id)].p; }

    int nearest(const Vec2& q) const {
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        nearest_rec(0, 0, q, best, best_d2);
        return best;
    }

    // k nearest by Euclidean distance, sorted by (distance, id).
    std::vector<int> knn(const Vec2& q, std::size_t k) const {
        std::vector<std::pair<double, int>> best;  // (d2, id), kept sorted
        if (!nodes_.empty()) knn_rec(0, 0, q, k, best);
        std::vector<int> ids;
        ids.reserve(best.size());
        for (const auto& [d2, id] : best) ids.push_back(id);
        return ids;
    }

    // All ids with Euclidean distance <= r, sorted by id.
    std::vector<int> radius(const Vec2& q, double r) const {
        std::vector<int> out;
        if (!nodes_.empty() && r >= 0.0) radius_rec(0, 0, q, r * r, out);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Node {
        Vec2 p;
        int left;
        int right;
    };
    std::vector<Node> nodes_;

    static double coord(const Vec2& p, int depth) { return (depth & 1) ? p.y : p.x; }

    void nearest_rec(int id, int depth, const Vec2& q, int& best, double& best_d2) const {
        if (id < 0) return;
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        const double d2 = dist_sq(n.p, q);
        if (d2 < best_d2 || (d2 == best_d2 && id < best)) {
            best_d2 = d2;
            best = id;
        }
        const double delta = coord(q, depth) - coord(n.p, depth);
        const int near_child = delta < 0.0 ? n.left : n.right;
        const int far_child = delta < 0.0 ? n.right : n.left;
        nearest_rec(near_child, depth + 1, q, best, best_d2);
        if (delta * delta <= best_d2) nearest_rec(far_child, depth + 1, q, best, best_d2);
    }

    void knn_rec(int id, int depth, const Vec2& q, std::size_t k,
                 std::vector<std::pair<double, int>>& best) const {
        if (id < 0) return;
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        const std::pair<double, int> cand{dist_sq(n.p, q), id};
        if (best.size() < k || cand < best.back()) {
            best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
            if (best.size() > k) best.pop_back();
        }
        const double delta = coord(q, depth) - coord(n.p, depth);
        const int near_child = delta < 0.0 ? n.left : n.right;
        const int far_child = delta < 0.0 ? n.right : n.left;
        knn_rec(near_child, depth + 1, q, k, best);
        if (best.size() < k || delta * delta <= best.back().first) {
            knn_rec(far_child, depth + 1, q, k, best);
        }
    }

    void radius_rec(int id, int depth, const Vec2& q, double r2, std::vector<int>& out) const {
        if (id < 0) return;
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        if (dist_sq(n.p, q) <= r2) out.push_back(id);
        const double delta = coord(q, depth) - coord(n.p, depth);
        const int near_child = delta < 0.0 ? n.left : n.right;
        const int far_child = delta < 0.0 ? n.right : n.left;
        radius_rec(near_child, depth + 1, q, r2, out);
        if (delta * delta <= r2) radius_rec(far_child, depth + 1, q, r2, out);
    }
};

}  // namespace cprrt
