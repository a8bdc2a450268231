#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <span>
#include <vector>

#include "dagm/model.hpp"

// Internal per-node subproblem shared by the model entry points and the
// optimizer hot path.

namespace dagm::detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// One node's objective with the linear non-neighbor term folded into a
/// precomputed `rest` vector, so each evaluation is O(deg * K).
struct NodeProblem {
    std::span<const NodeId> neighbors;
    const AffiliationMatrices* m = nullptr;
    Side side = Side::Outgoing;
    std::span<const double> rest;
    double eps = kEpsilonFloor;

    std::span<const double> frozen_row(NodeId v) const {
        return side == Side::Outgoing ? m->in_row(v) : m->out_row(v);
    }

    double objective(std::span<const double> row) const {
        double value = 0.0;
        for (NodeId v : neighbors)
            value += log_one_minus_exp_neg(std::max(dot(row, frozen_row(v)), eps));
        return value - dot(row, rest);
    }

    void gradient(std::span<const double> row, std::span<double> grad) const {
        for (std::size_t c = 0; c < grad.size(); ++c) grad[c] = -rest[c];
        for (NodeId v : neighbors) {
            auto frozen = frozen_row(v);
            double d = std::max(dot(row, frozen), eps);
            double ratio = 1.0 / std::expm1(d); // exp(-d) / (1 - exp(-d))
            for (std::size_t c = 0; c < grad.size(); ++c) grad[c] += frozen[c] * ratio;
        }
    }
};

/// rest = frozen column sums - frozen_row(u) - neighbor rows - excluded rows.
inline NodeProblem make_node_problem(const DirectedGraph& g, const AffiliationMatrices& m,
                                     Side side, NodeId u, const ColumnSumCache& cache,
                                     const PairExclusions* excluded, double eps,
                                     std::vector<double>& rest_storage) {
    NodeProblem p;
    p.neighbors = side == Side::Outgoing ? g.out_neighbors(u) : g.in_neighbors(u);
    p.m = &m;
    p.side = side;
    p.eps = eps;

    const auto& sums = side == Side::Outgoing ? cache.sum_in : cache.sum_out;
    rest_storage.assign(m.k(), 0.0);
    auto own = p.frozen_row(u);
    for (int c = 0; c < m.k(); ++c) rest_storage[c] = sums[c] - own[c];
    for (NodeId v : p.neighbors) {
        auto row = p.frozen_row(v);
        for (int c = 0; c < m.k(); ++c) rest_storage[c] -= row[c];
    }
    if (excluded && !excluded->empty()) {
        const auto& partners =
            side == Side::Outgoing ? excluded->out_partners[u] : excluded->in_partners[u];
        for (NodeId v : partners) {
            auto row = p.frozen_row(v);
            for (int c = 0; c < m.k(); ++c) rest_storage[c] -= row[c];
        }
    }
    p.rest = rest_storage;
    return p;
}

} // namespace dagm::detail
