#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dagm/graph.hpp"
#include "dagm/model.hpp"
#include "dagm/rng.hpp"

// Shared helpers and independent oracles. Everything here recomputes values
// by direct enumeration and must stay independent of the library's cached or
// incremental code paths.

namespace testutil {

inline dagm::DirectedGraph graph_from_lines(const std::vector<std::string>& lines, bool directed,
                                            dagm::LoadStats* stats = nullptr) {
    std::ostringstream joined;
    for (const auto& line : lines) joined << line << '\n';
    std::istringstream in(joined.str());
    return dagm::load_edge_list(in, directed, stats);
}

inline std::set<dagm::Edge> edge_set(const dagm::DirectedGraph& g) {
    auto edges = g.edges();
    return {edges.begin(), edges.end()};
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// O(N^2 K) pair enumeration of the likelihood, the oracle for the
// cached-sum implementation.
inline double naive_log_likelihood(const dagm::DirectedGraph& g,
                                   const dagm::AffiliationMatrices& m,
                                   double eps = dagm::kEpsilonFloor) {
    double total = 0.0;
    for (dagm::NodeId u = 0; u < g.node_count(); ++u) {
        for (dagm::NodeId v = 0; v < g.node_count(); ++v) {
            if (u == v) continue;
            double d = dot(m.out_row(u), m.in_row(v));
            if (g.has_edge(u, v)) total += std::log(-std::expm1(-std::max(d, eps)));
            else total -= d;
        }
    }
    return total;
}

// Same objective as node_objective, from direct term enumeration.
inline double naive_node_objective(const dagm::DirectedGraph& g,
                                   const dagm::AffiliationMatrices& m, dagm::Side side,
                                   dagm::NodeId u, std::span<const double> row,
                                   double eps = dagm::kEpsilonFloor) {
    double total = 0.0;
    for (dagm::NodeId v = 0; v < g.node_count(); ++v) {
        if (u == v) continue;
        auto other = side == dagm::Side::Outgoing ? m.in_row(v) : m.out_row(v);
        double d = dot(row, other);
        bool neighbor = side == dagm::Side::Outgoing ? g.has_edge(u, v) : g.has_edge(v, u);
        if (neighbor) total += std::log(-std::expm1(-std::max(d, eps)));
        else total -= d;
    }
    return total;
}

// Random Erdos-Renyi style directed graph guaranteed to have >= 1 edge.
inline dagm::DirectedGraph random_graph(dagm::NodeId n, double p, dagm::Rng& rng) {
    std::vector<dagm::Edge> edges;
    for (dagm::NodeId u = 0; u < n; ++u)
        for (dagm::NodeId v = 0; v < n; ++v)
            if (u != v && rng.uniform() < p) edges.emplace_back(u, v);
    if (edges.empty()) edges.emplace_back(0, n > 1 ? 1 : 0);
    return dagm::DirectedGraph::from_edges(n, std::move(edges));
}

// Entries uniform in [lo, hi); keeps dot products away from the epsilon
// floor when lo > 0.
inline dagm::AffiliationMatrices random_memberships(dagm::NodeId n, int k, double lo, double hi,
                                                    dagm::Rng& rng) {
    dagm::AffiliationMatrices m(n, k);
    for (dagm::NodeId u = 0; u < n; ++u)
        for (int c = 0; c < k; ++c) {
            m.out_row(u)[c] = lo + (hi - lo) * rng.uniform();
            m.in_row(u)[c] = lo + (hi - lo) * rng.uniform();
        }
    return m;
}

} // namespace testutil
