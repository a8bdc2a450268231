#include "dagm/model.hpp"

#include <algorithm>
#include <stdexcept>

#include "node_problem.hpp"

namespace dagm {

using detail::dot;

double discrete_edge_probability(const std::vector<int>& shared_communities,
                                 std::span<const double> community_probs, NodeId node_count) {
    if (node_count < 1) throw std::invalid_argument("node count must be positive");
    for (int c : shared_communities) {
        double p = community_probs[static_cast<std::size_t>(c)];
        if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("community probability outside (0,1]");
    }
    if (shared_communities.empty()) return 1.0 / node_count;
    double survive = 1.0;
    for (int c : shared_communities) survive *= 1.0 - community_probs[static_cast<std::size_t>(c)];
    return 1.0 - survive;
}

double edge_probability(std::span<const double> f_u, std::span<const double> h_v) {
    if (f_u.size() != h_v.size()) throw std::invalid_argument("membership dimension mismatch");
    return -std::expm1(-dot(f_u, h_v));
}

ColumnSumCache rebuild_cache(const AffiliationMatrices& m) {
    ColumnSumCache cache;
    cache.sum_out.assign(m.k(), 0.0);
    cache.sum_in.assign(m.k(), 0.0);
    for (NodeId u = 0; u < m.node_count(); ++u) {
        auto f = m.out_row(u);
        auto h = m.in_row(u);
        for (int c = 0; c < m.k(); ++c) {
            cache.sum_out[c] += f[c];
            cache.sum_in[c] += h[c];
        }
    }
    return cache;
}

PairExclusions PairExclusions::from_pairs(NodeId node_count, const std::vector<Edge>& pairs) {
    PairExclusions ex;
    ex.out_partners.resize(node_count);
    ex.in_partners.resize(node_count);
    for (const auto& [u, v] : pairs) {
        ex.out_partners[u].push_back(v);
        ex.in_partners[v].push_back(u);
    }
    for (auto& list : ex.out_partners) std::sort(list.begin(), list.end());
    for (auto& list : ex.in_partners) std::sort(list.begin(), list.end());
    return ex;
}

double log_likelihood(const DirectedGraph& g, const AffiliationMatrices& m, double epsilon_floor,
                      const PairExclusions* excluded) {
    if (m.node_count() != g.node_count())
        throw std::invalid_argument("matrices not sized for graph");
    const int k = m.k();

    std::vector<double> sum_out(k, 0.0), sum_in(k, 0.0);
    double self_dot = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto f = m.out_row(u);
        auto h = m.in_row(u);
        for (int c = 0; c < k; ++c) {
            sum_out[c] += f[c];
            sum_in[c] += h[c];
        }
        self_dot += dot(f, h);
    }

    double edge_log = 0.0;
    double edge_dot = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto f = m.out_row(u);
        for (NodeId v : g.out_neighbors(u)) {
            double d = dot(f, m.in_row(v));
            edge_log += log_one_minus_exp_neg(std::max(d, epsilon_floor));
            edge_dot += d;
        }
    }

    double excluded_dot = 0.0;
    if (excluded && !excluded->empty()) {
        for (NodeId u = 0; u < g.node_count(); ++u) {
            auto f = m.out_row(u);
            for (NodeId v : excluded->out_partners[u]) excluded_dot += dot(f, m.in_row(v));
        }
    }

    double non_edge = dot(sum_out, sum_in) - self_dot - edge_dot - excluded_dot;
    return edge_log - non_edge;
}

double node_objective(const DirectedGraph& g, const AffiliationMatrices& m, Side side, NodeId u,
                      std::span<const double> row, const ColumnSumCache& cache,
                      double epsilon_floor, const PairExclusions* excluded) {
    std::vector<double> rest;
    auto problem = detail::make_node_problem(g, m, side, u, cache, excluded, epsilon_floor, rest);
    return problem.objective(row);
}

void node_gradient(const DirectedGraph& g, const AffiliationMatrices& m, Side side, NodeId u,
                   std::span<const double> row, const ColumnSumCache& cache,
                   std::span<double> grad_out, double epsilon_floor,
                   const PairExclusions* excluded) {
    std::vector<double> rest;
    auto problem = detail::make_node_problem(g, m, side, u, cache, excluded, epsilon_floor, rest);
    problem.gradient(row, grad_out);
}

} // namespace dagm
