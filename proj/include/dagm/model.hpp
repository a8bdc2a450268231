#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "dagm/graph.hpp"

namespace dagm {

/// Floor applied to membership dot products inside log(1 - exp(-x)); the
/// linear non-edge terms always use the raw product.
inline constexpr double kEpsilonFloor = 1e-10;

/// log(1 - exp(-d)) for d > 0.
inline double log_one_minus_exp_neg(double d) {
    return std::log(-std::expm1(-d));
}

/// Nonnegative membership-strength matrices: one outgoing and one incoming
/// row of length K per node.
class AffiliationMatrices {
public:
    AffiliationMatrices() = default;
    AffiliationMatrices(NodeId node_count, int k)
        : n_(node_count), k_(k), out_(static_cast<std::size_t>(node_count) * k, 0.0),
          in_(static_cast<std::size_t>(node_count) * k, 0.0) {}

    NodeId node_count() const { return n_; }
    int k() const { return k_; }

    std::span<double> out_row(NodeId u) { return {out_.data() + std::size_t(u) * k_, size_t(k_)}; }
    std::span<double> in_row(NodeId v) { return {in_.data() + std::size_t(v) * k_, size_t(k_)}; }
    std::span<const double> out_row(NodeId u) const {
        return {out_.data() + std::size_t(u) * k_, size_t(k_)};
    }
    std::span<const double> in_row(NodeId v) const {
        return {in_.data() + std::size_t(v) * k_, size_t(k_)};
    }

    const std::vector<double>& out_values() const { return out_; }
    const std::vector<double>& in_values() const { return in_; }

private:
    NodeId n_ = 0;
    int k_ = 0;
    std::vector<double> out_;
    std::vector<double> in_;
};

/// Discrete generator-side community: senders hold outgoing memberships,
/// receivers incoming ones, and edges fire with one probability per
/// community.
struct DiscreteCommunity {
    std::vector<NodeId> senders;
    std::vector<NodeId> receivers;
    double probability = 0.0;
};

struct DiscreteAffiliationGraph {
    std::vector<DiscreteCommunity> communities;
};

/// Probability that at least one of the shared communities creates the edge;
/// 1/n background when the pair shares none.
double discrete_edge_probability(const std::vector<int>& shared_communities,
                                 std::span<const double> community_probs, NodeId node_count);

/// 1 - exp(-<f_u, h_v>).
double edge_probability(std::span<const double> f_u, std::span<const double> h_v);

/// Column sums of the membership matrices, maintained by the optimizer so
/// non-neighbor sums cost O(deg) instead of O(N).
struct ColumnSumCache {
    std::vector<double> sum_out; // column sums of F
    std::vector<double> sum_in;  // column sums of H
};

ColumnSumCache rebuild_cache(const AffiliationMatrices& m);

/// Ordered node pairs excluded from every likelihood sum (held-out pairs
/// during model selection). Both orientations index the same pair set.
struct PairExclusions {
    std::vector<std::vector<NodeId>> out_partners; // u -> excluded targets v
    std::vector<std::vector<NodeId>> in_partners;  // v -> excluded sources u

    static PairExclusions from_pairs(NodeId node_count, const std::vector<Edge>& pairs);
    bool empty() const { return out_partners.empty(); }
};

/// Full-graph log-likelihood. The non-edge sum is computed through column
/// sums, never by pair enumeration.
double log_likelihood(const DirectedGraph& g, const AffiliationMatrices& m,
                      double epsilon_floor = kEpsilonFloor,
                      const PairExclusions* excluded = nullptr);

enum class Side {
    Outgoing, // update F_u against frozen H; neighborhood = out-neighbors
    Incoming, // update H_v against frozen F; neighborhood = in-neighbors
};

/// Single-node objective for the given side, evaluated at `row` in place of
/// the node's current row. `cache` must be consistent with the frozen side.
double node_objective(const DirectedGraph& g, const AffiliationMatrices& m, Side side, NodeId u,
                      std::span<const double> row, const ColumnSumCache& cache,
                      double epsilon_floor = kEpsilonFloor,
                      const PairExclusions* excluded = nullptr);

/// Gradient of node_objective with respect to `row`; O(deg(u) * K).
void node_gradient(const DirectedGraph& g, const AffiliationMatrices& m, Side side, NodeId u,
                   std::span<const double> row, const ColumnSumCache& cache,
                   std::span<double> grad_out, double epsilon_floor = kEpsilonFloor,
                   const PairExclusions* excluded = nullptr);

} // namespace dagm
