#pragma once

#include <cstdint>
#include <iosfwd>

#include "dagm/model.hpp"

namespace dagm {

struct GeneratedNetwork {
    DirectedGraph graph;
    GroundTruthCommunities truth;
};

/// Sample a directed graph from a discrete affiliation graph. Every ordered
/// pair sharing at least one community fires with the combined community
/// probability; pairs sharing none use the 1/n background when enabled and
/// probability zero otherwise. Ground truth carries the planted member sets.
GeneratedNetwork generate(const DiscreteAffiliationGraph& b, NodeId node_count,
                          bool include_background, std::uint64_t seed);

struct Figure3Params {
    NodeId block_size = 30;
    NodeId overlap = 10; // shared members of the two cohesive communities
    double p_in = 0.9;
    bool background = false;
};

/// Planted layout with two overlapping cohesive communities A and B plus two
/// 2-mode communities sending A into a fresh receiver block and B into
/// another: the four dense blocks of the reference adjacency pattern.
GeneratedNetwork planted_figure3(const Figure3Params& params, std::uint64_t seed);

/// Forest-fire growth: each arriving node links to a uniform ambassador and
/// recursively burns out-links (geometric mean p_forward/(1-p_forward)) and
/// in-links (p_backward analog), linking to every burned node.
DirectedGraph forest_fire(NodeId node_count, double p_forward = 0.36, double p_backward = 0.32,
                          std::uint64_t seed = 1);

/// Text description of a discrete affiliation graph:
///   n <node_count>
///   community <p> out <ids...> in <ids...>
/// '#' lines are comments; node ids are dense indices in [0, n).
DiscreteAffiliationGraph load_affiliation_spec(std::istream& in, NodeId& node_count_out);

} // namespace dagm
