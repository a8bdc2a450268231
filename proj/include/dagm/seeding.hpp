#pragma once

#include <cstdint>
#include <vector>

#include "dagm/model.hpp"

namespace dagm {

/// A node's closed neighborhood proposed as a fitting seed.
struct SeedSet {
    NodeId center = 0;
    std::vector<NodeId> members; // sorted, includes center
    double conductance = 0.0;
};

/// Conductance of a node set on the undirected projection of g:
/// cut(s, V\s) / min(vol(s), vol(V\s)). Throws for s empty, s = V, or zero
/// volume on both sides.
double conductance(const std::vector<NodeId>& members, const DirectedGraph& g);

/// Every node whose closed neighborhood beats all of its neighbors'
/// neighborhoods on conductance (ties go to the smaller index), sorted by
/// ascending conductance. Neighborhoods spanning the whole graph are not
/// candidates and do not disqualify others.
std::vector<SeedSet> locally_minimal_neighborhoods(const DirectedGraph& g);

/// 0/1 membership matrices from seed sets: within seed k a member gets
/// F=1 when it sends to another member and H=1 when it receives from one.
/// Missing seeds are filled with random closed neighborhoods; excess seeds
/// beyond k are dropped worst-conductance first.
AffiliationMatrices initialize_memberships(const DirectedGraph& g, int k,
                                           const std::vector<SeedSet>& seeds,
                                           std::uint64_t rng_seed);

} // namespace dagm
