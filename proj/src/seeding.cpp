#include "dagm/seeding.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dagm/rng.hpp"

namespace dagm {

namespace {

// Undirected projection: an edge exists when either direction does.
struct UndirectedView {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> neighbors;

    explicit UndirectedView(const DirectedGraph& g) {
        const NodeId n = g.node_count();
        offsets.assign(n + 1, 0);
        std::vector<NodeId> merged;
        std::vector<std::vector<NodeId>> adj(n);
        for (NodeId u = 0; u < n; ++u) {
            auto out = g.out_neighbors(u);
            auto in = g.in_neighbors(u);
            merged.clear();
            std::set_union(out.begin(), out.end(), in.begin(), in.end(),
                           std::back_inserter(merged));
            adj[u] = merged;
            offsets[u + 1] = offsets[u] + merged.size();
        }
        neighbors.reserve(offsets[n]);
        for (NodeId u = 0; u < n; ++u)
            neighbors.insert(neighbors.end(), adj[u].begin(), adj[u].end());
    }

    std::span<const NodeId> of(NodeId u) const {
        return {neighbors.data() + offsets[u], offsets[u + 1] - offsets[u]};
    }
    std::size_t degree(NodeId u) const { return offsets[u + 1] - offsets[u]; }
    std::size_t total_volume() const { return neighbors.size(); }
};

// Stamp-marking avoids clearing an N-sized array per evaluated set.
struct SetMarks {
    std::vector<std::uint32_t> stamp;
    std::uint32_t current = 0;

    explicit SetMarks(NodeId n) : stamp(n, 0) {}
    void begin(const std::vector<NodeId>& members) {
        ++current;
        for (NodeId u : members) stamp[u] = current;
    }
    bool contains(NodeId u) const { return stamp[u] == current; }
};

double conductance_of(const std::vector<NodeId>& members, const UndirectedView& view,
                      SetMarks& marks, bool* defined = nullptr) {
    marks.begin(members);
    std::size_t vol = 0;
    std::size_t cut = 0;
    for (NodeId u : members) {
        vol += view.degree(u);
        for (NodeId v : view.of(u))
            if (!marks.contains(v)) ++cut;
    }
    std::size_t denom = std::min(vol, view.total_volume() - vol);
    if (denom == 0) {
        if (defined) *defined = false;
        return std::numeric_limits<double>::infinity();
    }
    if (defined) *defined = true;
    return static_cast<double>(cut) / static_cast<double>(denom);
}

std::vector<NodeId> closed_neighborhood(const UndirectedView& view, NodeId u) {
    auto nbrs = view.of(u);
    std::vector<NodeId> members;
    members.reserve(nbrs.size() + 1);
    members.insert(members.end(), nbrs.begin(), nbrs.end());
    members.insert(std::lower_bound(members.begin(), members.end(), u), u);
    return members;
}

} // namespace

double conductance(const std::vector<NodeId>& members, const DirectedGraph& g) {
    if (members.empty()) throw std::invalid_argument("conductance of an empty set is undefined");
    if (members.size() >= g.node_count())
        throw std::invalid_argument("conductance of the full node set is undefined");
    for (NodeId u : members)
        if (u >= g.node_count()) throw std::invalid_argument("set member out of range");

    UndirectedView view(g);
    SetMarks marks(g.node_count());
    std::vector<NodeId> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.size() >= g.node_count())
        throw std::invalid_argument("conductance of the full node set is undefined");
    bool defined = false;
    double value = conductance_of(sorted, view, marks, &defined);
    if (!defined) throw std::invalid_argument("conductance undefined: zero cut volume");
    return value;
}

std::vector<SeedSet> locally_minimal_neighborhoods(const DirectedGraph& g) {
    const NodeId n = g.node_count();
    UndirectedView view(g);
    SetMarks marks(n);

    constexpr double kExcluded = std::numeric_limits<double>::infinity();
    std::vector<double> cond(n, kExcluded);
    for (NodeId u = 0; u < n; ++u) {
        auto members = closed_neighborhood(view, u);
        if (members.size() >= n) continue; // whole graph: conductance undefined
        bool defined = false;
        double value = conductance_of(members, view, marks, &defined);
        if (defined) cond[u] = value;
    }

    std::vector<SeedSet> seeds;
    for (NodeId u = 0; u < n; ++u) {
        if (cond[u] == kExcluded) continue;
        bool minimal = true;
        for (NodeId v : view.of(u)) {
            if (cond[v] == kExcluded) continue; // non-candidates do not disqualify
            if (cond[v] < cond[u] || (cond[v] == cond[u] && v < u)) {
                minimal = false;
                break;
            }
        }
        if (minimal) seeds.push_back({u, closed_neighborhood(view, u), cond[u]});
    }
    std::sort(seeds.begin(), seeds.end(), [](const SeedSet& a, const SeedSet& b) {
        return a.conductance != b.conductance ? a.conductance < b.conductance
                                              : a.center < b.center;
    });
    return seeds;
}

AffiliationMatrices initialize_memberships(const DirectedGraph& g, int k,
                                           const std::vector<SeedSet>& seeds,
                                           std::uint64_t rng_seed) {
    const NodeId n = g.node_count();
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (static_cast<NodeId>(k) > n) throw std::invalid_argument("k exceeds node count");

    std::vector<std::vector<NodeId>> sets;
    sets.reserve(k);
    for (const auto& s : seeds) {
        if (static_cast<int>(sets.size()) == k) break;
        sets.push_back(s.members);
    }
    if (static_cast<int>(sets.size()) < k) {
        UndirectedView view(g);
        Rng rng(rng_seed);
        while (static_cast<int>(sets.size()) < k) {
            NodeId u = static_cast<NodeId>(rng.index(n));
            sets.push_back(closed_neighborhood(view, u));
        }
    }

    AffiliationMatrices m(n, k);
    SetMarks marks(n);
    for (int c = 0; c < k; ++c) {
        marks.begin(sets[c]);
        for (NodeId u : sets[c]) {
            bool sends = false;
            for (NodeId v : g.out_neighbors(u))
                if (marks.contains(v)) {
                    sends = true;
                    break;
                }
            bool receives = false;
            for (NodeId v : g.in_neighbors(u))
                if (marks.contains(v)) {
                    receives = true;
                    break;
                }
            if (sends) m.out_row(u)[c] = 1.0;
            if (receives) m.in_row(u)[c] = 1.0;
        }
    }
    return m;
}

} // namespace dagm
