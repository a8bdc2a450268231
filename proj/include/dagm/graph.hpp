#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dagm {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Parse failure carrying the 1-based line number of the offending input line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct LoadStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
    std::size_t singleton_lines_dropped = 0;
};

/// Immutable directed graph over dense node indices [0, N).
/// Out- and in-adjacency are stored sorted so membership tests are binary
/// searches. Original input labels, when present, live in a sidecar.
class DirectedGraph {
public:
    DirectedGraph() = default;

    /// Canonical constructor: drops self-loops and duplicate edges (counted
    /// in `stats` when given). `labels` must be empty or of size node_count.
    static DirectedGraph from_edges(NodeId node_count, std::vector<Edge> edges,
                                    std::vector<std::string> labels = {},
                                    LoadStats* stats = nullptr);

    NodeId node_count() const { return n_; }
    std::size_t edge_count() const { return out_targets_.size(); }

    std::span<const NodeId> out_neighbors(NodeId u) const {
        return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
    }
    std::span<const NodeId> in_neighbors(NodeId v) const {
        return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
    }

    bool has_edge(NodeId u, NodeId v) const;

    bool has_labels() const { return !labels_.empty(); }
    /// External label of a node; decimal index when the graph was built
    /// without labels.
    std::string label(NodeId u) const;
    /// Resolve an external label back to a node index; throws on unknown.
    NodeId resolve_label(const std::string& label) const;

    std::vector<Edge> edges() const;

private:
    NodeId n_ = 0;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeId> out_targets_;
    std::vector<NodeId> in_sources_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> label_index_;
};

/// Expand an undirected edge set: each {u,v} becomes (u,v) and (v,u).
DirectedGraph to_reciprocal_directed(NodeId node_count, const std::vector<Edge>& undirected_edges,
                                     std::vector<std::string> labels = {},
                                     LoadStats* stats = nullptr);

/// Read "src dst" pairs, one per line; '#' lines are comments. Labels are
/// re-indexed densely in first-appearance order. With directed=false every
/// input edge is treated as reciprocal.
DirectedGraph load_edge_list(std::istream& in, bool directed, LoadStats* stats = nullptr);

/// One "src\tdst" line per edge, using external labels.
void write_edge_list(const DirectedGraph& g, std::ostream& out);

struct TruthCommunity {
    std::vector<NodeId> members; // sorted
    // Optional sender/receiver split, filled by the generator.
    std::vector<NodeId> senders;
    std::vector<NodeId> receivers;
};

struct GroundTruthCommunities {
    std::vector<TruthCommunity> communities;
};

/// One community per line as whitespace-separated labels. Duplicate members
/// collapse; lines that reduce to fewer than two members are dropped
/// (counted in `stats`).
GroundTruthCommunities load_communities(std::istream& in, const DirectedGraph& g,
                                        LoadStats* stats = nullptr);

void write_communities(const GroundTruthCommunities& truth, const DirectedGraph& g,
                       std::ostream& out);

} // namespace dagm
