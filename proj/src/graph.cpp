#include "dagm/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace dagm {

DirectedGraph DirectedGraph::from_edges(NodeId node_count, std::vector<Edge> edges,
                                        std::vector<std::string> labels, LoadStats* stats) {
    if (!labels.empty() && labels.size() != node_count)
        throw std::invalid_argument("label sidecar size does not match node count");
    for (const auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw std::invalid_argument("edge endpoint out of range");
    }

    std::size_t self_loops = 0;
    std::erase_if(edges, [&](const Edge& e) {
        if (e.first == e.second) {
            ++self_loops;
            return true;
        }
        return false;
    });

    std::sort(edges.begin(), edges.end());
    std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (stats) {
        stats->self_loops_dropped += self_loops;
        stats->duplicate_edges_dropped += before - edges.size();
    }

    DirectedGraph g;
    g.n_ = node_count;
    g.labels_ = std::move(labels);
    for (NodeId u = 0; u < static_cast<NodeId>(g.labels_.size()); ++u)
        g.label_index_.emplace(g.labels_[u], u);

    g.out_offsets_.assign(g.n_ + 1, 0);
    g.in_offsets_.assign(g.n_ + 1, 0);
    for (const auto& [u, v] : edges) {
        ++g.out_offsets_[u + 1];
        ++g.in_offsets_[v + 1];
    }
    for (NodeId i = 0; i < g.n_; ++i) {
        g.out_offsets_[i + 1] += g.out_offsets_[i];
        g.in_offsets_[i + 1] += g.in_offsets_[i];
    }
    g.out_targets_.resize(edges.size());
    g.in_sources_.resize(edges.size());
    std::vector<std::size_t> fill(g.n_, 0);
    for (const auto& [u, v] : edges) g.out_targets_[g.out_offsets_[u] + fill[u]++] = v;
    std::fill(fill.begin(), fill.end(), 0);
    for (const auto& [u, v] : edges) g.in_sources_[g.in_offsets_[v] + fill[v]++] = u;
    for (NodeId v = 0; v < g.n_; ++v) {
        auto begin = g.in_sources_.begin() + static_cast<std::ptrdiff_t>(g.in_offsets_[v]);
        auto end = g.in_sources_.begin() + static_cast<std::ptrdiff_t>(g.in_offsets_[v + 1]);
        std::sort(begin, end);
    }
    return g;
}

bool DirectedGraph::has_edge(NodeId u, NodeId v) const {
    auto nbrs = out_neighbors(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::string DirectedGraph::label(NodeId u) const {
    if (labels_.empty()) return std::to_string(u);
    return labels_[u];
}

NodeId DirectedGraph::resolve_label(const std::string& label) const {
    if (labels_.empty()) {
        try {
            std::size_t pos = 0;
            unsigned long value = std::stoul(label, &pos);
            if (pos == label.size() && value < n_) return static_cast<NodeId>(value);
        } catch (const std::exception&) {
        }
        throw std::runtime_error("unknown node label '" + label + "'");
    }
    auto it = label_index_.find(label);
    if (it == label_index_.end()) throw std::runtime_error("unknown node label '" + label + "'");
    return it->second;
}

std::vector<Edge> DirectedGraph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count());
    for (NodeId u = 0; u < n_; ++u)
        for (NodeId v : out_neighbors(u)) result.emplace_back(u, v);
    return result;
}

DirectedGraph to_reciprocal_directed(NodeId node_count, const std::vector<Edge>& undirected_edges,
                                     std::vector<std::string> labels, LoadStats* stats) {
    std::vector<Edge> directed;
    directed.reserve(undirected_edges.size() * 2);
    for (const auto& [u, v] : undirected_edges) {
        if (u == v) throw std::invalid_argument("undirected edge set contains a self-loop");
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    }
    return DirectedGraph::from_edges(node_count, std::move(directed), std::move(labels), stats);
}

namespace {

// Two whitespace-separated tokens; anything else is malformed.
bool split_pair(const std::string& line, std::string& a, std::string& b) {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> a >> b)) return false;
    if (ss >> extra) return false;
    return true;
}

} // namespace

DirectedGraph load_edge_list(std::istream& in, bool directed, LoadStats* stats) {
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    LoadStats local;

    auto intern = [&](const std::string& label) {
        auto [it, inserted] = index.emplace(label, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    std::string line, a, b;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        if (!split_pair(line, a, b))
            throw ParseError(line_no, "expected two whitespace-separated node labels");
        NodeId u = intern(a);
        NodeId v = intern(b);
        if (u == v) {
            ++local.self_loops_dropped;
            continue;
        }
        if (!directed && u > v) std::swap(u, v); // canonical form for undirected dedup
        edges.emplace_back(u, v);
    }

    if (!directed) {
        std::sort(edges.begin(), edges.end());
        std::size_t before = edges.size();
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        local.duplicate_edges_dropped += before - edges.size();
    }

    if (edges.empty()) throw std::runtime_error("empty graph: no usable edges");

    const NodeId n = static_cast<NodeId>(labels.size());
    DirectedGraph g = directed
        ? DirectedGraph::from_edges(n, std::move(edges), std::move(labels), &local)
        : to_reciprocal_directed(n, edges, std::move(labels), &local);
    if (stats) *stats = local;
    return g;
}

void write_edge_list(const DirectedGraph& g, std::ostream& out) {
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.out_neighbors(u)) out << g.label(u) << '\t' << g.label(v) << '\n';
}

GroundTruthCommunities load_communities(std::istream& in, const DirectedGraph& g,
                                        LoadStats* stats) {
    GroundTruthCommunities truth;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        std::istringstream ss(line);
        std::vector<NodeId> members;
        std::string token;
        while (ss >> token) {
            try {
                members.push_back(g.resolve_label(token));
            } catch (const std::exception& e) {
                throw ParseError(line_no, e.what());
            }
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.size() < 2) {
            if (!members.empty() && stats) ++stats->singleton_lines_dropped;
            continue;
        }
        truth.communities.push_back({std::move(members), {}, {}});
    }
    if (truth.communities.empty()) throw std::runtime_error("no communities in input");
    return truth;
}

void write_communities(const GroundTruthCommunities& truth, const DirectedGraph& g,
                       std::ostream& out) {
    for (const auto& c : truth.communities) {
        for (std::size_t i = 0; i < c.members.size(); ++i) {
            if (i) out << ' ';
            out << g.label(c.members[i]);
        }
        out << '\n';
    }
}

} // namespace dagm
