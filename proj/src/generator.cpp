#include "dagm/generator.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dagm/rng.hpp"

namespace dagm {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::vector<NodeId> sorted_unique(std::vector<NodeId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace

GeneratedNetwork generate(const DiscreteAffiliationGraph& b, NodeId node_count,
                          bool include_background, std::uint64_t seed) {
    if (node_count < 1) throw std::invalid_argument("node count must be positive");
    for (const auto& c : b.communities) {
        if (!(c.probability > 0.0 && c.probability <= 1.0))
            throw std::domain_error("community probability outside (0,1]");
        for (NodeId u : c.senders)
            if (u >= node_count) throw std::invalid_argument("sender id out of range");
        for (NodeId v : c.receivers)
            if (v >= node_count) throw std::invalid_argument("receiver id out of range");
    }

    // Survival probability (no community fires) per covered ordered pair.
    std::unordered_map<std::uint64_t, double> survive;
    for (const auto& c : b.communities)
        for (NodeId u : c.senders)
            for (NodeId v : c.receivers) {
                if (u == v) continue;
                auto [it, inserted] = survive.emplace(pair_key(u, v), 1.0);
                it->second *= 1.0 - c.probability;
            }

    Rng rng(seed);
    std::vector<Edge> edges;
    if (include_background) {
        double background = 1.0 / node_count;
        for (NodeId u = 0; u < node_count; ++u)
            for (NodeId v = 0; v < node_count; ++v) {
                if (u == v) continue;
                auto it = survive.find(pair_key(u, v));
                double p = it != survive.end() ? 1.0 - it->second : background;
                if (rng.uniform() < p) edges.emplace_back(u, v);
            }
    } else {
        std::vector<std::pair<std::uint64_t, double>> covered(survive.begin(), survive.end());
        std::sort(covered.begin(), covered.end());
        for (const auto& [key, q] : covered) {
            if (rng.uniform() < 1.0 - q)
                edges.emplace_back(static_cast<NodeId>(key >> 32),
                                   static_cast<NodeId>(key & 0xffffffffu));
        }
    }

    GeneratedNetwork net;
    net.graph = DirectedGraph::from_edges(node_count, std::move(edges));
    for (const auto& c : b.communities) {
        TruthCommunity t;
        t.senders = sorted_unique(c.senders);
        t.receivers = sorted_unique(c.receivers);
        t.members.reserve(t.senders.size() + t.receivers.size());
        std::set_union(t.senders.begin(), t.senders.end(), t.receivers.begin(), t.receivers.end(),
                       std::back_inserter(t.members));
        net.truth.communities.push_back(std::move(t));
    }
    return net;
}

GeneratedNetwork planted_figure3(const Figure3Params& params, std::uint64_t seed) {
    const NodeId s = params.block_size;
    const NodeId o = params.overlap;
    if (s < 4) throw std::invalid_argument("block size must be >= 4");
    if (o >= s) throw std::invalid_argument("overlap must be smaller than the block size");
    if (!(params.p_in > 0.0 && params.p_in <= 1.0))
        throw std::domain_error("p_in outside (0,1]");

    auto range = [](NodeId begin, NodeId end) {
        std::vector<NodeId> ids;
        ids.reserve(end - begin);
        for (NodeId u = begin; u < end; ++u) ids.push_back(u);
        return ids;
    };

    // A = [0, s), B = [s-o, 2s-o): the last o members of A open B.
    std::vector<NodeId> a = range(0, s);
    std::vector<NodeId> b_members = range(s - o, 2 * s - o);
    std::vector<NodeId> c_recv = range(2 * s - o, 3 * s - o);
    std::vector<NodeId> d_recv = range(3 * s - o, 4 * s - o);
    NodeId n = 4 * s - o;

    DiscreteAffiliationGraph b;
    b.communities.push_back({a, a, params.p_in});                 // cohesive A
    b.communities.push_back({b_members, b_members, params.p_in}); // cohesive B
    b.communities.push_back({a, c_recv, params.p_in});            // 2-mode A -> C
    b.communities.push_back({b_members, d_recv, params.p_in});    // 2-mode B -> D
    return generate(b, n, params.background, seed);
}

DirectedGraph forest_fire(NodeId node_count, double p_forward, double p_backward,
                          std::uint64_t seed) {
    if (node_count < 1) throw std::invalid_argument("node count must be positive");
    if (!(p_forward >= 0.0 && p_forward < 1.0) || !(p_backward >= 0.0 && p_backward < 1.0))
        throw std::invalid_argument("burning probabilities must lie in [0,1)");

    Rng rng(seed);
    std::vector<std::vector<NodeId>> out_adj(node_count), in_adj(node_count);
    std::vector<Edge> edges;
    std::vector<std::uint32_t> visited(node_count, 0);
    std::uint32_t stamp = 0;
    std::vector<NodeId> queue;
    std::vector<NodeId> pool;

    for (NodeId v = 1; v < node_count; ++v) {
        ++stamp;
        visited[v] = stamp;
        NodeId ambassador = static_cast<NodeId>(rng.index(v));
        visited[ambassador] = stamp;
        queue.clear();
        queue.push_back(ambassador);
        std::size_t burned = 1;
        std::size_t head = 0;

        auto burn_from = [&](const std::vector<NodeId>& nbrs, int want) {
            pool.clear();
            for (NodeId w : nbrs)
                if (visited[w] != stamp) pool.push_back(w);
            int take = std::min<int>(want, static_cast<int>(pool.size()));
            for (int i = 0; i < take; ++i) {
                std::size_t j = i + rng.index(pool.size() - i);
                std::swap(pool[i], pool[j]);
                NodeId w = pool[i];
                visited[w] = stamp;
                queue.push_back(w);
                ++burned;
            }
        };

        while (head < queue.size() && burned < node_count) {
            NodeId t = queue[head++];
            burn_from(out_adj[t], rng.geometric(p_forward));
            burn_from(in_adj[t], rng.geometric(p_backward));
        }

        for (NodeId t : queue) {
            edges.emplace_back(v, t);
            out_adj[v].push_back(t);
            in_adj[t].push_back(v);
        }
    }
    return DirectedGraph::from_edges(node_count, std::move(edges));
}

DiscreteAffiliationGraph load_affiliation_spec(std::istream& in, NodeId& node_count_out) {
    DiscreteAffiliationGraph b;
    bool have_n = false;
    NodeId n = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string keyword;
        ss >> keyword;
        if (!have_n) {
            long long value = -1;
            if (keyword != "n" || !(ss >> value) || value < 1)
                throw ParseError(line_no, "expected 'n <node_count>'");
            std::string extra;
            if (ss >> extra) throw ParseError(line_no, "trailing tokens after node count");
            n = static_cast<NodeId>(value);
            have_n = true;
            continue;
        }
        if (keyword != "community")
            throw ParseError(line_no, "expected 'community <p> out <ids...> in <ids...>'");
        DiscreteCommunity c;
        std::string section;
        if (!(ss >> c.probability) || !(c.probability > 0.0 && c.probability <= 1.0))
            throw ParseError(line_no, "community probability must lie in (0,1]");
        if (!(ss >> section) || section != "out")
            throw ParseError(line_no, "expected 'out' after the probability");
        std::string token;
        bool in_receivers = false;
        while (ss >> token) {
            if (token == "in") {
                if (in_receivers) throw ParseError(line_no, "duplicate 'in' section");
                in_receivers = true;
                continue;
            }
            long long id = -1;
            try {
                std::size_t pos = 0;
                id = std::stoll(token, &pos);
                if (pos != token.size()) id = -1;
            } catch (const std::exception&) {
                id = -1;
            }
            if (id < 0 || id >= static_cast<long long>(n))
                throw ParseError(line_no, "node id '" + token + "' out of range");
            (in_receivers ? c.receivers : c.senders).push_back(static_cast<NodeId>(id));
        }
        if (!in_receivers) throw ParseError(line_no, "missing 'in' section");
        if (c.senders.empty() || c.receivers.empty())
            throw ParseError(line_no, "community needs at least one sender and one receiver");
        b.communities.push_back(std::move(c));
    }
    if (!have_n) throw std::runtime_error("missing 'n <node_count>' header");
    if (b.communities.empty()) throw std::runtime_error("no communities in input");
    node_count_out = n;
    return b;
}

} // namespace dagm
