#include "dagm/communities.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dagm {

namespace {

std::size_t intersection_size(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

double jaccard_of(const std::vector<NodeId>& o, const std::vector<NodeId>& i) {
    std::size_t inter = intersection_size(o, i);
    std::size_t uni = o.size() + i.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<NodeId> union_of(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

const char* label_name(CommunityLabel label) {
    return label == CommunityLabel::Cohesive ? "cohesive" : "two_mode";
}

} // namespace

double membership_threshold(NodeId node_count) {
    if (node_count < 2) throw std::invalid_argument("membership threshold needs n >= 2");
    // delta^2 = -ln(1 - 1/n), so 1 - exp(-delta^2) = 1/n.
    return std::sqrt(-std::log1p(-1.0 / node_count));
}

CommunitySet extract(const AffiliationMatrices& m, NodeId node_count, double gamma) {
    CommunitySet cs;
    cs.delta = membership_threshold(node_count);
    cs.gamma = gamma;
    for (int c = 0; c < m.k(); ++c) {
        Community community;
        for (NodeId u = 0; u < m.node_count(); ++u) {
            if (m.out_row(u)[c] >= cs.delta) community.outgoing.push_back(u);
            if (m.in_row(u)[c] >= cs.delta) community.incoming.push_back(u);
        }
        std::size_t total = community.outgoing.size() + community.incoming.size() -
                            intersection_size(community.outgoing, community.incoming);
        if (total < 2) continue; // empty or degenerate singleton
        community.jaccard = jaccard_of(community.outgoing, community.incoming);
        community.label =
            community.jaccard < gamma ? CommunityLabel::TwoMode : CommunityLabel::Cohesive;
        cs.communities.push_back(std::move(community));
    }
    return cs;
}

void classify(CommunitySet& cs, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
    cs.gamma = gamma;
    for (auto& c : cs.communities) {
        c.jaccard = jaccard_of(c.outgoing, c.incoming);
        c.label = c.jaccard < gamma ? CommunityLabel::TwoMode : CommunityLabel::Cohesive;
    }
}

CommunitySet dedup_mirrors(const CommunitySet& cs, double similarity_threshold) {
    struct Candidate {
        double score;
        std::size_t i, j;
    };
    const auto& comms = cs.communities;
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < comms.size(); ++i)
        for (std::size_t j = i + 1; j < comms.size(); ++j) {
            double forward = jaccard_of(comms[i].outgoing, comms[j].incoming);
            double backward = jaccard_of(comms[i].incoming, comms[j].outgoing);
            if (forward >= similarity_threshold && backward >= similarity_threshold)
                candidates.push_back({forward + backward, i, j});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<int> partner(comms.size(), -1);
    std::vector<bool> used(comms.size(), false);
    for (const auto& c : candidates) {
        if (used[c.i] || used[c.j]) continue;
        used[c.i] = used[c.j] = true;
        partner[c.i] = static_cast<int>(c.j);
    }

    CommunitySet result;
    result.delta = cs.delta;
    result.gamma = cs.gamma;
    for (std::size_t i = 0; i < comms.size(); ++i) {
        if (used[i] && partner[i] < 0) continue; // consumed as a merge partner
        Community merged = comms[i];
        if (partner[i] >= 0) {
            const Community& other = comms[static_cast<std::size_t>(partner[i])];
            merged.outgoing = union_of(comms[i].outgoing, other.incoming);
            merged.incoming = union_of(comms[i].incoming, other.outgoing);
        }
        merged.jaccard = jaccard_of(merged.outgoing, merged.incoming);
        merged.label =
            merged.jaccard < result.gamma ? CommunityLabel::TwoMode : CommunityLabel::Cohesive;
        result.communities.push_back(std::move(merged));
    }
    return result;
}

void write_community_set(const CommunitySet& cs, const DirectedGraph& g, std::ostream& out) {
    for (std::size_t i = 0; i < cs.communities.size(); ++i) {
        const auto& c = cs.communities[i];
        out << 'c' << i << '\t' << label_name(c.label) << '\t' << "OUT:";
        for (std::size_t j = 0; j < c.outgoing.size(); ++j) {
            if (j) out << ' ';
            out << g.label(c.outgoing[j]);
        }
        out << '\t' << "IN:";
        for (std::size_t j = 0; j < c.incoming.size(); ++j) {
            if (j) out << ' ';
            out << g.label(c.incoming[j]);
        }
        out << '\n';
    }
}

CommunitySet load_community_set(std::istream& in, const DirectedGraph& g) {
    CommunitySet cs;
    cs.gamma = 0.2;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 4 || fields[2].rfind("OUT:", 0) != 0 || fields[3].rfind("IN:", 0) != 0)
            throw ParseError(line_no, "expected 'c<id>\\t<label>\\tOUT:...\\tIN:...'");

        Community c;
        if (fields[1] == "cohesive") c.label = CommunityLabel::Cohesive;
        else if (fields[1] == "two_mode") c.label = CommunityLabel::TwoMode;
        else throw ParseError(line_no, "unknown label '" + fields[1] + "'");

        auto parse_members = [&](const std::string& text, std::vector<NodeId>& out_ids) {
            std::istringstream ss(text);
            std::string token;
            while (ss >> token) {
                try {
                    out_ids.push_back(g.resolve_label(token));
                } catch (const std::exception& e) {
                    throw ParseError(line_no, e.what());
                }
            }
            std::sort(out_ids.begin(), out_ids.end());
            out_ids.erase(std::unique(out_ids.begin(), out_ids.end()), out_ids.end());
        };
        parse_members(fields[2].substr(4), c.outgoing);
        parse_members(fields[3].substr(3), c.incoming);
        c.jaccard = jaccard_of(c.outgoing, c.incoming);
        cs.communities.push_back(std::move(c));
    }
    return cs;
}

} // namespace dagm
