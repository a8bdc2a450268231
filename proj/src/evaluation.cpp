#include "dagm/evaluation.hpp"

#include <algorithm>
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

// Best-match rows for one collection against the other, visiting only pairs
// that share at least one node (zero-overlap pairs score zero anyway).
void best_matches(const std::vector<std::vector<NodeId>>& from,
                  const std::vector<std::vector<NodeId>>& to,
                  std::vector<BestMatch>& best_f1, std::vector<BestMatch>& best_jaccard) {
    NodeId max_node = 0;
    for (const auto& s : to)
        for (NodeId u : s) max_node = std::max(max_node, u);
    std::vector<std::vector<int>> by_node(static_cast<std::size_t>(max_node) + 1);
    for (std::size_t j = 0; j < to.size(); ++j)
        for (NodeId u : to[j]) by_node[u].push_back(static_cast<int>(j));

    best_f1.assign(from.size(), {});
    best_jaccard.assign(from.size(), {});
    std::vector<int> seen(to.size(), -1);
    for (std::size_t i = 0; i < from.size(); ++i) {
        BestMatch f1{-1, 0.0};
        BestMatch jac{-1, 0.0};
        for (NodeId u : from[i]) {
            if (u >= by_node.size()) continue;
            for (int j : by_node[u]) {
                if (seen[static_cast<std::size_t>(j)] == static_cast<int>(i)) continue;
                seen[static_cast<std::size_t>(j)] = static_cast<int>(i);
                std::size_t inter = intersection_size(from[i], to[static_cast<std::size_t>(j)]);
                std::size_t a = from[i].size();
                std::size_t b = to[static_cast<std::size_t>(j)].size();
                double f1_value = 2.0 * inter / static_cast<double>(a + b);
                double jac_value = static_cast<double>(inter) / static_cast<double>(a + b - inter);
                if (f1_value > f1.value) f1 = {j, f1_value};
                if (jac_value > jac.value) jac = {j, jac_value};
            }
        }
        best_f1[i] = f1;
        best_jaccard[i] = jac;
    }
}

double average_of(const std::vector<BestMatch>& best) {
    double sum = 0.0;
    for (const auto& b : best) sum += b.value;
    return sum / (2.0 * static_cast<double>(best.size()));
}

} // namespace

double set_f1(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("set similarity needs nonempty sets");
    return 2.0 * intersection_size(a, b) / static_cast<double>(a.size() + b.size());
}

double set_jaccard(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("set similarity needs nonempty sets");
    std::size_t inter = intersection_size(a, b);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

MatchScore match_score(const std::vector<std::vector<NodeId>>& truth,
                       const std::vector<std::vector<NodeId>>& detected) {
    MatchScore score;
    std::vector<std::vector<NodeId>> t, d;
    for (const auto& s : truth) {
        if (s.size() >= 2) t.push_back(s);
        else ++score.excluded_truth;
    }
    for (const auto& s : detected) {
        if (s.size() >= 2) d.push_back(s);
        else ++score.excluded_detected;
    }
    if (t.empty() || d.empty())
        throw std::invalid_argument("match score needs nonempty collections");
    for (auto& s : t) std::sort(s.begin(), s.end());
    for (auto& s : d) std::sort(s.begin(), s.end());

    best_matches(t, d, score.truth_best_f1, score.truth_best_jaccard);
    best_matches(d, t, score.detected_best_f1, score.detected_best_jaccard);
    score.f1 = average_of(score.truth_best_f1) + average_of(score.detected_best_f1);
    score.jaccard = average_of(score.truth_best_jaccard) + average_of(score.detected_best_jaccard);
    return score;
}

std::vector<std::vector<NodeId>> community_node_sets(const CommunitySet& cs, MatchSide side) {
    std::vector<std::vector<NodeId>> sets;
    sets.reserve(cs.communities.size());
    for (const auto& c : cs.communities) {
        switch (side) {
        case MatchSide::Out: sets.push_back(c.outgoing); break;
        case MatchSide::In: sets.push_back(c.incoming); break;
        case MatchSide::Union: {
            std::vector<NodeId> merged;
            merged.reserve(c.outgoing.size() + c.incoming.size());
            std::set_union(c.outgoing.begin(), c.outgoing.end(), c.incoming.begin(),
                           c.incoming.end(), std::back_inserter(merged));
            sets.push_back(std::move(merged));
            break;
        }
        }
    }
    return sets;
}

MatchScore match_score(const GroundTruthCommunities& truth, const CommunitySet& detected,
                       MatchSide side) {
    std::vector<std::vector<NodeId>> truth_sets;
    truth_sets.reserve(truth.communities.size());
    for (const auto& c : truth.communities) truth_sets.push_back(c.members);
    return match_score(truth_sets, community_node_sets(detected, side));
}

} // namespace dagm
