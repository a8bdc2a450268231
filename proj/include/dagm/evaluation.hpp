#pragma once

#include <vector>

#include "dagm/communities.hpp"
#include "dagm/graph.hpp"

namespace dagm {

/// Which node set represents a detected community when scoring.
enum class MatchSide { Union, Out, In };

struct BestMatch {
    int index = -1;
    double value = 0.0;
};

struct MatchScore {
    double f1 = 0.0;
    double jaccard = 0.0;
    std::vector<BestMatch> truth_best_f1;
    std::vector<BestMatch> truth_best_jaccard;
    std::vector<BestMatch> detected_best_f1;
    std::vector<BestMatch> detected_best_jaccard;
    std::size_t excluded_truth = 0;    // sets smaller than 2 dropped
    std::size_t excluded_detected = 0;
};

/// 2|a&b| / (|a|+|b|); inputs sorted and nonempty.
double set_f1(const std::vector<NodeId>& a, const std::vector<NodeId>& b);

/// |a&b| / |a|b|; inputs sorted and nonempty.
double set_jaccard(const std::vector<NodeId>& a, const std::vector<NodeId>& b);

/// Symmetric best-match average between two collections of node sets.
MatchScore match_score(const std::vector<std::vector<NodeId>>& truth,
                       const std::vector<std::vector<NodeId>>& detected);

MatchScore match_score(const GroundTruthCommunities& truth, const CommunitySet& detected,
                       MatchSide side = MatchSide::Union);

/// Reduce detected communities to plain node sets for the given side.
std::vector<std::vector<NodeId>> community_node_sets(const CommunitySet& cs, MatchSide side);

} // namespace dagm
