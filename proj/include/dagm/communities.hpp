#pragma once

#include <iosfwd>
#include <vector>

#include "dagm/model.hpp"

namespace dagm {

enum class CommunityLabel { Cohesive, TwoMode };

struct Community {
    std::vector<NodeId> outgoing; // O(c): nodes with F_uc >= delta, sorted
    std::vector<NodeId> incoming; // I(c): nodes with H_uc >= delta, sorted
    double jaccard = 0.0;         // |O & I| / |O | I|
    CommunityLabel label = CommunityLabel::Cohesive;
};

struct CommunitySet {
    std::vector<Community> communities;
    double delta = 0.0; // threshold used by extract
    double gamma = 0.2; // classification threshold used for labels
};

/// Membership cutoff delta = sqrt(-ln(1 - 1/n)): the smallest strength for
/// which a pair of members at delta exceeds the 1/n background probability.
double membership_threshold(NodeId node_count);

/// Threshold fitted strengths into hard communities (inclusive at delta).
/// Communities with fewer than two distinct members are dropped.
CommunitySet extract(const AffiliationMatrices& m, NodeId node_count, double gamma = 0.2);

/// Relabel: two_mode iff J(c) < gamma.
void classify(CommunitySet& cs, double gamma = 0.2);

/// Merge mirror pairs left by reciprocal conversion of undirected inputs:
/// c1 and c2 merge when O(c1)~I(c2) and I(c1)~O(c2) both reach the
/// threshold. Greedy by best combined similarity, one merge per community.
CommunitySet dedup_mirrors(const CommunitySet& cs, double similarity_threshold = 0.5);

/// One community per line: "c<id>\t<label>\tOUT:<labels>\tIN:<labels>".
void write_community_set(const CommunitySet& cs, const DirectedGraph& g, std::ostream& out);

CommunitySet load_community_set(std::istream& in, const DirectedGraph& g);

} // namespace dagm
