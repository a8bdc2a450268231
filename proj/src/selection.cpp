#include "dagm/selection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "dagm/rng.hpp"
#include "dagm/seeding.hpp"

namespace dagm {

double bic(double loglik, NodeId n, int k, std::size_t edge_count) {
    if (edge_count < 1) throw std::invalid_argument("bic needs at least one edge");
    return -2.0 * loglik +
           static_cast<double>(n) * k * std::log(static_cast<double>(edge_count));
}

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

double fit_candidate(const DirectedGraph& g, int k, const FitConfig& fit_cfg,
                     const PairExclusions* excluded, const std::vector<SeedSet>& seeds,
                     AffiliationMatrices& out) {
    AffiliationMatrices init = initialize_memberships(g, k, seeds, fit_cfg.rng_seed);
    FitReport report;
    out = fit(g, k, std::move(init), fit_cfg, &report, excluded);
    return report.final_log_likelihood;
}

KSelectionResult select_by_bic(const DirectedGraph& g, const std::vector<int>& candidates,
                               const FitConfig& fit_cfg, bool fell_back) {
    KSelectionResult result;
    result.mode = SelectionMode::Bic;
    result.fell_back_to_bic = fell_back;
    auto seeds = locally_minimal_neighborhoods(g);
    double best = 0.0;
    for (int k : candidates) {
        AffiliationMatrices m;
        double train_ll = fit_candidate(g, k, fit_cfg, nullptr, seeds, m);
        double score = bic(train_ll, g.node_count(), k, g.edge_count());
        result.rows.push_back({k, train_ll, score});
        if (result.chosen_k == 0 || score < best) {
            best = score;
            result.chosen_k = k;
        }
    }
    return result;
}

} // namespace

KSelectionResult select_k(const DirectedGraph& g, const KSelectionConfig& cfg,
                          const FitConfig& fit_cfg) {
    if (cfg.candidate_ks.empty()) throw std::invalid_argument("no candidate K values");
    if (!(cfg.holdout_fraction > 0.0 && cfg.holdout_fraction < 1.0))
        throw std::invalid_argument("holdout_fraction must lie in (0,1)");
    std::vector<int> candidates = cfg.candidate_ks;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (int k : candidates)
        if (k < 1 || static_cast<NodeId>(k) > g.node_count())
            throw std::invalid_argument("candidate K outside [1, N]");

    if (g.edge_count() < static_cast<std::size_t>(cfg.small_network_edge_threshold))
        return select_by_bic(g, candidates, fit_cfg, false);

    std::size_t holdout_edges =
        static_cast<std::size_t>(cfg.holdout_fraction * static_cast<double>(g.edge_count()));
    if (holdout_edges < 1) return select_by_bic(g, candidates, fit_cfg, true);

    Rng rng(cfg.rng_seed);

    // Held-out edges: uniform without replacement via partial shuffle.
    std::vector<Edge> all_edges = g.edges();
    for (std::size_t i = 0; i < holdout_edges; ++i) {
        std::size_t j = i + rng.index(all_edges.size() - i);
        std::swap(all_edges[i], all_edges[j]);
    }
    std::vector<Edge> test_edges(all_edges.begin(),
                                 all_edges.begin() + static_cast<std::ptrdiff_t>(holdout_edges));

    // Negative sample: ordered non-edge pairs, uniform without replacement.
    const NodeId n = g.node_count();
    std::size_t wanted =
        static_cast<std::size_t>(std::llround(cfg.negative_sample_ratio *
                                              static_cast<double>(holdout_edges)));
    std::size_t available = static_cast<std::size_t>(n) * (n - 1) - g.edge_count();
    wanted = std::min(wanted, available);
    std::unordered_set<std::uint64_t> sampled;
    std::vector<Edge> test_non_edges;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * (wanted + 1);
    while (test_non_edges.size() < wanted && attempts < max_attempts) {
        ++attempts;
        NodeId u = static_cast<NodeId>(rng.index(n));
        NodeId v = static_cast<NodeId>(rng.index(n));
        if (u == v || g.has_edge(u, v)) continue;
        if (!sampled.insert(pair_key(u, v)).second) continue;
        test_non_edges.emplace_back(u, v);
    }

    // Training graph: held-out edges removed from the structure; all
    // held-out pairs removed from every likelihood sum.
    std::unordered_set<std::uint64_t> held;
    for (const auto& [u, v] : test_edges) held.insert(pair_key(u, v));
    std::vector<Edge> train_edges;
    train_edges.reserve(g.edge_count() - test_edges.size());
    for (const auto& e : g.edges())
        if (!held.contains(pair_key(e.first, e.second))) train_edges.push_back(e);
    std::vector<std::string> labels;
    if (g.has_labels()) {
        labels.reserve(n);
        for (NodeId u = 0; u < n; ++u) labels.push_back(g.label(u));
    }
    DirectedGraph train = DirectedGraph::from_edges(n, std::move(train_edges), std::move(labels));

    std::vector<Edge> excluded_pairs = test_edges;
    excluded_pairs.insert(excluded_pairs.end(), test_non_edges.begin(), test_non_edges.end());
    PairExclusions excluded = PairExclusions::from_pairs(n, excluded_pairs);

    auto seeds = locally_minimal_neighborhoods(train);
    KSelectionResult result;
    result.mode = SelectionMode::HeldOutLikelihood;
    double best = 0.0;
    const double eps = fit_cfg.epsilon_floor;
    for (int k : candidates) {
        AffiliationMatrices m;
        double train_ll = fit_candidate(train, k, fit_cfg, &excluded, seeds, m);
        double test_ll = 0.0;
        for (const auto& [u, v] : test_edges) {
            double p = std::clamp(edge_probability(m.out_row(u), m.in_row(v)), eps, 1.0 - eps);
            test_ll += std::log(p);
        }
        for (const auto& [u, v] : test_non_edges) {
            double p = std::clamp(edge_probability(m.out_row(u), m.in_row(v)), eps, 1.0 - eps);
            test_ll += std::log1p(-p);
        }
        result.rows.push_back({k, train_ll, test_ll});
        if (result.chosen_k == 0 || test_ll > best) {
            best = test_ll;
            result.chosen_k = k;
        }
    }
    return result;
}

void write_selection_table(const KSelectionResult& result, std::ostream& out) {
    out << "K\ttrain_loglik\t"
        << (result.mode == SelectionMode::Bic ? "bic" : "test_loglik") << '\n';
    for (const auto& row : result.rows)
        out << row.k << '\t' << row.train_log_likelihood << '\t' << row.score << '\n';
}

} // namespace dagm
