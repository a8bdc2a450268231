#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dagm/optimizer.hpp"

namespace dagm {

struct KSelectionConfig {
    std::vector<int> candidate_ks;
    double holdout_fraction = 0.2;
    int small_network_edge_threshold = 100;
    double negative_sample_ratio = 10.0; // sampled non-edges per held-out edge
    std::uint64_t rng_seed = 1;
};

enum class SelectionMode { HeldOutLikelihood, Bic };

struct KDiagnosticsRow {
    int k = 0;
    double train_log_likelihood = 0.0;
    // Held-out pair log-likelihood in held-out mode, BIC otherwise.
    double score = 0.0;
};

struct KSelectionResult {
    int chosen_k = 0;
    SelectionMode mode = SelectionMode::HeldOutLikelihood;
    bool fell_back_to_bic = false; // holdout requested but too few edges
    std::vector<KDiagnosticsRow> rows;
};

/// -2*loglik + n*k*ln(edge_count).
double bic(double loglik, NodeId n, int k, std::size_t edge_count);

/// Pick K by held-out pair likelihood, or by BIC when the graph has fewer
/// than small_network_edge_threshold edges. Held-out pairs (20% of edges
/// plus sampled non-edges) are removed from the training graph and from
/// every training likelihood sum.
KSelectionResult select_k(const DirectedGraph& g, const KSelectionConfig& cfg,
                          const FitConfig& fit_cfg);

/// Tab-separated diagnostics: K, train likelihood, test likelihood or BIC.
void write_selection_table(const KSelectionResult& result, std::ostream& out);

} // namespace dagm
