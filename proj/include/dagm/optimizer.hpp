#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dagm/model.hpp"

namespace dagm {

struct FitConfig {
    int max_outer_iterations = 500;
    double rel_improvement_stop = 1e-4; // 0.01% per full pass
    double line_search_shrink = 0.5;    // backtracking factor
    double line_search_accept = 0.05;   // Armijo constant
    double initial_step = 1.0;
    int max_line_search_steps = 10;
    double epsilon_floor = 1e-10;
    // Per-coordinate cap on the ascent direction. Raw gradient entries blow
    // up to ~1/epsilon on edges whose dot product sits at the floor, and an
    // uncapped direction fails every backtracking step, freezing the row.
    double gradient_clip = 10.0;
    int threads = 0; // 0 = hardware concurrency
    std::uint64_t rng_seed = 1;
    // Paper-style schedule (F_u then H_u per node, incremental cache);
    // single-threaded only. Default is strict alternating phases.
    bool interleaved = false;

    void validate() const;
};

struct FitReport {
    std::vector<double> likelihood_trace; // index 0 = before the first pass
    std::vector<double> pass_seconds;     // one entry per completed pass
    int iterations = 0;
    double seconds = 0.0;
    double final_log_likelihood = 0.0;
};

struct UpdateOutcome {
    bool changed = false;
    double step = 0.0;
};

/// One projected-gradient update of a node row with backtracking line
/// search. Applies the accepted row to `m` and the row delta to the matching
/// side of `cache`. A failed search leaves both untouched.
UpdateOutcome update_row(AffiliationMatrices& m, Side side, NodeId u, const DirectedGraph& g,
                         ColumnSumCache& cache, const FitConfig& cfg,
                         const PairExclusions* excluded = nullptr);

/// Block-coordinate ascent: full F-phase then full H-phase per outer
/// iteration, stopping once a pass improves the likelihood by less than
/// rel_improvement_stop relative. Within a phase every node subproblem reads
/// the same frozen matrix and column sums, so results do not depend on the
/// execution schedule or thread count.
AffiliationMatrices fit(const DirectedGraph& g, int k, AffiliationMatrices seeds,
                        const FitConfig& cfg, FitReport* report = nullptr,
                        const PairExclusions* excluded = nullptr);

/// Line-oriented form of the fit report: iteration, likelihood, seconds.
void write_fit_report(const FitReport& report, std::ostream& out);

} // namespace dagm
