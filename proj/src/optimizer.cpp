#include "dagm/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "node_problem.hpp"

namespace dagm {

void FitConfig::validate() const {
    if (max_outer_iterations < 1) throw std::invalid_argument("max_outer_iterations must be >= 1");
    if (!(line_search_shrink > 0.0 && line_search_shrink < 1.0))
        throw std::invalid_argument("line_search_shrink must lie in (0,1)");
    if (!(line_search_accept > 0.0 && line_search_accept < 0.5))
        throw std::invalid_argument("line_search_accept must lie in (0,0.5)");
    if (!(initial_step > 0.0)) throw std::invalid_argument("initial_step must be positive");
    if (max_line_search_steps < 1)
        throw std::invalid_argument("max_line_search_steps must be >= 1");
    if (!(epsilon_floor > 0.0)) throw std::invalid_argument("epsilon_floor must be positive");
    if (!(gradient_clip > 0.0)) throw std::invalid_argument("gradient_clip must be positive");
    if (!(rel_improvement_stop >= 0.0))
        throw std::invalid_argument("rel_improvement_stop must be nonnegative");
    if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
    if (interleaved && threads > 1)
        throw std::invalid_argument("interleaved schedule is single-threaded");
}

namespace {

struct RowWorkspace {
    std::vector<double> rest;
    std::vector<double> grad;
    std::vector<double> direction;
    std::vector<double> candidate;
};

// Projected gradient step with backtracking. Candidates are evaluated at the
// projected point so an accepted step never lowers the node objective.
// Returns the accepted step size, 0 on a failed search. `delta_out`, when
// given, receives new_row - old_row.
double update_row_impl(AffiliationMatrices& m, Side side, NodeId u, const DirectedGraph& g,
                       const ColumnSumCache& cache, const FitConfig& cfg,
                       const PairExclusions* excluded, RowWorkspace& ws, double* delta_out) {
    const int k = m.k();
    auto row = side == Side::Outgoing ? m.out_row(u) : m.in_row(u);
    auto problem =
        detail::make_node_problem(g, m, side, u, cache, excluded, cfg.epsilon_floor, ws.rest);

    ws.grad.resize(k);
    problem.gradient(row, ws.grad);

    bool zero = std::all_of(ws.grad.begin(), ws.grad.end(), [](double x) { return x == 0.0; });
    if (zero) return 0.0;

    ws.direction.resize(k);
    for (int c = 0; c < k; ++c)
        ws.direction[c] = std::clamp(ws.grad[c], -cfg.gradient_clip, cfg.gradient_clip);

    double base = problem.objective(row);
    double dir_sq = 0.0;
    for (double d : ws.direction) dir_sq += d * d;

    ws.candidate.resize(k);
    double step = cfg.initial_step;
    for (int attempt = 0; attempt < cfg.max_line_search_steps; ++attempt) {
        for (int c = 0; c < k; ++c)
            ws.candidate[c] = std::max(row[c] + step * ws.direction[c], 0.0);
        double value = problem.objective(ws.candidate);
        if (value >= base + cfg.line_search_accept * step * dir_sq) {
            if (delta_out)
                for (int c = 0; c < k; ++c) delta_out[c] = ws.candidate[c] - row[c];
            std::copy(ws.candidate.begin(), ws.candidate.end(), row.begin());
            return step;
        }
        step *= cfg.line_search_shrink;
    }
    return 0.0;
}

std::vector<double> column_sums(const AffiliationMatrices& m, Side side) {
    std::vector<double> sums(m.k(), 0.0);
    for (NodeId u = 0; u < m.node_count(); ++u) {
        auto row = side == Side::Outgoing ? m.out_row(u) : m.in_row(u);
        for (int c = 0; c < m.k(); ++c) sums[c] += row[c];
    }
    return sums;
}

// Fork-join over disjoint contiguous node ranges. The frozen matrix and
// column sums are shared read-only; each worker writes only its own rows, so
// the result is identical for any thread count.
template <typename Fn>
void parallel_over_nodes(NodeId n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        fn(NodeId{0}, n);
        return;
    }
    int t = std::min<int>(threads, static_cast<int>(n));
    std::vector<std::thread> pool;
    pool.reserve(t - 1);
    NodeId chunk = (n + t - 1) / t;
    for (int i = 1; i < t; ++i) {
        NodeId begin = std::min<NodeId>(i * chunk, n);
        NodeId end = std::min<NodeId>(begin + chunk, n);
        if (begin < end) pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    fn(NodeId{0}, std::min<NodeId>(chunk, n));
    for (auto& th : pool) th.join();
}

} // namespace

UpdateOutcome update_row(AffiliationMatrices& m, Side side, NodeId u, const DirectedGraph& g,
                         ColumnSumCache& cache, const FitConfig& cfg,
                         const PairExclusions* excluded) {
    RowWorkspace ws;
    std::vector<double> delta(m.k(), 0.0);
    double step = update_row_impl(m, side, u, g, cache, cfg, excluded, ws, delta.data());
    if (step == 0.0) return {false, 0.0};
    auto& sums = side == Side::Outgoing ? cache.sum_out : cache.sum_in;
    for (int c = 0; c < m.k(); ++c) sums[c] += delta[c];
    return {true, step};
}

AffiliationMatrices fit(const DirectedGraph& g, int k, AffiliationMatrices seeds,
                        const FitConfig& cfg, FitReport* report, const PairExclusions* excluded) {
    cfg.validate();
    const NodeId n = g.node_count();
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (static_cast<NodeId>(k) > n) throw std::invalid_argument("k exceeds node count");
    if (seeds.node_count() != n || seeds.k() != k)
        throw std::invalid_argument("seed matrices not dimensioned N x K");

    AffiliationMatrices m = std::move(seeds);
    ColumnSumCache cache = rebuild_cache(m);
    int threads = cfg.threads > 0 ? cfg.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
    if (cfg.interleaved) threads = 1;

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    FitReport rep;
    double ll = log_likelihood(g, m, cfg.epsilon_floor, excluded);
    rep.likelihood_trace.push_back(ll);

    std::vector<double> delta(k);
    for (int iter = 1; iter <= cfg.max_outer_iterations; ++iter) {
        double pass_start = elapsed();
        if (cfg.interleaved) {
            RowWorkspace ws;
            for (NodeId u = 0; u < n; ++u) {
                if (update_row_impl(m, Side::Outgoing, u, g, cache, cfg, excluded, ws,
                                    delta.data()) > 0.0)
                    for (int c = 0; c < k; ++c) cache.sum_out[c] += delta[c];
                if (update_row_impl(m, Side::Incoming, u, g, cache, cfg, excluded, ws,
                                    delta.data()) > 0.0)
                    for (int c = 0; c < k; ++c) cache.sum_in[c] += delta[c];
            }
            cache = rebuild_cache(m); // cancel incremental drift each pass
        } else {
            // F-phase: H and sum_in frozen; sum_out is not read, so per-row
            // deltas are dropped and the sum is rebuilt at the barrier.
            parallel_over_nodes(n, threads, [&](NodeId begin, NodeId end) {
                RowWorkspace ws;
                for (NodeId u = begin; u < end; ++u)
                    update_row_impl(m, Side::Outgoing, u, g, cache, cfg, excluded, ws, nullptr);
            });
            cache.sum_out = column_sums(m, Side::Outgoing);
            parallel_over_nodes(n, threads, [&](NodeId begin, NodeId end) {
                RowWorkspace ws;
                for (NodeId u = begin; u < end; ++u)
                    update_row_impl(m, Side::Incoming, u, g, cache, cfg, excluded, ws, nullptr);
            });
            cache.sum_in = column_sums(m, Side::Incoming);
        }

        // Sequential fixed-order evaluation: the stopping statistic must not
        // depend on the thread count.
        double ll_new = log_likelihood(g, m, cfg.epsilon_floor, excluded);
        if (!std::isfinite(ll_new)) throw std::runtime_error("internal: non-finite likelihood");
        rep.likelihood_trace.push_back(ll_new);
        rep.pass_seconds.push_back(elapsed() - pass_start);
        rep.iterations = iter;

        double gain = ll_new - ll;
        bool stop = gain < cfg.rel_improvement_stop * std::abs(ll);
        ll = ll_new;
        if (stop) break;
    }

    rep.seconds = elapsed();
    rep.final_log_likelihood = ll;
    if (report) *report = std::move(rep);
    return m;
}

void write_fit_report(const FitReport& report, std::ostream& out) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i < report.likelihood_trace.size(); ++i) {
        if (i > 0 && i - 1 < report.pass_seconds.size()) cumulative += report.pass_seconds[i - 1];
        out << i << '\t' << report.likelihood_trace[i] << '\t' << cumulative << '\n';
    }
}

} // namespace dagm
