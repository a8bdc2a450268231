#include "doctest.h"

#include <cmath>

#include "dagm/communities.hpp"
#include "dagm/evaluation.hpp"
#include "dagm/generator.hpp"
#include "dagm/optimizer.hpp"
#include "dagm/seeding.hpp"
#include "testutil.hpp"

using namespace dagm;

namespace {

GeneratedNetwork two_planted_communities(std::uint64_t seed) {
    DiscreteAffiliationGraph b;
    std::vector<NodeId> first, second;
    for (NodeId u = 0; u < 20; ++u) first.push_back(u);
    for (NodeId u = 20; u < 40; ++u) second.push_back(u);
    b.communities.push_back({first, first, 0.9});
    b.communities.push_back({second, second, 0.9});
    return generate(b, 40, false, seed);
}

AffiliationMatrices fit_planted(const GeneratedNetwork& net, int k, const FitConfig& cfg,
                                FitReport* report = nullptr) {
    auto seeds = locally_minimal_neighborhoods(net.graph);
    auto init = initialize_memberships(net.graph, k, seeds, cfg.rng_seed);
    return fit(net.graph, k, std::move(init), cfg, report);
}

} // namespace

TEST_CASE("update_row: zero gradient is a fixed point") {
    // Node 0 is isolated and holds the only incoming mass, so its outgoing
    // gradient is exactly zero.
    auto g = DirectedGraph::from_edges(3, {{1, 2}});
    AffiliationMatrices m(3, 2);
    m.in_row(0)[0] = 0.7;
    m.in_row(0)[1] = 0.3;
    auto cache = rebuild_cache(m);
    auto before_rows = m.out_values();
    auto before_sums = cache.sum_out;

    FitConfig cfg;
    auto outcome = update_row(m, Side::Outgoing, 0, g, cache, cfg);
    CHECK_FALSE(outcome.changed);
    CHECK(m.out_values() == before_rows);
    CHECK(cache.sum_out == before_sums);
}

TEST_CASE("update_row: accepted steps never lower the node objective") {
    Rng rng(67);
    FitConfig cfg;
    for (int round = 0; round < 40; ++round) {
        NodeId n = 5 + static_cast<NodeId>(rng.index(20));
        auto g = testutil::random_graph(n, 0.25, rng);
        int k = 1 + static_cast<int>(rng.index(3));
        auto m = testutil::random_memberships(n, k, 0.0, 1.0, rng);
        auto cache = rebuild_cache(m);
        NodeId u = static_cast<NodeId>(rng.index(n));
        Side side = round % 2 == 0 ? Side::Outgoing : Side::Incoming;

        std::vector<double> before(k);
        auto row = side == Side::Outgoing ? m.out_row(u) : m.in_row(u);
        std::copy(row.begin(), row.end(), before.begin());
        double base = node_objective(g, m, side, u, before, cache);

        auto outcome = update_row(m, side, u, g, cache, cfg);
        auto after = side == Side::Outgoing ? m.out_row(u) : m.in_row(u);
        // The objective reads only the frozen side of the cache, which
        // update_row does not touch.
        double value = node_objective(g, m, side, u, after, cache);
        if (outcome.changed) CHECK(value >= base - 1e-12);
        else CHECK(value == base);

        for (int c = 0; c < k; ++c) CHECK(after[c] >= 0.0);
    }
}

TEST_CASE("update_row: projection lands exactly on zero") {
    // One community with incoming mass elsewhere and no edges from node 0:
    // the gradient is strictly negative, so the row is pulled to the
    // boundary and clamped at exactly 0.
    auto g = DirectedGraph::from_edges(3, {{1, 2}});
    AffiliationMatrices m(3, 1);
    m.out_row(0)[0] = 0.4;
    m.in_row(1)[0] = 2.0;
    m.in_row(2)[0] = 2.0;
    auto cache = rebuild_cache(m);
    FitConfig cfg;
    auto outcome = update_row(m, Side::Outgoing, 0, g, cache, cfg);
    CHECK(outcome.changed);
    CHECK(m.out_row(0)[0] == 0.0);
    CHECK(cache.sum_out[0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("update_row keeps the cache consistent") {
    Rng rng(71);
    auto g = testutil::random_graph(15, 0.3, rng);
    auto m = testutil::random_memberships(15, 3, 0.0, 1.0, rng);
    auto cache = rebuild_cache(m);
    FitConfig cfg;
    for (int step = 0; step < 200; ++step) {
        NodeId u = static_cast<NodeId>(rng.index(15));
        update_row(m, step % 2 ? Side::Outgoing : Side::Incoming, u, g, cache, cfg);
    }
    auto fresh = rebuild_cache(m);
    for (int c = 0; c < 3; ++c) {
        CHECK(cache.sum_out[c] == doctest::Approx(fresh.sum_out[c]).epsilon(1e-10));
        CHECK(cache.sum_in[c] == doctest::Approx(fresh.sum_in[c]).epsilon(1e-10));
    }
}

TEST_CASE("fit: likelihood trace never decreases") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto net = two_planted_communities(seed);
        FitConfig cfg;
        cfg.rng_seed = seed;
        cfg.threads = 2;
        FitReport report;
        fit_planted(net, 2, cfg, &report);
        REQUIRE(report.likelihood_trace.size() >= 2);
        for (std::size_t i = 1; i < report.likelihood_trace.size(); ++i)
            CHECK(report.likelihood_trace[i] >= report.likelihood_trace[i - 1] - 1e-9);
        CHECK(report.final_log_likelihood == report.likelihood_trace.back());
        CHECK(report.iterations + 1 == static_cast<int>(report.likelihood_trace.size()));
    }
}

TEST_CASE("fit: planted two-community recovery") {
    double total_f1 = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto net = two_planted_communities(seed);
        FitConfig cfg;
        cfg.rng_seed = seed;
        cfg.threads = 2;
        auto m = fit_planted(net, 2, cfg);
        auto cs = extract(m, net.graph.node_count());
        total_f1 += match_score(net.truth, cs).f1;
    }
    CHECK(total_f1 / 10.0 >= 0.85);
}

TEST_CASE("fit: identical results for 1 and 8 threads") {
    auto net = planted_figure3(Figure3Params{}, 5);
    FitConfig serial;
    serial.rng_seed = 5;
    serial.threads = 1;
    FitConfig parallel = serial;
    parallel.threads = 8;

    auto seeds = locally_minimal_neighborhoods(net.graph);
    auto init = initialize_memberships(net.graph, 4, seeds, 5);
    auto init_copy = init;
    auto a = fit(net.graph, 4, std::move(init), serial);
    auto b = fit(net.graph, 4, std::move(init_copy), parallel);

    double worst = 0.0;
    for (NodeId u = 0; u < net.graph.node_count(); ++u)
        for (int c = 0; c < 4; ++c) {
            worst = std::max(worst, std::abs(a.out_row(u)[c] - b.out_row(u)[c]));
            worst = std::max(worst, std::abs(a.in_row(u)[c] - b.in_row(u)[c]));
        }
    CHECK(worst <= 1e-12);
}

TEST_CASE("fit: interleaved schedule also ascends and recovers") {
    auto net = two_planted_communities(3);
    FitConfig cfg;
    cfg.rng_seed = 3;
    cfg.threads = 1;
    cfg.interleaved = true;
    FitReport report;
    auto m = fit_planted(net, 2, cfg, &report);
    for (std::size_t i = 1; i < report.likelihood_trace.size(); ++i)
        CHECK(report.likelihood_trace[i] >= report.likelihood_trace[i - 1] - 1e-9);
    auto cs = extract(m, net.graph.node_count());
    CHECK(match_score(net.truth, cs).f1 >= 0.85);

    FitConfig bad = cfg;
    bad.threads = 4;
    CHECK_THROWS_AS(fit(net.graph, 2, AffiliationMatrices(40, 2), bad), std::invalid_argument);
}

TEST_CASE("fit: matrices stay nonnegative") {
    auto net = two_planted_communities(7);
    FitConfig cfg;
    cfg.rng_seed = 7;
    auto m = fit_planted(net, 3, cfg);
    for (double v : m.out_values()) CHECK(v >= 0.0);
    for (double v : m.in_values()) CHECK(v >= 0.0);
}

TEST_CASE("fit: argument validation") {
    auto g = DirectedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    FitConfig cfg;
    CHECK_THROWS_AS(fit(g, 5, AffiliationMatrices(4, 5), cfg), std::invalid_argument);
    CHECK_THROWS_AS(fit(g, 0, AffiliationMatrices(4, 1), cfg), std::invalid_argument);
    CHECK_THROWS_AS(fit(g, 2, AffiliationMatrices(3, 2), cfg), std::invalid_argument);

    FitConfig bad = cfg;
    bad.line_search_shrink = 1.5;
    CHECK_THROWS_AS(fit(g, 2, AffiliationMatrices(4, 2), bad), std::invalid_argument);
}

TEST_CASE("fit report serializes one line per pass") {
    auto net = two_planted_communities(9);
    FitConfig cfg;
    cfg.rng_seed = 9;
    FitReport report;
    fit_planted(net, 2, cfg, &report);
    std::ostringstream out;
    write_fit_report(report, out);
    std::istringstream lines(out.str());
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == report.likelihood_trace.size());
}
