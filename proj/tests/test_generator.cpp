#include "doctest.h"

#include <cmath>
#include <sstream>

#include "dagm/generator.hpp"
#include "testutil.hpp"

using namespace dagm;

namespace {

std::vector<NodeId> range_ids(NodeId begin, NodeId end) {
    std::vector<NodeId> ids;
    for (NodeId u = begin; u < end; ++u) ids.push_back(u);
    return ids;
}

} // namespace

TEST_CASE("generate: probability-one single community gives the complete graph") {
    DiscreteAffiliationGraph b;
    auto all = range_ids(0, 6);
    b.communities.push_back({all, all, 1.0});
    auto net = generate(b, 6, false, 1);
    CHECK(net.graph.edge_count() == 6u * 5u);
    REQUIRE(net.truth.communities.size() == 1);
    CHECK(net.truth.communities[0].members == all);
}

TEST_CASE("generate: 2-mode community yields exactly the bipartite block") {
    DiscreteAffiliationGraph b;
    b.communities.push_back({{0, 1}, {2, 3}, 1.0});
    auto net = generate(b, 4, false, 7);
    CHECK(testutil::edge_set(net.graph) ==
          std::set<Edge>{{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    CHECK(net.truth.communities[0].senders == std::vector<NodeId>{0, 1});
    CHECK(net.truth.communities[0].receivers == std::vector<NodeId>{2, 3});
    CHECK(net.truth.communities[0].members == std::vector<NodeId>{0, 1, 2, 3});
}

TEST_CASE("generate: no edges outside planted sender/receiver blocks") {
    DiscreteAffiliationGraph b;
    b.communities.push_back({range_ids(0, 5), range_ids(3, 8), 0.7});
    b.communities.push_back({range_ids(8, 12), range_ids(8, 12), 0.5});
    auto net = generate(b, 15, false, 21);
    for (const auto& [u, v] : net.graph.edges()) {
        bool covered = (u < 5 && v >= 3 && v < 8) || (u >= 8 && u < 12 && v >= 8 && v < 12);
        CHECK(covered);
    }
}

TEST_CASE("generate: edge count concentrates near the pair-probability sum") {
    DiscreteAffiliationGraph b;
    auto all = range_ids(0, 12);
    const double p = 0.08;
    b.communities.push_back({all, all, p});
    const double pairs = 12.0 * 11.0;
    const double mean = pairs * p;
    const double sd = std::sqrt(pairs * p * (1.0 - p));

    double total = 0.0;
    const int runs = 100;
    for (int s = 0; s < runs; ++s) total += static_cast<double>(generate(b, 12, false, 1000 + s).graph.edge_count());
    double observed_mean = total / runs;
    CHECK(std::abs(observed_mean - mean) <= 4.0 * sd / std::sqrt(static_cast<double>(runs)));
}

TEST_CASE("generate: per-pair frequency matches the discrete probability") {
    DiscreteAffiliationGraph b;
    b.communities.push_back({{0, 1, 2}, {1, 2, 3}, 0.35});
    b.communities.push_back({{0, 3}, {1, 4}, 0.6});
    std::vector<double> probs{0.35, 0.6};

    const int runs = 10000;
    std::vector<std::vector<int>> hits(6, std::vector<int>(6, 0));
    for (int s = 0; s < runs; ++s) {
        auto net = generate(b, 6, true, 40000 + s);
        for (const auto& [u, v] : net.graph.edges()) ++hits[u][v];
    }
    for (NodeId u = 0; u < 6; ++u)
        for (NodeId v = 0; v < 6; ++v) {
            if (u == v) continue;
            std::vector<int> shared;
            for (int c = 0; c < 2; ++c) {
                const auto& community = b.communities[static_cast<std::size_t>(c)];
                bool sends = std::find(community.senders.begin(), community.senders.end(), u) !=
                             community.senders.end();
                bool receives = std::find(community.receivers.begin(), community.receivers.end(),
                                          v) != community.receivers.end();
                if (sends && receives) shared.push_back(c);
            }
            double p = discrete_edge_probability(shared, probs, 6);
            double se = std::sqrt(p * (1.0 - p) / runs);
            double freq = static_cast<double>(hits[u][v]) / runs;
            CHECK(std::abs(freq - p) <= 3.0 * se + 1e-9);
        }
}

TEST_CASE("generate: background off zeroes uncovered pairs, on samples them") {
    DiscreteAffiliationGraph b;
    b.communities.push_back({{0}, {1}, 1.0});
    auto off = generate(b, 20, false, 5);
    CHECK(off.graph.edge_count() == 1);

    // With background on, uncovered pairs fire with probability 1/20 each.
    int background_edges = 0;
    for (int s = 0; s < 50; ++s) {
        auto on = generate(b, 20, true, 500 + s);
        background_edges += static_cast<int>(on.graph.edge_count()) - 1;
    }
    // 379 uncovered pairs * 0.05 = ~19 per run on average.
    CHECK(background_edges > 0);
    double mean = static_cast<double>(background_edges) / 50.0;
    CHECK(mean == doctest::Approx(379.0 / 20.0).epsilon(0.25));
}

TEST_CASE("figure3: probability-one layout exhibits the four dense blocks") {
    Figure3Params params;
    params.block_size = 6;
    params.overlap = 2;
    params.p_in = 1.0;
    auto net = planted_figure3(params, 3);
    const NodeId s = 6, o = 2;
    const NodeId n = 4 * s - o;
    CHECK(net.graph.node_count() == n);

    auto in_a = [&](NodeId u) { return u < s; };
    auto in_b = [&](NodeId u) { return u >= s - o && u < 2 * s - o; };
    auto in_c = [&](NodeId u) { return u >= 2 * s - o && u < 3 * s - o; };
    auto in_d = [&](NodeId u) { return u >= 3 * s - o; };

    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v) {
            if (u == v) continue;
            bool expected = (in_a(u) && in_a(v)) || (in_b(u) && in_b(v)) ||
                            (in_a(u) && in_c(v)) || (in_b(u) && in_d(v));
            CHECK(net.graph.has_edge(u, v) == expected);
        }
    REQUIRE(net.truth.communities.size() == 4);
    CHECK(net.truth.communities[0].members == range_ids(0, s));
    CHECK(net.truth.communities[2].senders == range_ids(0, s));
    CHECK(net.truth.communities[2].receivers == range_ids(2 * s - o, 3 * s - o));
}

TEST_CASE("figure3: zero overlap separates the cohesive blocks") {
    Figure3Params params;
    params.block_size = 5;
    params.overlap = 0;
    params.p_in = 1.0;
    auto net = planted_figure3(params, 9);
    const auto& a = net.truth.communities[0].members;
    const auto& b = net.truth.communities[1].members;
    for (NodeId u : a) CHECK(std::find(b.begin(), b.end(), u) == b.end());
}

TEST_CASE("figure3: fixed seed reproduces the graph") {
    Figure3Params params;
    auto first = planted_figure3(params, 123);
    auto second = planted_figure3(params, 123);
    CHECK(testutil::edge_set(first.graph) == testutil::edge_set(second.graph));
    auto different = planted_figure3(params, 124);
    CHECK(testutil::edge_set(first.graph) != testutil::edge_set(different.graph));
}

TEST_CASE("forest fire: smallest cases") {
    auto one = forest_fire(1, 0.36, 0.32, 1);
    CHECK(one.node_count() == 1);
    CHECK(one.edge_count() == 0);

    auto two = forest_fire(2, 0.36, 0.32, 1);
    CHECK(testutil::edge_set(two) == std::set<Edge>{{1, 0}});
}

TEST_CASE("forest fire: deterministic under a fixed seed") {
    auto a = forest_fire(500, 0.36, 0.32, 77);
    auto b = forest_fire(500, 0.36, 0.32, 77);
    CHECK(testutil::edge_set(a) == testutil::edge_set(b));
}

TEST_CASE("forest fire: densification across growing sizes") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        double previous = 0.0;
        for (NodeId n : {1000u, 10000u, 100000u}) {
            auto g = forest_fire(n, 0.36, 0.32, seed);
            double avg_degree = static_cast<double>(g.edge_count()) / n;
            CHECK(avg_degree > previous);
            previous = avg_degree;
        }
    }
}

TEST_CASE("affiliation spec file parses and rejects malformed lines") {
    std::istringstream good("# sample\nn 10\ncommunity 0.9 out 0 1 in 2 3\ncommunity 0.5 out 4 in 5 6\n");
    NodeId n = 0;
    auto b = load_affiliation_spec(good, n);
    CHECK(n == 10);
    REQUIRE(b.communities.size() == 2);
    CHECK(b.communities[0].probability == 0.9);
    CHECK(b.communities[0].senders == std::vector<NodeId>{0, 1});
    CHECK(b.communities[1].receivers == std::vector<NodeId>{5, 6});

    std::istringstream bad_id("n 4\ncommunity 0.9 out 0 in 9\n");
    CHECK_THROWS_AS(load_affiliation_spec(bad_id, n), ParseError);

    std::istringstream bad_p("n 4\ncommunity 1.5 out 0 in 1\n");
    CHECK_THROWS_AS(load_affiliation_spec(bad_p, n), ParseError);

    std::istringstream missing_in("n 4\ncommunity 0.5 out 0 1\n");
    try {
        load_affiliation_spec(missing_in, n);
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("generate validates community parameters") {
    DiscreteAffiliationGraph bad_p;
    bad_p.communities.push_back({{0}, {1}, 0.0});
    CHECK_THROWS_AS(generate(bad_p, 4, false, 1), std::domain_error);

    DiscreteAffiliationGraph bad_id;
    bad_id.communities.push_back({{0}, {9}, 0.5});
    CHECK_THROWS_AS(generate(bad_id, 4, false, 1), std::invalid_argument);
}
