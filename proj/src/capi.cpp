#include "dagm.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "dagm/communities.hpp"
#include "dagm/evaluation.hpp"
#include "dagm/generator.hpp"
#include "dagm/graph.hpp"
#include "dagm/optimizer.hpp"
#include "dagm/seeding.hpp"
#include "dagm/selection.hpp"

struct dagm_graph {
    dagm::DirectedGraph g;
};
struct dagm_model {
    dagm::AffiliationMatrices m;
    dagm::FitReport report;
};
struct dagm_communities {
    dagm::CommunitySet cs;
};
struct dagm_node_sets {
    dagm::GroundTruthCommunities truth;
};

namespace {

thread_local std::string g_last_error;

dagm_status fail(dagm_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
dagm_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const dagm::ParseError& e) {
        return fail(DAGM_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(DAGM_ERR_INVALID_ARG, e.what());
    } catch (const std::domain_error& e) {
        return fail(DAGM_ERR_INVALID_ARG, e.what());
    } catch (const std::exception& e) {
        return fail(DAGM_ERR_INTERNAL, e.what());
    }
}

dagm::FitConfig to_fit_config(const dagm_fit_options* opts) {
    dagm::FitConfig cfg;
    if (!opts) return cfg;
    cfg.max_outer_iterations = opts->max_outer_iterations;
    cfg.rel_improvement_stop = opts->rel_improvement_stop;
    cfg.line_search_shrink = opts->line_search_shrink;
    cfg.line_search_accept = opts->line_search_accept;
    cfg.initial_step = opts->initial_step;
    cfg.max_line_search_steps = opts->max_line_search_steps;
    cfg.epsilon_floor = opts->epsilon_floor;
    cfg.gradient_clip = opts->gradient_clip;
    cfg.threads = opts->threads;
    cfg.rng_seed = opts->rng_seed;
    cfg.interleaved = opts->interleaved != 0;
    return cfg;
}

std::ofstream open_output(const char* path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(std::string("cannot open '") + path + "' for writing");
    return out;
}

} // namespace

extern "C" {

const char* dagm_last_error(void) { return g_last_error.c_str(); }

dagm_status dagm_graph_load_file(const char* path, int directed, dagm_graph** out,
                                 int64_t* self_loops_out, int64_t* duplicates_out) {
    if (!path || !out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) return fail(DAGM_ERR_IO, std::string("cannot open '") + path + "' for reading");
        dagm::LoadStats stats;
        auto g = dagm::load_edge_list(in, directed != 0, &stats);
        if (self_loops_out) *self_loops_out = static_cast<int64_t>(stats.self_loops_dropped);
        if (duplicates_out) *duplicates_out = static_cast<int64_t>(stats.duplicate_edges_dropped);
        *out = new dagm_graph{std::move(g)};
        return DAGM_OK;
    });
}

dagm_status dagm_graph_write_file(const dagm_graph* g, const char* path) {
    if (!g || !path) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        auto out = open_output(path);
        dagm::write_edge_list(g->g, out);
        return out ? DAGM_OK : fail(DAGM_ERR_IO, "write failed");
    });
}

int64_t dagm_graph_node_count(const dagm_graph* g) {
    return g ? static_cast<int64_t>(g->g.node_count()) : -1;
}

int64_t dagm_graph_edge_count(const dagm_graph* g) {
    return g ? static_cast<int64_t>(g->g.edge_count()) : -1;
}

void dagm_graph_free(dagm_graph* g) { delete g; }

dagm_status dagm_generate_figure3(int32_t block_size, int32_t overlap, double p_in,
                                  int background, uint64_t seed, dagm_graph** graph_out,
                                  dagm_node_sets** truth_out) {
    if (!graph_out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        if (block_size < 0 || overlap < 0)
            return fail(DAGM_ERR_INVALID_ARG, "block size and overlap must be nonnegative");
        dagm::Figure3Params params;
        params.block_size = static_cast<dagm::NodeId>(block_size);
        params.overlap = static_cast<dagm::NodeId>(overlap);
        params.p_in = p_in;
        params.background = background != 0;
        auto net = dagm::planted_figure3(params, seed);
        *graph_out = new dagm_graph{std::move(net.graph)};
        if (truth_out) *truth_out = new dagm_node_sets{std::move(net.truth)};
        return DAGM_OK;
    });
}

dagm_status dagm_generate_forest_fire(int64_t node_count, double p_forward, double p_backward,
                                      uint64_t seed, dagm_graph** graph_out) {
    if (!graph_out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        if (node_count < 1) return fail(DAGM_ERR_INVALID_ARG, "node count must be positive");
        auto g = dagm::forest_fire(static_cast<dagm::NodeId>(node_count), p_forward, p_backward,
                                   seed);
        *graph_out = new dagm_graph{std::move(g)};
        return DAGM_OK;
    });
}

dagm_status dagm_generate_from_spec_file(const char* path, int background, uint64_t seed,
                                         dagm_graph** graph_out, dagm_node_sets** truth_out) {
    if (!path || !graph_out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) return fail(DAGM_ERR_IO, std::string("cannot open '") + path + "' for reading");
        dagm::NodeId n = 0;
        auto b = dagm::load_affiliation_spec(in, n);
        auto net = dagm::generate(b, n, background != 0, seed);
        *graph_out = new dagm_graph{std::move(net.graph)};
        if (truth_out) *truth_out = new dagm_node_sets{std::move(net.truth)};
        return DAGM_OK;
    });
}

void dagm_fit_options_init(dagm_fit_options* opts) {
    if (!opts) return;
    dagm::FitConfig defaults;
    opts->max_outer_iterations = defaults.max_outer_iterations;
    opts->rel_improvement_stop = defaults.rel_improvement_stop;
    opts->line_search_shrink = defaults.line_search_shrink;
    opts->line_search_accept = defaults.line_search_accept;
    opts->initial_step = defaults.initial_step;
    opts->max_line_search_steps = defaults.max_line_search_steps;
    opts->epsilon_floor = defaults.epsilon_floor;
    opts->gradient_clip = defaults.gradient_clip;
    opts->threads = defaults.threads;
    opts->rng_seed = defaults.rng_seed;
    opts->interleaved = defaults.interleaved ? 1 : 0;
}

dagm_status dagm_fit(const dagm_graph* g, int32_t k, const dagm_fit_options* opts,
                     dagm_model** out) {
    if (!g || !out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        dagm::FitConfig cfg = to_fit_config(opts);
        auto seeds = dagm::locally_minimal_neighborhoods(g->g);
        auto init = dagm::initialize_memberships(g->g, k, seeds, cfg.rng_seed);
        dagm::FitReport report;
        auto m = dagm::fit(g->g, k, std::move(init), cfg, &report);
        *out = new dagm_model{std::move(m), std::move(report)};
        return DAGM_OK;
    });
}

dagm_status dagm_select_k(const dagm_graph* g, const int32_t* candidates, int32_t candidate_count,
                          double holdout_fraction, double negative_sample_ratio,
                          int32_t small_edge_threshold, uint64_t selection_seed,
                          const dagm_fit_options* opts, int32_t* chosen_out, char** table_out) {
    if (!g || !candidates || candidate_count < 1 || !chosen_out)
        return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        dagm::KSelectionConfig cfg;
        cfg.candidate_ks.assign(candidates, candidates + candidate_count);
        cfg.holdout_fraction = holdout_fraction;
        cfg.negative_sample_ratio = negative_sample_ratio;
        cfg.small_network_edge_threshold = small_edge_threshold;
        cfg.rng_seed = selection_seed;
        auto result = dagm::select_k(g->g, cfg, to_fit_config(opts));
        *chosen_out = result.chosen_k;
        if (table_out) {
            std::ostringstream table;
            dagm::write_selection_table(result, table);
            std::string text = table.str();
            char* buffer = new char[text.size() + 1];
            std::memcpy(buffer, text.c_str(), text.size() + 1);
            *table_out = buffer;
        }
        return DAGM_OK;
    });
}

void dagm_string_free(char* text) { delete[] text; }

double dagm_model_log_likelihood(const dagm_model* model) {
    return model ? model->report.final_log_likelihood : 0.0;
}

int32_t dagm_model_k(const dagm_model* model) { return model ? model->m.k() : -1; }

int32_t dagm_model_iterations(const dagm_model* model) {
    return model ? model->report.iterations : -1;
}

dagm_status dagm_model_write_trace(const dagm_model* model, const char* path) {
    if (!model || !path) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        auto out = open_output(path);
        dagm::write_fit_report(model->report, out);
        return DAGM_OK;
    });
}

dagm_status dagm_model_write_strengths(const dagm_model* model, const dagm_graph* g,
                                       const char* path) {
    if (!model || !g || !path) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        if (model->m.node_count() != g->g.node_count())
            return fail(DAGM_ERR_INVALID_ARG, "model not fitted on this graph");
        auto out = open_output(path);
        for (dagm::NodeId u = 0; u < model->m.node_count(); ++u) {
            auto f = model->m.out_row(u);
            auto h = model->m.in_row(u);
            for (int c = 0; c < model->m.k(); ++c)
                out << g->g.label(u) << '\t' << c << '\t' << f[c] << '\t' << h[c] << '\n';
        }
        return DAGM_OK;
    });
}

void dagm_model_free(dagm_model* model) { delete model; }

dagm_status dagm_extract_communities(const dagm_model* model, const dagm_graph* g, double gamma,
                                     int dedup_mirrors, dagm_communities** out) {
    if (!model || !g || !out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        if (model->m.node_count() != g->g.node_count())
            return fail(DAGM_ERR_INVALID_ARG, "model not fitted on this graph");
        auto cs = dagm::extract(model->m, g->g.node_count(), gamma);
        if (dedup_mirrors) cs = dagm::dedup_mirrors(cs);
        *out = new dagm_communities{std::move(cs)};
        return DAGM_OK;
    });
}

int64_t dagm_communities_count(const dagm_communities* cs) {
    return cs ? static_cast<int64_t>(cs->cs.communities.size()) : -1;
}

int64_t dagm_communities_count_two_mode(const dagm_communities* cs) {
    if (!cs) return -1;
    int64_t count = 0;
    for (const auto& c : cs->cs.communities)
        if (c.label == dagm::CommunityLabel::TwoMode) ++count;
    return count;
}

dagm_status dagm_communities_write_file(const dagm_communities* cs, const dagm_graph* g,
                                        const char* path) {
    if (!cs || !g || !path) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        auto out = open_output(path);
        dagm::write_community_set(cs->cs, g->g, out);
        return DAGM_OK;
    });
}

dagm_status dagm_communities_load_file(const char* path, const dagm_graph* g,
                                       dagm_communities** out) {
    if (!path || !g || !out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) return fail(DAGM_ERR_IO, std::string("cannot open '") + path + "' for reading");
        *out = new dagm_communities{dagm::load_community_set(in, g->g)};
        return DAGM_OK;
    });
}

void dagm_communities_free(dagm_communities* cs) { delete cs; }

dagm_status dagm_node_sets_load_file(const char* path, const dagm_graph* g, dagm_node_sets** out) {
    if (!path || !g || !out) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) return fail(DAGM_ERR_IO, std::string("cannot open '") + path + "' for reading");
        *out = new dagm_node_sets{dagm::load_communities(in, g->g)};
        return DAGM_OK;
    });
}

dagm_status dagm_node_sets_write_file(const dagm_node_sets* sets, const dagm_graph* g,
                                      const char* path) {
    if (!sets || !g || !path) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        auto out = open_output(path);
        dagm::write_communities(sets->truth, g->g, out);
        return DAGM_OK;
    });
}

void dagm_node_sets_free(dagm_node_sets* sets) { delete sets; }

dagm_status dagm_match_score(const dagm_node_sets* truth, const dagm_communities* detected,
                             dagm_side side, double* f1_out, double* jaccard_out) {
    if (!truth || !detected) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        dagm::MatchSide match_side = dagm::MatchSide::Union;
        if (side == DAGM_SIDE_OUT) match_side = dagm::MatchSide::Out;
        else if (side == DAGM_SIDE_IN) match_side = dagm::MatchSide::In;
        auto score = dagm::match_score(truth->truth, detected->cs, match_side);
        if (f1_out) *f1_out = score.f1;
        if (jaccard_out) *jaccard_out = score.jaccard;
        return DAGM_OK;
    });
}

dagm_status dagm_match_score_files(const char* truth_path, const char* detected_path,
                                   dagm_side side, double* f1_out, double* jaccard_out) {
    if (!truth_path || !detected_path) return fail(DAGM_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::ifstream truth_in(truth_path);
        if (!truth_in)
            return fail(DAGM_ERR_IO, std::string("cannot open '") + truth_path + "' for reading");
        std::ifstream detected_in(detected_path);
        if (!detected_in)
            return fail(DAGM_ERR_IO,
                        std::string("cannot open '") + detected_path + "' for reading");

        // Build a label universe covering both files so the loaders can
        // resolve them without the original graph.
        std::vector<std::string> labels;
        std::unordered_map<std::string, dagm::NodeId> seen;
        auto collect = [&](const std::string& text) {
            std::istringstream tokens(text);
            std::string token;
            while (tokens >> token)
                if (seen.emplace(token, static_cast<dagm::NodeId>(labels.size())).second)
                    labels.push_back(token);
        };
        std::string line;
        std::ostringstream truth_copy;
        while (std::getline(truth_in, line)) {
            truth_copy << line << '\n';
            if (!line.empty() && line[0] != '#') collect(line);
        }
        std::ostringstream detected_copy;
        while (std::getline(detected_in, line)) {
            detected_copy << line << '\n';
            if (line.empty() || line[0] == '#') continue;
            std::size_t out_pos = line.find("OUT:");
            if (out_pos == std::string::npos) continue;
            std::string rest = line.substr(out_pos + 4);
            std::size_t in_pos = rest.find("IN:");
            if (in_pos != std::string::npos) rest.erase(in_pos, 3);
            for (char& ch : rest)
                if (ch == '\t') ch = ' ';
            collect(rest);
        }
        if (labels.empty()) return fail(DAGM_ERR_PARSE, "no node labels in input files");

        auto universe = dagm::DirectedGraph::from_edges(
            static_cast<dagm::NodeId>(labels.size()), {}, std::move(labels));
        std::istringstream truth_stream(truth_copy.str());
        auto truth = dagm::load_communities(truth_stream, universe);
        std::istringstream detected_stream(detected_copy.str());
        auto detected = dagm::load_community_set(detected_stream, universe);

        dagm::MatchSide match_side = dagm::MatchSide::Union;
        if (side == DAGM_SIDE_OUT) match_side = dagm::MatchSide::Out;
        else if (side == DAGM_SIDE_IN) match_side = dagm::MatchSide::In;
        auto score = dagm::match_score(truth, detected, match_side);
        if (f1_out) *f1_out = score.f1;
        if (jaccard_out) *jaccard_out = score.jaccard;
        return DAGM_OK;
    });
}

} // extern "C"
