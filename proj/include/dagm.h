/* C interface to the dagm overlapping community detection library.
 *
 * Handles are opaque; every constructor has a matching _free. Functions
 * returning dagm_status set a thread-local message readable through
 * dagm_last_error on failure.
 */
#ifndef DAGM_H
#define DAGM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dagm_status {
    DAGM_OK = 0,
    DAGM_ERR_INVALID_ARG = 1,
    DAGM_ERR_IO = 2,
    DAGM_ERR_PARSE = 3,
    DAGM_ERR_INTERNAL = 4
} dagm_status;

typedef struct dagm_graph dagm_graph;
typedef struct dagm_model dagm_model;
typedef struct dagm_communities dagm_communities;
typedef struct dagm_node_sets dagm_node_sets;

const char* dagm_last_error(void);

/* ---- graphs ---- */

/* Load a '#'-commented "src dst" edge list. directed=0 treats every edge as
 * reciprocal. self_loops_out / duplicates_out receive drop counts when
 * non-NULL. */
dagm_status dagm_graph_load_file(const char* path, int directed, dagm_graph** out,
                                 int64_t* self_loops_out, int64_t* duplicates_out);
dagm_status dagm_graph_write_file(const dagm_graph* g, const char* path);
int64_t dagm_graph_node_count(const dagm_graph* g);
int64_t dagm_graph_edge_count(const dagm_graph* g);
void dagm_graph_free(dagm_graph* g);

/* ---- generators ---- */

dagm_status dagm_generate_figure3(int32_t block_size, int32_t overlap, double p_in,
                                  int background, uint64_t seed, dagm_graph** graph_out,
                                  dagm_node_sets** truth_out);
dagm_status dagm_generate_forest_fire(int64_t node_count, double p_forward, double p_backward,
                                      uint64_t seed, dagm_graph** graph_out);
/* Scenario file: "n <count>" then "community <p> out <ids...> in <ids...>". */
dagm_status dagm_generate_from_spec_file(const char* path, int background, uint64_t seed,
                                         dagm_graph** graph_out, dagm_node_sets** truth_out);

/* ---- fitting ---- */

typedef struct dagm_fit_options {
    int32_t max_outer_iterations;
    double rel_improvement_stop;
    double line_search_shrink;
    double line_search_accept;
    double initial_step;
    int32_t max_line_search_steps;
    double epsilon_floor;
    double gradient_clip;
    int32_t threads; /* 0 = hardware concurrency */
    uint64_t rng_seed;
    int32_t interleaved; /* single-threaded paper-style schedule */
} dagm_fit_options;

void dagm_fit_options_init(dagm_fit_options* opts);

dagm_status dagm_fit(const dagm_graph* g, int32_t k, const dagm_fit_options* opts,
                     dagm_model** out);

/* Choose K by held-out pair likelihood (BIC below small_edge_threshold
 * edges). table_out, when non-NULL, receives a tab-separated diagnostics
 * table to release with dagm_string_free. */
dagm_status dagm_select_k(const dagm_graph* g, const int32_t* candidates, int32_t candidate_count,
                          double holdout_fraction, double negative_sample_ratio,
                          int32_t small_edge_threshold, uint64_t selection_seed,
                          const dagm_fit_options* opts, int32_t* chosen_out, char** table_out);
void dagm_string_free(char* text);

double dagm_model_log_likelihood(const dagm_model* model);
int32_t dagm_model_k(const dagm_model* model);
int32_t dagm_model_iterations(const dagm_model* model);
/* "iteration\tlog_likelihood\tseconds" per line. */
dagm_status dagm_model_write_trace(const dagm_model* model, const char* path);
/* "label\tcommunity\tF\tH" per node/community pair. */
dagm_status dagm_model_write_strengths(const dagm_model* model, const dagm_graph* g,
                                       const char* path);
void dagm_model_free(dagm_model* model);

/* ---- communities ---- */

/* Threshold fitted strengths, classify at gamma, optionally merge mirror
 * pairs from reciprocal (undirected) inputs. */
dagm_status dagm_extract_communities(const dagm_model* model, const dagm_graph* g, double gamma,
                                     int dedup_mirrors, dagm_communities** out);
int64_t dagm_communities_count(const dagm_communities* cs);
int64_t dagm_communities_count_two_mode(const dagm_communities* cs);
dagm_status dagm_communities_write_file(const dagm_communities* cs, const dagm_graph* g,
                                        const char* path);
dagm_status dagm_communities_load_file(const char* path, const dagm_graph* g,
                                       dagm_communities** out);
void dagm_communities_free(dagm_communities* cs);

/* ---- ground truth and scoring ---- */

dagm_status dagm_node_sets_load_file(const char* path, const dagm_graph* g, dagm_node_sets** out);
dagm_status dagm_node_sets_write_file(const dagm_node_sets* sets, const dagm_graph* g,
                                      const char* path);
void dagm_node_sets_free(dagm_node_sets* sets);

typedef enum dagm_side {
    DAGM_SIDE_UNION = 0,
    DAGM_SIDE_OUT = 1,
    DAGM_SIDE_IN = 2
} dagm_side;

/* Symmetric best-match average between ground truth and detected
 * communities reduced to node sets per `side`. Either score pointer may be
 * NULL. */
dagm_status dagm_match_score(const dagm_node_sets* truth, const dagm_communities* detected,
                             dagm_side side, double* f1_out, double* jaccard_out);

/* Same score straight from files: a ground-truth community file and a
 * detected-communities file. Labels are resolved against the union of both
 * files, so no graph is needed. */
dagm_status dagm_match_score_files(const char* truth_path, const char* detected_path,
                                   dagm_side side, double* f1_out, double* jaccard_out);

#ifdef __cplusplus
}
#endif

#endif /* DAGM_H */
