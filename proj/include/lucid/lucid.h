/* C interface to the lucid interpretable-model solvers.
 *
 * Conventions:
 *  - Every fallible call returns a lucid_status. On failure the message is
 *    available from lucid_last_error() on the same thread until the next call.
 *  - Handles are opaque and owned by the caller; free them with the matching
 *    *_free function. Freeing NULL is a no-op.
 *  - Strings returned through char** out-parameters are heap allocated and
 *    must be released with lucid_string_free.
 *  - Structured results cross the boundary as versioned JSON documents.
 *  - Exact rationals are passed as text: "1/100", "0.01" or "1e-2".
 */
#ifndef LUCID_LUCID_H
#define LUCID_LUCID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LUCID_API __declspec(dllexport)
#else
#define LUCID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lucid_status {
  LUCID_OK = 0,
  LUCID_ERR_INTERNAL = 1,
  LUCID_ERR_INPUT = 2,      /* malformed or inconsistent input data */
  LUCID_ERR_BUDGET = 3,     /* search stopped early; outputs carry a gap */
  LUCID_ERR_INFEASIBLE = 4, /* no model or counterfactual satisfies the query */
  LUCID_ERR_ARGUMENT = 5,   /* invalid parameter */
  LUCID_ERR_IO = 6
} lucid_status;

typedef struct lucid_dataset lucid_dataset;
typedef struct lucid_antecedents lucid_antecedents;

LUCID_API const char* lucid_version(void);
LUCID_API const char* lucid_last_error(void);
LUCID_API void lucid_string_free(char* s);

/* Datasets -------------------------------------------------------------- */

/* Reads a CSV, maps the label column to {0,1} and binarizes the remaining
 * columns. positive_label may be NULL for "1"; config_path may be NULL for
 * the default quartile cutpoints. */
LUCID_API lucid_status lucid_dataset_from_csv(const char* csv_path, const char* label_column,
                                              const char* positive_label, const char* config_path,
                                              lucid_dataset** out);
/* Row-major 0/1 matrix of n rows by p features. */
LUCID_API lucid_status lucid_dataset_from_rows(size_t n, size_t p, const uint8_t* rows, const uint8_t* labels,
                                               const char* const* feature_names, lucid_dataset** out);
LUCID_API lucid_status lucid_dataset_load(const char* path, lucid_dataset** out);
LUCID_API lucid_status lucid_dataset_save(const lucid_dataset* ds, const char* path);
LUCID_API void lucid_dataset_free(lucid_dataset* ds);
LUCID_API size_t lucid_dataset_rows(const lucid_dataset* ds);
LUCID_API size_t lucid_dataset_features(const lucid_dataset* ds);
/* {"n":..,"p":..,"positives":..,"labels":{..},"features":[{"name","column","kind","group"}]} */
LUCID_API lucid_status lucid_dataset_info(const lucid_dataset* ds, char** json);
/* Stratified split; the same seed always yields the same rows. */
LUCID_API lucid_status lucid_dataset_split(const lucid_dataset* ds, double test_fraction, uint64_t seed,
                                           lucid_dataset** train, lucid_dataset** test);

/* Antecedents ----------------------------------------------------------- */

LUCID_API lucid_status lucid_mine_antecedents(const lucid_dataset* ds, size_t max_cardinality, double min_support,
                                              int include_negations, lucid_antecedents** out);
LUCID_API size_t lucid_antecedents_count(const lucid_antecedents* ants);
/* ["age<=20", "sex=Male and not priors_count<=0", ...] */
LUCID_API lucid_status lucid_antecedents_describe(const lucid_antecedents* ants, const lucid_dataset* ds,
                                                  char** json);
LUCID_API void lucid_antecedents_free(lucid_antecedents* ants);

/* Rule lists ------------------------------------------------------------ */

typedef struct lucid_search_options {
  const char* lambda;  /* default "1/100" */
  const char* epsilon; /* Rashomon tolerance, default "0" */
  size_t max_rules;    /* default 3 */
  size_t threads;      /* default 1 */
  size_t memory_budget_bytes; /* 0 = unlimited */
  size_t max_expansions;      /* 0 = unlimited */
  int breadth_first;          /* default 0: best-first */
  size_t max_rashomon_size;   /* default 1000000 */
  const char* const* forbidden;
  size_t num_forbidden;
  const char* const* required;
  size_t num_required;
} lucid_search_options;

LUCID_API void lucid_search_options_init(lucid_search_options* opts);

/* Certificate JSON and a text rendering (model followed by the proof
 * summary). Returns LUCID_ERR_BUDGET, with both outputs set, when the search
 * stopped before proving optimality. */
LUCID_API lucid_status lucid_train_rulelist(const lucid_dataset* ds, const lucid_antecedents* ants,
                                            const lucid_search_options* opts, char** certificate_json,
                                            char** text);
LUCID_API lucid_status lucid_rashomon(const lucid_dataset* ds, const lucid_antecedents* ants,
                                      const lucid_search_options* opts, char** json, char** text);
/* Exhaustive reference optimum; only for tiny universes. */
LUCID_API lucid_status lucid_bruteforce_rulelist(const lucid_dataset* ds, const lucid_antecedents* ants,
                                                 const lucid_search_options* opts, char** json);

/* Scoring systems -------------------------------------------------------- */

typedef struct lucid_scoring_options {
  const char* lambda; /* default "1/100" */
  int coef_min, coef_max;           /* default -10, 10 */
  int intercept_min, intercept_max; /* default -20, 20 */
  size_t sparsity_cap;              /* 0 = no cap */
  const char* signs; /* NULL, or "feature:>=0,feature:<=0,feature:=0" */
  size_t threads;
  size_t max_nodes; /* 0 = unlimited */
} lucid_scoring_options;

LUCID_API void lucid_scoring_options_init(lucid_scoring_options* opts);
LUCID_API lucid_status lucid_train_scoring(const lucid_dataset* ds, const lucid_scoring_options* opts,
                                           char** certificate_json, char** text);
LUCID_API lucid_status lucid_logreg_baseline(const lucid_dataset* ds, const lucid_scoring_options* opts,
                                             char** model_json, char** text);
LUCID_API lucid_status lucid_bruteforce_scoring(const lucid_dataset* ds, const lucid_scoring_options* opts,
                                                char** json);

/* Queries and reports ---------------------------------------------------- */

/* Renders a model document as text. */
LUCID_API lucid_status lucid_model_text(const char* model_json, char** text);

/* query_json: {"instance": {"feature": 0|1, ...} or [0|1, ...], or
 *              "row": i to take row i of ds,
 *              "target": 0|1 (default: the opposite of the current prediction), "costs": {"feature": cost, ...},
 *              "immutable": ["feature", ...], "budget": flips, "k": count}
 * Result: {"feasible", "prediction", "counterfactuals": [...], "narrative"}.
 * Returns LUCID_ERR_INFEASIBLE (with the result set) when none exists. */
LUCID_API lucid_status lucid_counterfactual(const char* model_json, const char* query_json,
                                            const lucid_dataset* ds, char** result_json);

/* spec_json: {"margin": "1/100", "models": [{"name", "role": "interpretable"
 * | "baseline", "model": {...}} or {"name", "role", "predictions_csv": path}]}
 * External predictions index rows of the test set. */
LUCID_API lucid_status lucid_compare(const lucid_dataset* train, const lucid_dataset* test, const char* spec_json,
                                     char** report_json, char** text);

#ifdef __cplusplus
}
#endif

#endif /* LUCID_LUCID_H */
