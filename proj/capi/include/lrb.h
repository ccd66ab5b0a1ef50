/* C interface for the low-rank bandit library.
 *
 * All functions return LRB_OK on success; on failure they return a status
 * code and leave a human-readable message in lrb_last_error() (thread-local).
 * Objects returned through out-parameters are owned by the caller and must
 * be released with the matching *_free function.
 */
#ifndef LRB_H
#define LRB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LRB_OK = 0,
  LRB_ERR_RUNTIME = 1, /* unexpected failure */
  LRB_ERR_CONFIG = 2,  /* bad config file, key, or experiment id */
  LRB_ERR_INVALID = 3, /* invalid argument or precondition */
  LRB_ERR_IO = 4       /* file system failure */
} lrb_status;

typedef struct lrb_model lrb_model;   /* low-rank reward matrix instance */
typedef struct lrb_config lrb_config; /* experiment configuration */

const char* lrb_version(void);
/* Message for the most recent failure on this thread ("" if none). */
const char* lrb_last_error(void);

/* ---- instance generation and inspection -------------------------------- */

/* Random invertible-factor instance: M = P D Q restricted to rank r. */
lrb_status lrb_model_gen_pdq(int m, int n, int r, uint64_t seed, lrb_model** out);
/* The all-ones matrix (rank one, flattest possible spectrum). */
lrb_status lrb_model_gen_all_ones(int m, int n, lrb_model** out);
void lrb_model_free(lrb_model* model);

int lrb_model_rows(const lrb_model* model);
int lrb_model_cols(const lrb_model* model);
int lrb_model_rank(const lrb_model* model);
lrb_status lrb_model_entry(const lrb_model* model, int i, int j, double* out);
/* Fills {mu, kappa, max_norm, sigma1, sigma_r, L}; L uses sigma_noise. */
lrb_status lrb_model_summary(const lrb_model* model, double sigma_noise, double out[6]);

/* ---- experiment configuration ------------------------------------------ */

lrb_status lrb_config_parse(const char* path, lrb_config** out);
lrb_status lrb_config_default(const char* experiment_id, lrb_config** out);
void lrb_config_free(lrb_config* cfg);

lrb_status lrb_config_set_seeds(lrb_config* cfg, int seeds);
lrb_status lrb_config_set_output_path(lrb_config* cfg, const char* dir);
lrb_status lrb_config_set_jobs(lrb_config* cfg, int jobs);
/* Unlocks oracle_mode configs; intended for test drivers only. */
lrb_status lrb_config_allow_oracle(lrb_config* cfg);
const char* lrb_config_experiment_id(const lrb_config* cfg);

/* ---- execution ---------------------------------------------------------- */

/* Runs the configured experiment; invokes cb once per output file written. */
typedef void (*lrb_path_cb)(const char* path, void* user);
lrb_status lrb_run(const lrb_config* cfg, lrb_path_cb cb, void* user);

/* Runnable experiment ids, in canonical order.  Name lookup returns NULL
 * for an out-of-range index. */
int lrb_experiment_count(void);
const char* lrb_experiment_name(int index);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LRB_H */
