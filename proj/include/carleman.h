/* C interface to the carleman library: weight-sequence calculus for
 * Denjoy-Carleman classes, weighted majorant series, and the truncated
 * small-divisor linearization pipeline.
 *
 * All functions return CLM_OK (0) on success or a clm_status error code; on
 * error, clm_ctx_last_error() describes what went wrong.  Output strings are
 * heap-allocated JSON (or CSV) documents owned by the caller: release them
 * with clm_string_free().  Handles are opaque and immutable once created.
 */
#ifndef CARLEMAN_H
#define CARLEMAN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct clm_ctx clm_ctx;
typedef struct clm_weight clm_weight;
typedef struct clm_series clm_series;
typedef struct clm_linear clm_linear;

typedef enum clm_status {
    CLM_OK = 0,
    CLM_ERR_IO = 1,        /* malformed JSON, missing fields, file problems */
    CLM_ERR_DOMAIN = 2,    /* precondition violated by the data */
    CLM_ERR_RESONANCE = 3, /* eigenvalue resonance where none is allowed */
    CLM_ERR_INTERNAL = 4   /* a theory-guaranteed invariant failed */
} clm_status;

const char* clm_version(void);

/* --- context ----------------------------------------------------------- */

clm_ctx* clm_ctx_new(void);
void clm_ctx_free(clm_ctx* ctx);
const char* clm_ctx_last_error(const clm_ctx* ctx);
/* mantissa precision for inexact mode; values below 128 bits are clamped up */
int clm_ctx_set_precision_bits(clm_ctx* ctx, int bits);
/* lambda search grid for parameterized predicates, e.g. "1,2,4,8,16" */
int clm_ctx_set_lambda_grid(clm_ctx* ctx, const char* csv);

void clm_string_free(char* s);

/* --- weights ------------------------------------------------------------ */

int clm_weight_parse(clm_ctx* ctx, const char* json_text, clm_weight** out);
int clm_weight_generate(clm_ctx* ctx, const char* kind, int horizon, const char* params_json,
                        clm_weight** out);
void clm_weight_free(clm_weight* w);
int clm_weight_to_json(clm_ctx* ctx, const clm_weight* w, char** out);

/* one predicate; lambda may be NULL to search the context grid */
int clm_weight_check_property(clm_ctx* ctx, const clm_weight* w, const char* property,
                              const char* lambda, char** report);
/* implication chain, extra predicates, analytic type, shift duality */
int clm_weight_classify(clm_ctx* ctx, const clm_weight* w, char** report);
int clm_weight_regularize(clm_ctx* ctx, const clm_weight* w, char** report);
int clm_weight_star(clm_ctx* ctx, const clm_weight* m, const clm_weight* w, char** weight_json);
int clm_weight_left_shift(clm_ctx* ctx, const clm_weight* w, char** weight_json);
int clm_weight_characteristic(clm_ctx* ctx, const clm_weight* w, int terms, char** report);

/* --- series -------------------------------------------------------------- */

int clm_series_parse(clm_ctx* ctx, const char* json_text, clm_series** out);
void clm_series_free(clm_series* s);
int clm_series_to_json(clm_ctx* ctx, const clm_series* s, char** out);

int clm_series_compose(clm_ctx* ctx, const clm_series* g, const clm_series* h, int order,
                       char** series_json);
int clm_series_inverse(clm_ctx* ctx, const clm_series* g, int order, char** series_json);
int clm_main_lemma_check(clm_ctx* ctx, const clm_series* g, const clm_series* h,
                         const clm_weight* w, const clm_weight* m, const char* lambda, int order,
                         char** report);
int clm_seminorm_bound_check(clm_ctx* ctx, const clm_series* g, const clm_series* h,
                             const clm_weight* w, const clm_weight* m, const char* lambda,
                             const char* radius, char** report);
/* v is a scalar field in (t, x); phi, the comparison series, and the
 * coefficientwise majorant verdict are all in the report */
int clm_flow_check(clm_ctx* ctx, const clm_series* v, const clm_weight* m_time,
                   const clm_weight* m_space, int order, char** report);

/* --- linearization ------------------------------------------------------- */

int clm_linear_parse(clm_ctx* ctx, const char* json_text, clm_linear** out);
void clm_linear_free(clm_linear* l);

/* nonresonance scan to max degree Q: E_k table and Omega(q) */
int clm_omega_scan(clm_ctx* ctx, const clm_linear* l, int Q, char** report);

/* domination certificate from an Omega table (or omega-scan report) JSON;
 * policy is "minimal", "constant" or "gevrey" (delta required for gevrey) */
int clm_dominate(clm_ctx* ctx, const char* omega_json, const char* policy, const char* delta,
                 char** certificate);

int clm_classify_regularity(clm_ctx* ctx, const clm_weight* m, const char* certificate_json,
                            char** report);

/* the full Part-I pipeline: nonresonance scan, formal linearization, sigma and
 * Delta ledgers, Siegel bound, Counting Lemma sweep, domination, regularity
 * classification.  Returns CLM_ERR_RESONANCE on a resonant linear part. */
int clm_linearize_pipeline(clm_ctx* ctx, const clm_linear* l, const clm_series* ghat,
                           const clm_weight* m, int order, int Q, const char* policy,
                           const char* delta, char** report_json, char** table_csv);

/* --- fixtures ------------------------------------------------------------ */

/* kind: weights | poincare | siegel | gevrey-divisors | liouville | maps | all */
int clm_fixtures_write(clm_ctx* ctx, const char* kind, const char* out_dir,
                       const char* params_json, char** manifest_json);

#ifdef __cplusplus
}
#endif

#endif /* CARLEMAN_H */
