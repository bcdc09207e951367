/* C interface to the relaxcd library. All handles are opaque; every call that
 * can fail returns an rcd_status and leaves a message for rcd_last_error(). */
#ifndef RELAXCD_H
#define RELAXCD_H

#include <stddef.h>
#include <stdint.h>

#if defined(RELAXCD_BUILDING)
#define RCD_API __attribute__((visibility("default")))
#else
#define RCD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rcd_status {
    RCD_OK = 0,
    RCD_INVALID_ARGUMENT = 1,
    RCD_CONTRACT_VIOLATION = 2,
    RCD_INVALID_PROBLEM = 3,
    RCD_PARSE_ERROR = 4,
    RCD_IO_ERROR = 5,
    RCD_NUMERIC_FAULT = 6,
    RCD_LINE_SEARCH_MONOTONE = 7,
    RCD_INTERNAL_CONSISTENCY = 8,
    RCD_SIZE_LIMIT = 9,
    RCD_UNKNOWN_ERROR = 99
} rcd_status;

typedef enum rcd_method {
    RCD_METHOD_CD_D = 0,
    RCD_METHOD_SR_D = 1,
    RCD_METHOD_H_R = 2,
    RCD_METHOD_BI_R = 3,
    RCD_METHOD_CG_D = 4
} rcd_method;

typedef enum rcd_termination {
    RCD_TERM_TOLERANCE = 0,
    RCD_TERM_BUDGET = 1,
    RCD_TERM_STALLED = 2,
    RCD_TERM_BREAKDOWN = 3
} rcd_termination;

/* Tag of an extended real: finite values carry a payload, infinities do not. */
typedef enum rcd_extended_tag { RCD_FINITE = 0, RCD_POS_INF = 1, RCD_NEG_INF = 2 } rcd_extended_tag;

typedef struct rcd_extended {
    rcd_extended_tag tag;
    double value;
} rcd_extended;

typedef struct rcd_problem rcd_problem;
typedef struct rcd_run rcd_run;

/* Family 1..6; see rcd_example_defaults for the reference parameters. */
typedef struct rcd_example_config {
    int family;
    size_t n;
    size_t m;
    double x_lo, x_hi;
    double alpha_lo, alpha_hi;
    double c_lo, c_hi;
    double sparsity;
    double gamma;
    double beta;
    double delta;
    double zeta;
    size_t point_dim;
    uint64_t seed;
    const char *path; /* Ex6 matrix file; borrowed for the duration of the call */
    uint64_t memory_budget;
} rcd_example_config;

typedef struct rcd_rate_constants {
    double iota;
    double iota_tilde;
    rcd_extended a_inf;
    rcd_extended a_inf_up;
    double lambda_min_nonzero;
    double lambda_max;
    double c_qdag_norm_sq;
} rcd_rate_constants;

typedef struct rcd_run_options {
    uint64_t max_column_calls;
    double tolerance;          /* absolute objective target */
    double relative_tolerance; /* target relative to the objective at k = 0 */
    int random_ties;           /* nonzero: seeded random tie-breaking */
    uint64_t tie_seed;
    uint64_t refresh_every;
    uint64_t log_dense_until; /* 0 with log_stride 0: derive from the budget */
    uint64_t log_stride;
} rcd_run_options;

typedef struct rcd_trace_row {
    uint64_t k;
    uint64_t column_calls;
    int64_t coord; /* -1 when no coordinate was selected */
    double step;
    double d_value;
    double r_value;
    double s_x;
    int has_accel;
    rcd_extended accel;
    int64_t wall_ns;
} rcd_trace_row;

typedef struct rcd_rate_check {
    int found;
    uint64_t k_epsilon;
    uint64_t tail_length;
    uint64_t violations;
    double threshold;
} rcd_rate_check;

/* Message of the last failed call on this thread ("" if none). */
RCD_API const char *rcd_last_error(void);
RCD_API const char *rcd_status_label(rcd_status status);

RCD_API rcd_status rcd_example_defaults(int family, rcd_example_config *out);
RCD_API rcd_status rcd_generate(const rcd_example_config *config, rcd_problem **out);

/* Dense row-major Q (n x n), c of length n, optional alpha (may be NULL). */
RCD_API rcd_status rcd_problem_from_dense(size_t n, const double *q, const double *c, const double *alpha,
                                          rcd_problem **out);
RCD_API void rcd_problem_free(rcd_problem *problem);
RCD_API size_t rcd_problem_order(const rcd_problem *problem);
RCD_API double rcd_problem_const_term(const rcd_problem *problem);
RCD_API rcd_status rcd_problem_eval_d(const rcd_problem *problem, const double *x, double *out);

RCD_API rcd_status rcd_rate_constants_of(const rcd_problem *problem, rcd_rate_constants *out);

RCD_API const char *rcd_method_label(rcd_method method);
RCD_API rcd_status rcd_method_parse(const char *label, rcd_method *out);
RCD_API int rcd_method_is_relaxed(rcd_method method);

RCD_API void rcd_run_options_defaults(rcd_run_options *out);
RCD_API rcd_status rcd_solve(const rcd_problem *problem, rcd_method method, const rcd_run_options *options,
                             rcd_run **out);
RCD_API void rcd_run_free(rcd_run *run);
RCD_API size_t rcd_run_rows(const rcd_run *run);
RCD_API rcd_status rcd_run_row(const rcd_run *run, size_t index, rcd_trace_row *out);
RCD_API rcd_termination rcd_run_termination(const rcd_run *run);
RCD_API const char *rcd_termination_label(rcd_termination termination);
RCD_API void rcd_run_counts(const rcd_run *run, uint64_t *cd_steps, uint64_t *cg_iterations,
                            uint64_t *column_calls);
/* Copies the final iterate into x (length n must equal the problem order). */
RCD_API rcd_status rcd_run_solution(const rcd_run *run, double *x, size_t n);
/* Objective tracked by the run's method for a row: D, rescaled D or R. */
RCD_API double rcd_run_objective(const rcd_run *run, size_t index);

RCD_API rcd_status rcd_asymptotic_rate_check(const rcd_run *run, const rcd_rate_constants *constants,
                                             double epsilon, rcd_rate_check *out);

/* a_inf and a_inf_up of `count` instances with seeds config->seed + j. */
RCD_API rcd_status rcd_batch_a_infinity(const rcd_example_config *config, size_t count, unsigned threads,
                                        rcd_extended *a_inf, rcd_extended *a_inf_up);

#ifdef __cplusplus
}
#endif

#endif
