#include "relaxcd/relaxcd.h"

#include "relaxcd/diagnostics.hpp"
#include "relaxcd/error.hpp"
#include "relaxcd/generators.hpp"
#include "relaxcd/solvers.hpp"

#include <memory>
#include <new>
#include <string>

struct rcd_problem {
    relaxcd::QuadProblem problem;
};

struct rcd_run {
    relaxcd::RunResult result;
    std::size_t order = 0;
};

namespace {

thread_local std::string last_error;

rcd_status status_of(relaxcd::ErrorCode code) {
    switch (code) {
        case relaxcd::ErrorCode::invalid_argument: return RCD_INVALID_ARGUMENT;
        case relaxcd::ErrorCode::contract_violation: return RCD_CONTRACT_VIOLATION;
        case relaxcd::ErrorCode::invalid_problem: return RCD_INVALID_PROBLEM;
        case relaxcd::ErrorCode::parse_error: return RCD_PARSE_ERROR;
        case relaxcd::ErrorCode::io_error: return RCD_IO_ERROR;
        case relaxcd::ErrorCode::numeric_fault: return RCD_NUMERIC_FAULT;
        case relaxcd::ErrorCode::line_search_monotone: return RCD_LINE_SEARCH_MONOTONE;
        case relaxcd::ErrorCode::internal_consistency: return RCD_INTERNAL_CONSISTENCY;
        case relaxcd::ErrorCode::size_limit: return RCD_SIZE_LIMIT;
    }
    return RCD_UNKNOWN_ERROR;
}

template <class F>
rcd_status guarded(F &&body) noexcept {
    try {
        last_error.clear();
        body();
        return RCD_OK;
    } catch (const relaxcd::Error &e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return RCD_SIZE_LIMIT;
    } catch (const std::exception &e) {
        last_error = e.what();
        return RCD_UNKNOWN_ERROR;
    } catch (...) {
        last_error = "unknown exception";
        return RCD_UNKNOWN_ERROR;
    }
}

void need(const void *p, const char *what) {
    relaxcd::require(p != nullptr, relaxcd::ErrorCode::invalid_argument, what);
}

rcd_extended to_c(const relaxcd::Extended &e) {
    switch (e.tag()) {
        case relaxcd::Extended::Tag::pos_inf: return {RCD_POS_INF, 0.0};
        case relaxcd::Extended::Tag::neg_inf: return {RCD_NEG_INF, 0.0};
        case relaxcd::Extended::Tag::finite: break;
    }
    return {RCD_FINITE, e.value()};
}

relaxcd::Extended from_c(const rcd_extended &e) {
    switch (e.tag) {
        case RCD_POS_INF: return relaxcd::Extended::pos_inf();
        case RCD_NEG_INF: return relaxcd::Extended::neg_inf();
        case RCD_FINITE: break;
    }
    return relaxcd::Extended::finite(e.value);
}

relaxcd::Method to_method(rcd_method m) {
    switch (m) {
        case RCD_METHOD_CD_D: return relaxcd::Method::cd_d_bi;
        case RCD_METHOD_SR_D: return relaxcd::Method::sr_d;
        case RCD_METHOD_H_R: return relaxcd::Method::cd_r_h;
        case RCD_METHOD_BI_R: return relaxcd::Method::cd_r_bi;
        case RCD_METHOD_CG_D: return relaxcd::Method::cg;
    }
    relaxcd::fail(relaxcd::ErrorCode::invalid_argument, "unknown method");
}

rcd_method from_method(relaxcd::Method m) {
    switch (m) {
        case relaxcd::Method::cd_d_bi: return RCD_METHOD_CD_D;
        case relaxcd::Method::sr_d: return RCD_METHOD_SR_D;
        case relaxcd::Method::cd_r_h: return RCD_METHOD_H_R;
        case relaxcd::Method::cd_r_bi: return RCD_METHOD_BI_R;
        case relaxcd::Method::cg: return RCD_METHOD_CG_D;
    }
    return RCD_METHOD_CD_D;
}

relaxcd::ExampleConfig to_config(const rcd_example_config &c) {
    relaxcd::require(c.family >= 1 && c.family <= 6, relaxcd::ErrorCode::invalid_argument, "family must be 1..6");
    relaxcd::ExampleConfig cfg;
    cfg.family = static_cast<relaxcd::Family>(c.family - 1);
    cfg.n = c.n;
    cfg.m = c.m;
    cfg.x_range = {c.x_lo, c.x_hi};
    cfg.alpha_range = {c.alpha_lo, c.alpha_hi};
    cfg.c_range = {c.c_lo, c.c_hi};
    cfg.sparsity = c.sparsity;
    cfg.gamma = c.gamma;
    cfg.beta = c.beta;
    cfg.delta = c.delta;
    cfg.zeta = c.zeta;
    cfg.point_dim = c.point_dim;
    cfg.seed = c.seed;
    cfg.path = c.path != nullptr ? c.path : "";
    cfg.memory_budget = c.memory_budget;
    return cfg;
}

}  // namespace

extern "C" {

const char *rcd_last_error(void) { return last_error.c_str(); }

const char *rcd_status_label(rcd_status status) {
    switch (status) {
        case RCD_OK: return "ok";
        case RCD_INVALID_ARGUMENT: return "invalid argument";
        case RCD_CONTRACT_VIOLATION: return "contract violation";
        case RCD_INVALID_PROBLEM: return "invalid problem";
        case RCD_PARSE_ERROR: return "parse error";
        case RCD_IO_ERROR: return "i/o error";
        case RCD_NUMERIC_FAULT: return "numeric fault";
        case RCD_LINE_SEARCH_MONOTONE: return "monotone line search";
        case RCD_INTERNAL_CONSISTENCY: return "internal consistency";
        case RCD_SIZE_LIMIT: return "size limit";
        case RCD_UNKNOWN_ERROR: break;
    }
    return "unknown error";
}

rcd_status rcd_example_defaults(int family, rcd_example_config *out) {
    return guarded([&] {
        need(out, "out is null");
        relaxcd::require(family >= 1 && family <= 6, relaxcd::ErrorCode::invalid_argument, "family must be 1..6");
        const auto cfg = relaxcd::ExampleConfig::defaults(static_cast<relaxcd::Family>(family - 1));
        *out = rcd_example_config{family,
                                  cfg.n,
                                  cfg.m,
                                  cfg.x_range.lo,
                                  cfg.x_range.hi,
                                  cfg.alpha_range.lo,
                                  cfg.alpha_range.hi,
                                  cfg.c_range.lo,
                                  cfg.c_range.hi,
                                  cfg.sparsity,
                                  cfg.gamma,
                                  cfg.beta,
                                  cfg.delta,
                                  cfg.zeta,
                                  cfg.point_dim,
                                  cfg.seed,
                                  nullptr,
                                  cfg.memory_budget};
    });
}

rcd_status rcd_generate(const rcd_example_config *config, rcd_problem **out) {
    return guarded([&] {
        need(config, "config is null");
        need(out, "out is null");
        *out = new rcd_problem{relaxcd::generate(to_config(*config))};
    });
}

rcd_status rcd_problem_from_dense(size_t n, const double *q, const double *c, const double *alpha,
                                  rcd_problem **out) {
    return guarded([&] {
        need(q, "q is null");
        need(c, "c is null");
        need(out, "out is null");
        relaxcd::require(n >= 1, relaxcd::ErrorCode::invalid_argument, "n must be positive");
        auto op = relaxcd::SpsdOperator::dense(n, relaxcd::Vector(q, q + n * n));
        relaxcd::Vector cv(c, c + n);
        std::optional<relaxcd::Vector> av;
        if (alpha != nullptr) { av.emplace(alpha, alpha + n); }
        *out = new rcd_problem{relaxcd::QuadProblem(std::move(op), std::move(cv), std::move(av))};
    });
}

void rcd_problem_free(rcd_problem *problem) { delete problem; }

size_t rcd_problem_order(const rcd_problem *problem) { return problem != nullptr ? problem->problem.order() : 0; }

double rcd_problem_const_term(const rcd_problem *problem) {
    return problem != nullptr ? problem->problem.const_term() : 0.0;
}

rcd_status rcd_problem_eval_d(const rcd_problem *problem, const double *x, double *out) {
    return guarded([&] {
        need(problem, "problem is null");
        need(x, "x is null");
        need(out, "out is null");
        *out = relaxcd::eval_D(problem->problem, std::span<const double>(x, problem->problem.order()));
    });
}

rcd_status rcd_rate_constants_of(const rcd_problem *problem, rcd_rate_constants *out) {
    return guarded([&] {
        need(problem, "problem is null");
        need(out, "out is null");
        const auto rc = relaxcd::rate_constants(problem->problem);
        *out = rcd_rate_constants{rc.iota,       rc.iota_tilde,          to_c(rc.a_inf), to_c(rc.a_inf_up),
                                  rc.lambda_min_nonzero, rc.lambda_max, rc.c_qdag_norm_sq};
    });
}

const char *rcd_method_label(rcd_method method) {
    switch (method) {
        case RCD_METHOD_CD_D: return "CD-D";
        case RCD_METHOD_SR_D: return "SR-D";
        case RCD_METHOD_H_R: return "H-R";
        case RCD_METHOD_BI_R: return "BI-R";
        case RCD_METHOD_CG_D: return "CG-D";
    }
    return "?";
}

rcd_status rcd_method_parse(const char *label, rcd_method *out) {
    return guarded([&] {
        need(label, "label is null");
        need(out, "out is null");
        const auto m = relaxcd::parse_method(label);
        relaxcd::require(m.has_value(), relaxcd::ErrorCode::invalid_argument,
                         (std::string("unknown method '") + label + "'").c_str());
        *out = from_method(*m);
    });
}

int rcd_method_is_relaxed(rcd_method method) { return method == RCD_METHOD_H_R || method == RCD_METHOD_BI_R; }

void rcd_run_options_defaults(rcd_run_options *out) {
    if (out == nullptr) { return; }
    *out = rcd_run_options{};
    out->max_column_calls = UINT64_MAX;
    out->refresh_every = relaxcd::SolverOptions{}.refresh_every;
}

rcd_status rcd_solve(const rcd_problem *problem, rcd_method method, const rcd_run_options *options, rcd_run **out) {
    return guarded([&] {
        need(problem, "problem is null");
        need(options, "options is null");
        need(out, "out is null");
        const relaxcd::Method m = to_method(method);
        relaxcd::StopRule stop;
        stop.max_column_calls = options->max_column_calls;
        stop.objective_tolerance = options->tolerance;
        stop.relative_tolerance = options->relative_tolerance;
        relaxcd::SolverOptions so;
        so.tie_break = options->random_ties != 0 ? relaxcd::TieBreak::seeded_random : relaxcd::TieBreak::lowest_index;
        so.tie_seed = options->tie_seed;
        so.refresh_every = options->refresh_every;
        if (options->log_dense_until == 0 && options->log_stride == 0) {
            so.thinning = relaxcd::LogThinning::for_budget(options->max_column_calls);
        } else {
            so.thinning = {options->log_dense_until, options->log_stride == 0 ? 1 : options->log_stride};
        }
        auto run = std::make_unique<rcd_run>();
        run->order = problem->problem.order();
        run->result = m == relaxcd::Method::cg ? relaxcd::cg_run(problem->problem, stop, so)
                                               : relaxcd::run(problem->problem, m, stop, so);
        *out = run.release();
    });
}

void rcd_run_free(rcd_run *run) { delete run; }

size_t rcd_run_rows(const rcd_run *run) { return run != nullptr ? run->result.trace.size() : 0; }

rcd_status rcd_run_row(const rcd_run *run, size_t index, rcd_trace_row *out) {
    return guarded([&] {
        need(run, "run is null");
        need(out, "out is null");
        relaxcd::require(index < run->result.trace.size(), relaxcd::ErrorCode::contract_violation,
                         "row index out of range");
        const auto &r = run->result.trace[index];
        *out = rcd_trace_row{r.k,
                             r.column_calls,
                             r.coord,
                             r.step,
                             r.d_value,
                             r.r_value,
                             r.s_x,
                             r.accel.has_value() ? 1 : 0,
                             r.accel.has_value() ? to_c(*r.accel) : rcd_extended{RCD_FINITE, 0.0},
                             r.wall_ns};
    });
}

rcd_termination rcd_run_termination(const rcd_run *run) {
    if (run == nullptr) { return RCD_TERM_BUDGET; }
    switch (run->result.termination) {
        case relaxcd::Termination::tolerance: return RCD_TERM_TOLERANCE;
        case relaxcd::Termination::budget: return RCD_TERM_BUDGET;
        case relaxcd::Termination::stalled: return RCD_TERM_STALLED;
        case relaxcd::Termination::breakdown: return RCD_TERM_BREAKDOWN;
    }
    return RCD_TERM_BUDGET;
}

const char *rcd_termination_label(rcd_termination termination) {
    switch (termination) {
        case RCD_TERM_TOLERANCE: return "tolerance";
        case RCD_TERM_BUDGET: return "budget";
        case RCD_TERM_STALLED: return "stalled";
        case RCD_TERM_BREAKDOWN: return "breakdown";
    }
    return "?";
}

void rcd_run_counts(const rcd_run *run, uint64_t *cd_steps, uint64_t *cg_iterations, uint64_t *column_calls) {
    if (run == nullptr) { return; }
    if (cd_steps != nullptr) { *cd_steps = run->result.cd_steps; }
    if (cg_iterations != nullptr) { *cg_iterations = run->result.cg_iterations; }
    if (column_calls != nullptr) { *column_calls = run->result.column_calls; }
}

rcd_status rcd_run_solution(const rcd_run *run, double *x, size_t n) {
    return guarded([&] {
        need(run, "run is null");
        need(x, "x is null");
        relaxcd::require(n == run->result.x.size(), relaxcd::ErrorCode::contract_violation, "length mismatch");
        std::copy(run->result.x.begin(), run->result.x.end(), x);
    });
}

double rcd_run_objective(const rcd_run *run, size_t index) {
    if (run == nullptr || index >= run->result.trace.size()) { return 0.0; }
    return relaxcd::objective_of(run->result.method, run->result.trace[index]);
}

rcd_status rcd_asymptotic_rate_check(const rcd_run *run, const rcd_rate_constants *constants, double epsilon,
                                     rcd_rate_check *out) {
    return guarded([&] {
        need(run, "run is null");
        need(constants, "constants is null");
        need(out, "out is null");
        relaxcd::RateConstants rc;
        rc.iota = constants->iota;
        rc.iota_tilde = constants->iota_tilde;
        rc.a_inf = from_c(constants->a_inf);
        rc.a_inf_up = from_c(constants->a_inf_up);
        rc.lambda_min_nonzero = constants->lambda_min_nonzero;
        rc.lambda_max = constants->lambda_max;
        rc.c_qdag_norm_sq = constants->c_qdag_norm_sq;
        const auto report = relaxcd::asymptotic_rate_check(run->result, rc, epsilon);
        *out = rcd_rate_check{report.found ? 1 : 0, report.k_epsilon, report.tail_length, report.violations,
                              report.threshold};
    });
}

rcd_status rcd_batch_a_infinity(const rcd_example_config *config, size_t count, unsigned threads,
                                rcd_extended *a_inf, rcd_extended *a_inf_up) {
    return guarded([&] {
        need(config, "config is null");
        need(a_inf, "a_inf is null");
        need(a_inf_up, "a_inf_up is null");
        const auto pairs = relaxcd::batch_a_infinity(to_config(*config), count, threads);
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            a_inf[j] = to_c(pairs[j].a_inf);
            a_inf_up[j] = to_c(pairs[j].a_inf_up);
        }
    });
}

}  // extern "C"
