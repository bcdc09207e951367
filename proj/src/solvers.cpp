#include "relaxcd/solvers.hpp"

#include "relaxcd/error.hpp"
#include "relaxcd/relaxed.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace relaxcd {

std::string_view method_label(Method m) noexcept {
    switch (m) {
        case Method::cd_d_bi: return "CD-D";
        case Method::sr_d: return "SR-D";
        case Method::cd_r_h: return "H-R";
        case Method::cd_r_bi: return "BI-R";
        case Method::cg: return "CG-D";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view label) noexcept {
    for (Method m : {Method::cd_d_bi, Method::sr_d, Method::cd_r_h, Method::cd_r_bi, Method::cg}) {
        if (label == method_label(m)) { return m; }
    }
    if (label == "CG") { return Method::cg; }
    return std::nullopt;
}

bool is_relaxed_method(Method m) noexcept { return m == Method::cd_r_h || m == Method::cd_r_bi; }

std::string_view termination_label(Termination t) noexcept {
    switch (t) {
        case Termination::tolerance: return "tolerance";
        case Termination::budget: return "budget";
        case Termination::stalled: return "stalled";
        case Termination::breakdown: return "breakdown";
    }
    return "?";
}

void StopRule::validate() const {
    require(objective_tolerance >= 0.0 && relative_tolerance >= 0.0, ErrorCode::invalid_argument,
            "stop rule: tolerances must be nonnegative");
    const bool bounded = max_column_calls != std::numeric_limits<std::uint64_t>::max() ||
                         objective_tolerance > 0.0 || relative_tolerance > 0.0;
    require(bounded, ErrorCode::invalid_argument, "stop rule: at least one bound must be finite");
}

LogThinning LogThinning::for_budget(std::uint64_t budget_calls) noexcept {
    constexpr std::uint64_t dense = 10000;
    return {dense, std::max<std::uint64_t>(1, (budget_calls + dense - 1) / dense)};
}

double objective_of(Method m, const TraceRecord &row) noexcept {
    return is_relaxed_method(m) ? row.r_value : row.d_value;
}

SolverState init_R(const QuadProblem &problem, ArgMaxSelector &selector) {
    const std::size_t n = problem.order();
    const auto &c = problem.c();
    const auto &d = problem.diag();
    Vector scores(n);
    for (std::size_t i = 0; i < n; ++i) { scores[i] = c[i] * c[i] / d[i]; }
    const std::size_t best = selector.select(scores);
    const double sign = c[best] >= 0.0 ? 1.0 : -1.0;

    SolverState state;
    state.method = Method::cd_r_h;
    state.x.assign(n, 0.0);
    state.x[best] = sign;
    state.qx.assign(n, 0.0);
    problem.op().add_column(best, sign, state.qx);
    state.ctx = sign * c[best];
    state.xqx = d[best];
    state.k = 1;
    state.column_calls = 1;
    return state;
}

SolverState init_R(const QuadProblem &problem) {
    ArgMaxSelector selector;
    return init_R(problem, selector);
}

CoordinateSolver::CoordinateSolver(const QuadProblem &problem, Method method, SolverOptions options)
    : problem_(problem), options_(options), selector_(options.tie_break, options.tie_seed) {
    require(method != Method::cg, ErrorCode::invalid_argument, "CoordinateSolver does not run CG; use cg_run");
    const std::size_t n = problem.order();
    state_.method = method;
    state_.x.assign(n, 0.0);
    state_.qx.assign(n, 0.0);
    scores_.resize(n);
    last_ = record();
}

double CoordinateSolver::objective() const noexcept { return objective_of(state_.method, last_); }

TraceRecord CoordinateSolver::record() const {
    TraceRecord row;
    row.k = state_.k;
    row.column_calls = state_.column_calls;
    row.d_value = eval_D(problem_, state_.view());
    const RelaxedEval rel = rescale_and_eval(problem_, state_.view());
    row.r_value = rel.r_value;
    row.s_x = rel.s_x;
    return row;
}

void CoordinateSolver::apply(std::size_t i, double t) {
    if (t != 0.0) {
        const double qx_i = state_.qx[i];
        state_.x[i] += t;
        problem_.op().add_column(i, t, state_.qx);
        state_.ctx += t * problem_.c()[i];
        state_.xqx += t * (t * problem_.diag()[i] + 2.0 * qx_i);
    }
    ++state_.k;
    ++state_.column_calls;
    if (!std::isfinite(state_.ctx) || !std::isfinite(state_.xqx)) {
        fail(ErrorCode::numeric_fault, "non-finite cache after step " + std::to_string(state_.k));
    }
    if (options_.refresh_every != 0 && state_.k % options_.refresh_every == 0) { refresh(); }
}

void CoordinateSolver::refresh() {
    Vector qx = problem_.op().matvec(state_.x);
    if (options_.check_drift) {
        double scale = 0.0;
        double drift = 0.0;
        for (std::size_t i = 0; i < qx.size(); ++i) {
            scale = std::max(scale, std::abs(qx[i]));
            drift = std::max(drift, std::abs(qx[i] - state_.qx[i]));
        }
        if (drift > 1e-8 * std::max(scale, 1e-300)) {
            fail(ErrorCode::internal_consistency, "cache drift " + std::to_string(drift / scale) +
                                                      " exceeds tolerance at step " + std::to_string(state_.k));
        }
    }
    state_.qx = std::move(qx);
    state_.ctx = dot(problem_.c(), state_.x);
    state_.xqx = dot(state_.x, state_.qx);
}

std::size_t CoordinateSolver::select_d(const IterateView &view) {
    const auto &c = problem_.c();
    const auto &d = problem_.diag();
    for (std::size_t i = 0; i < scores_.size(); ++i) {
        const double r = view.qx[i] - c[i];
        scores_[i] = r * r / d[i];
    }
    return selector_.select(scores_);
}

void CoordinateSolver::rescale_iterate() {
    const double s = state_.ctx > 0.0 ? state_.ctx / state_.xqx : 0.0;
    for (double &v : state_.x) { v *= s; }
    for (double &v : state_.qx) { v *= s; }
    state_.ctx *= s;
    state_.xqx *= s * s;
}

TraceRecord CoordinateSolver::step() {
    const Method method = state_.method;
    std::size_t coord = 0;
    double t = 0.0;
    std::optional<Extended> accel;
    double s_recorded = 0.0;

    if (method == Method::cd_d_bi || method == Method::sr_d) {
        coord = select_d(state_.view());
        t = line_search_D(problem_, state_.view(), coord);
        apply(coord, t);
        if (method == Method::sr_d) {
            s_recorded = rescale_and_eval(problem_, state_.view()).s_x;
            rescale_iterate();
        }
    } else if (state_.ctx <= 0.0) {
        // x = 0: the signed-coordinate initialisation is the first step
        require(state_.k == 0, ErrorCode::internal_consistency, "relaxed iterate left the cone");
        const Method keep = state_.method;
        state_ = init_R(problem_, selector_);
        state_.method = keep;
        coord = static_cast<std::size_t>(std::find_if(state_.x.begin(), state_.x.end(),
                                                      [](double v) { return v != 0.0; }) -
                                         state_.x.begin());
        t = state_.x[coord];
    } else {
        const IterateView view = state_.view();
        const double s = view.ctx / view.xqx;
        const auto &c = problem_.c();
        const auto &d = problem_.diag();
        if (method == Method::cd_r_h) {
            for (std::size_t i = 0; i < scores_.size(); ++i) {
                const double g = s * view.qx[i] - c[i];
                scores_[i] = g * g / d[i];
            }
        } else {
            for (std::size_t i = 0; i < scores_.size(); ++i) { scores_[i] = improvement_R(problem_, view, i); }
        }
        coord = selector_.select(scores_);
        accel = acceleration(problem_, view, coord);
        const LineSearchOutcome ls = line_search_R(problem_, view, coord);
        if (ls.kind == LineSearchOutcome::Case::monotone) {
            fail(ErrorCode::line_search_monotone,
                 "monotone line search at step " + std::to_string(state_.k) + ", coordinate " + std::to_string(coord));
        }
        t = ls.kind == LineSearchOutcome::Case::interior_min ? ls.tau : 0.0;
        apply(coord, t);
    }

    TraceRecord row = record();
    row.coord = static_cast<std::int64_t>(coord);
    row.step = t;
    row.accel = accel;
    if (method == Method::sr_d) { row.s_x = s_recorded; }
    if (!std::isfinite(row.d_value) || !std::isfinite(row.r_value)) {
        fail(ErrorCode::numeric_fault, "non-finite objective at step " + std::to_string(state_.k));
    }
    last_ = row;
    return row;
}

namespace {

class RunLogger {
public:
    RunLogger(RunResult &result, const LogThinning &thinning)
        : result_(result), thinning_(thinning), start_(std::chrono::steady_clock::now()) {}

    void offer(TraceRecord row, bool force = false) {
        row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_)
                          .count();
        const std::uint64_t calls = row.column_calls;
        bool keep = force || calls <= thinning_.dense_until;
        if (!keep && thinning_.stride > 0 && calls / thinning_.stride != last_bucket_) { keep = true; }
        if (keep) {
            last_bucket_ = thinning_.stride > 0 ? calls / thinning_.stride : calls;
            result_.trace.push_back(row);
            pending_.reset();
        } else {
            pending_ = row;
        }
    }

    void finish() {
        if (pending_) {
            result_.trace.push_back(*pending_);
            pending_.reset();
        }
    }

private:
    RunResult &result_;
    LogThinning thinning_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t last_bucket_ = 0;
    std::optional<TraceRecord> pending_;
};

bool reached(const StopRule &stop, double objective, double objective0) {
    return objective <= stop.objective_tolerance || objective <= stop.relative_tolerance * objective0;
}

}  // namespace

RunResult run(const QuadProblem &problem, Method method, const StopRule &stop, const SolverOptions &options) {
    if (method == Method::cg) { return cg_run(problem, stop, options); }
    stop.validate();
    RunResult result;
    result.method = method;
    RunLogger logger(result, options.thinning);

    CoordinateSolver solver(problem, method, options);
    TraceRecord row = solver.record();
    logger.offer(row, true);
    const double objective0 = objective_of(method, row);
    double previous = objective0;
    std::uint64_t no_progress = 0;
    const std::uint64_t n = problem.order();

    result.termination = Termination::budget;
    if (reached(stop, objective0, objective0)) {
        result.termination = Termination::tolerance;
    } else {
        while (solver.state().column_calls < stop.max_column_calls) {
            row = solver.step();
            logger.offer(row);
            const double objective = objective_of(method, row);
            no_progress = objective < previous ? 0 : no_progress + 1;
            previous = std::min(previous, objective);
            if (reached(stop, objective, objective0)) {
                result.termination = Termination::tolerance;
                break;
            }
            if (no_progress >= n) {
                result.termination = Termination::stalled;
                break;
            }
        }
    }
    logger.finish();
    result.x = solver.state().x;
    result.cd_steps = solver.state().k;
    result.column_calls = solver.state().column_calls;
    return result;
}

RunResult cg_run(const QuadProblem &problem, const StopRule &stop, const SolverOptions &options) {
    stop.validate();
    const std::size_t n = problem.order();
    const auto &c = problem.c();
    const double k0 = problem.const_term();

    RunResult result;
    result.method = Method::cg;
    RunLogger logger(result, options.thinning);

    Vector x(n, 0.0);
    Vector r = c;
    Vector p = r;
    Vector q(n);
    double rr = dot(r, r);

    auto make_row = [&](std::uint64_t k, double step) {
        TraceRecord row;
        row.k = k;
        row.column_calls = result.column_calls;
        row.step = step;
        // Qx = c - r
        const double ctx = dot(c, x);
        const double xqx = ctx - dot(x, r);
        row.d_value = xqx - 2.0 * ctx + k0;
        const IterateView view{{}, ctx, xqx};
        const RelaxedEval rel = rescale_and_eval(problem, view);
        row.r_value = rel.r_value;
        row.s_x = rel.s_x;
        return row;
    };

    TraceRecord row = make_row(0, 0.0);
    logger.offer(row, true);
    const double objective0 = row.d_value;
    result.termination = Termination::budget;

    if (reached(stop, objective0, objective0)) {
        result.termination = Termination::tolerance;
    } else {
        const double scale = problem.op().max_abs();
        while (result.column_calls + n <= stop.max_column_calls) {
            problem.op().matvec(p, q);
            result.column_calls += n;
            ++result.cg_iterations;
            const double pq = dot(p, q);
            if (!(pq > std::numeric_limits<double>::epsilon() * scale * dot(p, p))) {
                row = make_row(result.cg_iterations, 0.0);
                logger.offer(row, true);
                result.termination = Termination::breakdown;
                break;
            }
            const double step = rr / pq;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += step * p[i];
                r[i] -= step * q[i];
            }
            const double rr_next = dot(r, r);
            row = make_row(result.cg_iterations, step);
            if (!std::isfinite(row.d_value)) {
                fail(ErrorCode::numeric_fault, "non-finite objective in CG iteration " +
                                                   std::to_string(result.cg_iterations));
            }
            logger.offer(row);
            if (reached(stop, row.d_value, objective0) || rr_next == 0.0) {
                result.termination = Termination::tolerance;
                break;
            }
            const double beta = rr_next / rr;
            rr = rr_next;
            for (std::size_t i = 0; i < n; ++i) { p[i] = r[i] + beta * p[i]; }
        }
    }
    logger.finish();
    result.x = std::move(x);
    return result;
}

}  // namespace relaxcd
