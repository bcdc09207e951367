#include "relaxcd/quadratic.hpp"

#include "relaxcd/diagnostics.hpp"
#include "relaxcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relaxcd {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) { acc += a[i] * b[i]; }
    return acc;
}

QuadProblem::QuadProblem(SpsdOperator op, Vector c, std::optional<Vector> alpha)
    : op_(std::make_shared<const SpsdOperator>(std::move(op))), c_(std::move(c)), alpha_(std::move(alpha)) {
    validate();
    if (alpha_) {
        const Vector q_alpha = op_->matvec(*alpha_);
        double c_inf = 0.0;
        double res_inf = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_inf = std::max(c_inf, std::abs(c_[i]));
            res_inf = std::max(res_inf, std::abs(q_alpha[i] - c_[i]));
        }
        if (res_inf > 1e-8 * c_inf) {
            fail(ErrorCode::invalid_problem,
                 "supplied solution is inconsistent: ||Q alpha - c||_inf = " + std::to_string(res_inf));
        }
        const_term_ = dot(c_, *alpha_);
    } else {
        const_term_ = qdag_norm_sq(*op_, c_);
    }
    require(const_term_ > 0.0, ErrorCode::invalid_problem, "c^T Q^+ c must be positive");
}

QuadProblem::QuadProblem(SpsdOperator op, Vector c, double const_term)
    : op_(std::make_shared<const SpsdOperator>(std::move(op))), c_(std::move(c)), const_term_(const_term) {
    validate();
    require(const_term_ > 0.0 && std::isfinite(const_term_), ErrorCode::invalid_problem,
            "constant term must be positive and finite");
}

void QuadProblem::validate() {
    const std::size_t n = op_->order();
    if (c_.size() != n) {
        fail(ErrorCode::invalid_problem, "c has length " + std::to_string(c_.size()) + ", expected " +
                                             std::to_string(n));
    }
    if (alpha_ && alpha_->size() != n) { fail(ErrorCode::invalid_problem, "alpha has the wrong length"); }
    require(std::any_of(c_.begin(), c_.end(), [](double v) { return v != 0.0; }), ErrorCode::invalid_problem,
            "c must be nonzero");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(op_->diagonal()[i] > 0.0)) {
            fail(ErrorCode::invalid_problem, "Q_ii must be positive (i = " + std::to_string(i) + ")");
        }
    }
}

IterateCache IterateCache::of(const QuadProblem &problem, std::span<const double> x) {
    IterateCache cache;
    cache.qx = problem.op().matvec(x);
    cache.ctx = dot(problem.c(), x);
    cache.xqx = dot(x, cache.qx);
    return cache;
}

std::size_t ArgMaxSelector::select(std::span<const double> scores) {
    require(!scores.empty(), ErrorCode::contract_violation, "arg max of an empty score vector");
    const double best = *std::max_element(scores.begin(), scores.end());
    const double cutoff = best - tie_tolerance * std::abs(best);
    if (mode_ == TieBreak::lowest_index) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= cutoff) { return i; }
        }
    }
    const auto ties = static_cast<std::uint64_t>(
        std::count_if(scores.begin(), scores.end(), [cutoff](double s) { return s >= cutoff; }));
    std::uint64_t pick = rng_.below(ties);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] >= cutoff && pick-- == 0) { return i; }
    }
    return 0;
}

double eval_D(const QuadProblem &problem, std::span<const double> x) {
    require(x.size() == problem.order(), ErrorCode::contract_violation, "eval_D: dimension mismatch");
    const Vector qx = problem.op().matvec(x);
    return dot(x, qx) - 2.0 * dot(problem.c(), x) + problem.const_term();
}

double eval_D(const QuadProblem &problem, const IterateView &cache) noexcept {
    return cache.xqx - 2.0 * cache.ctx + problem.const_term();
}

double improvement_D(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    require(i < problem.order(), ErrorCode::contract_violation, "improvement_D: coordinate out of range");
    const double r = cache.qx[i] - problem.c()[i];
    return r * r / problem.diag()[i];
}

double improvement_D_along(const QuadProblem &problem, std::span<const double> x, std::span<const double> v) {
    const Vector qv = problem.op().matvec(v);
    const double vqv = dot(v, qv);
    if (vqv <= 0.0) { return 0.0; }
    const double g = dot(qv, x) - dot(v, problem.c());
    return g * g / vqv;
}

double line_search_D(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    require(i < problem.order(), ErrorCode::contract_violation, "line_search_D: coordinate out of range");
    return -(cache.qx[i] - problem.c()[i]) / problem.diag()[i];
}

std::size_t select_bi_D(const QuadProblem &problem, const IterateView &cache, ArgMaxSelector &selector) {
    const std::size_t n = problem.order();
    Vector scores(n);
    const auto &c = problem.c();
    const auto &d = problem.diag();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = cache.qx[i] - c[i];
        scores[i] = r * r / d[i];
    }
    return selector.select(scores);
}

std::size_t select_bi_D(const QuadProblem &problem, const IterateView &cache) {
    ArgMaxSelector selector;
    return select_bi_D(problem, cache, selector);
}

}  // namespace relaxcd
