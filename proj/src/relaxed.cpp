#include "relaxcd/relaxed.hpp"

#include "relaxcd/error.hpp"

#include <cmath>
#include <string>

namespace relaxcd {

namespace {

// Scalar products describing the pair (x, v).
struct PairProducts {
    double ctx;  // c^T x
    double cv;   // c^T v
    double xqx;  // x^T Q x
    double vqx;  // v^T Q x
    double vqv;  // v^T Q v
};

PairProducts coordinate_products(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    require(i < problem.order(), ErrorCode::contract_violation, "coordinate out of range");
    return {cache.ctx, problem.c()[i], cache.xqx, cache.qx[i], problem.diag()[i]};
}

PairProducts vector_products(const QuadProblem &problem, std::span<const double> x, std::span<const double> v) {
    const std::size_t n = problem.order();
    require(x.size() == n && v.size() == n, ErrorCode::contract_violation, "dimension mismatch");
    const Vector qx = problem.op().matvec(x);
    const Vector qv = problem.op().matvec(v);
    return {dot(problem.c(), x), dot(problem.c(), v), dot(x, qx), dot(v, qx), dot(v, qv)};
}

double s_of(const PairProducts &p) {
    if (p.ctx <= 0.0) { return 0.0; }
    if (!(p.xqx > 0.0)) {
        fail(ErrorCode::internal_consistency, "c^T x > 0 with x^T Q x <= 0: corrupted cache");
    }
    return p.ctx / p.xqx;
}

// v^T Q v - (v^T Q x)^2 / x^T Q x, i.e. the Gram determinant over x^T Q x.
double schur(const PairProducts &p) { return p.vqv - p.vqx * p.vqx / p.xqx; }

bool is_collinear(const PairProducts &p) {
    if (!(p.vqv > 0.0)) { return true; }
    return schur(p) <= collinearity_eta * p.vqv;
}

UpsilonPair upsilon_of(const PairProducts &p) {
    return {p.cv * p.xqx - p.ctx * p.vqx, p.ctx * p.vqv - p.cv * p.vqx};
}

void require_cone(const PairProducts &p) {
    if (!(p.ctx > 0.0)) { fail(ErrorCode::contract_violation, "iterate is outside the cone c^T x > 0"); }
}

double r_from(double const_term, double ctx, double xqx) {
    if (ctx <= 0.0) { return const_term; }
    return const_term - ctx * (ctx / xqx);
}

LineSearchOutcome line_search_of(const QuadProblem &problem, const PairProducts &p) {
    require_cone(p);
    const double k = problem.const_term();
    LineSearchOutcome out;
    if (is_collinear(p)) {
        out.kind = LineSearchOutcome::Case::collinear;
        out.new_r = r_from(k, p.ctx, p.xqx);
        return out;
    }
    const UpsilonPair u = upsilon_of(p);
    if (u.v_x > 0.0) {
        out.kind = LineSearchOutcome::Case::interior_min;
        out.tau = u.x_v / u.v_x;
        const double ctx = p.ctx + out.tau * p.cv;
        const double xqx = p.xqx + out.tau * (2.0 * p.vqx + out.tau * p.vqv);
        out.new_r = r_from(k, ctx, xqx);
        return out;
    }
    out.kind = LineSearchOutcome::Case::monotone;
    out.infimum_sign = p.cv > 0.0 ? 1 : -1;
    // R(+-v) = k - (c^T v)^2 / v^T Q v on whichever side lies in the cone
    out.new_r = p.cv != 0.0 ? k - p.cv * (p.cv / p.vqv) : k;
    return out;
}

double improvement_of(const PairProducts &p) {
    require_cone(p);
    if (is_collinear(p)) { return 0.0; }
    const double g = s_of(p) * p.vqx - p.cv;
    return g * g / schur(p);
}

Extended acceleration_of(const PairProducts &p) {
    require_cone(p);
    if (is_collinear(p)) { return Extended::pos_inf(); }
    return Extended::finite(1.0 / (1.0 - p.vqx * p.vqx / (p.vqv * p.xqx)));
}

Extended derivative_of(const PairProducts &p) {
    // x^T Q x == 0 exactly characterises Qx == 0 for PSD Q
    if (p.xqx <= 0.0 && p.cv > 0.0) { return Extended::neg_inf(); }
    const double s = s_of(p);
    return Extended::finite(2.0 * s * (s * p.vqx - p.cv));
}

}  // namespace

RelaxedEval rescale_and_eval(const QuadProblem &problem, const IterateView &cache) {
    RelaxedEval out;
    if (cache.ctx > 0.0) {
        if (!(cache.xqx > 0.0)) {
            fail(ErrorCode::internal_consistency, "c^T x > 0 with x^T Q x <= 0: corrupted cache");
        }
        out.in_cone = true;
        out.s_x = cache.ctx / cache.xqx;
        out.r_value = problem.const_term() - cache.ctx * out.s_x;
    } else {
        out.r_value = problem.const_term();
    }
    return out;
}

RelaxedEval rescale_and_eval(const QuadProblem &problem, std::span<const double> x) {
    const IterateCache cache = IterateCache::of(problem, x);
    return rescale_and_eval(problem, cache.view());
}

double eval_R(const QuadProblem &problem, std::span<const double> x) {
    return rescale_and_eval(problem, x).r_value;
}

UpsilonPair upsilon_pair(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    return upsilon_of(coordinate_products(problem, cache, i));
}

UpsilonPair upsilon_pair(const QuadProblem &problem, std::span<const double> x, std::span<const double> v) {
    return upsilon_of(vector_products(problem, x, v));
}

LineSearchOutcome line_search_R(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    return line_search_of(problem, coordinate_products(problem, cache, i));
}

LineSearchOutcome line_search_R(const QuadProblem &problem, std::span<const double> x, std::span<const double> v) {
    return line_search_of(problem, vector_products(problem, x, v));
}

double improvement_R(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    return improvement_of(coordinate_products(problem, cache, i));
}

double improvement_R(const QuadProblem &problem, std::span<const double> x, std::span<const double> v) {
    return improvement_of(vector_products(problem, x, v));
}

Extended acceleration(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    return acceleration_of(coordinate_products(problem, cache, i));
}

Extended acceleration(const QuadProblem &problem, std::span<const double> x, std::span<const double> v) {
    return acceleration_of(vector_products(problem, x, v));
}

Extended directional_derivative(const QuadProblem &problem, std::span<const double> x, std::span<const double> v) {
    return derivative_of(vector_products(problem, x, v));
}

Extended directional_derivative(const QuadProblem &problem, const IterateView &cache, std::size_t i) {
    return derivative_of(coordinate_products(problem, cache, i));
}

Vector grad_R(const QuadProblem &problem, const IterateView &cache) {
    if (!(cache.xqx > 0.0)) { fail(ErrorCode::contract_violation, "grad_R: x lies in the null space of Q"); }
    const double s = cache.ctx > 0.0 ? cache.ctx / cache.xqx : 0.0;
    const auto &c = problem.c();
    Vector g(problem.order());
    for (std::size_t i = 0; i < g.size(); ++i) { g[i] = 2.0 * s * (s * cache.qx[i] - c[i]); }
    return g;
}

Vector grad_R(const QuadProblem &problem, std::span<const double> x) {
    const IterateCache cache = IterateCache::of(problem, x);
    return grad_R(problem, cache.view());
}

Eigen::MatrixXd hessian_R(const QuadProblem &problem, std::span<const double> x, std::size_t dense_limit) {
    const std::size_t n = problem.order();
    if (n > dense_limit) {
        fail(ErrorCode::size_limit, "hessian_R: order " + std::to_string(n) + " exceeds dense limit " +
                                        std::to_string(dense_limit));
    }
    const IterateCache cache = IterateCache::of(problem, x);
    require(cache.ctx > 0.0, ErrorCode::contract_violation, "hessian_R: x must lie in the cone");
    const double s = cache.ctx / cache.xqx;
    const Vector q = problem.op().to_dense();
    Eigen::VectorXd g(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        g(static_cast<Eigen::Index>(i)) = 2.0 * s * cache.qx[i] - problem.c()[i];
    }
    Eigen::MatrixXd h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        for (std::size_t j = i; j < n; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double v = 2.0 * (s * s * q[i * n + j] - g(ii) * g(jj) / cache.xqx);
            h(ii, jj) = v;
            h(jj, ii) = v;
        }
    }
    return h;
}

}  // namespace relaxcd
