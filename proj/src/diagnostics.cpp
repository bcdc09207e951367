#include "relaxcd/diagnostics.hpp"

#include "relaxcd/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace relaxcd {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct SpectralData {
    double lambda_max = 0.0;
    double lambda_min_nonzero = 0.0;
    double pinv_weighted_max = 0.0;  // lambda_max(W^{1/2} Q^+ W^{1/2})
};

SpectralData dense_spectral_data(const SpsdOperator &op) {
    const auto n = static_cast<Eigen::Index>(op.order());
    const Vector q = op.to_dense();
    Eigen::Map<const RowMajorMatrix> m(q.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    require(eig.info() == Eigen::Success, ErrorCode::numeric_fault, "dense eigensolver did not converge");
    const Eigen::VectorXd &lambda = eig.eigenvalues();

    SpectralData out;
    out.lambda_max = lambda(n - 1);
    require(out.lambda_max > 0.0, ErrorCode::invalid_problem, "Q has no positive eigenvalue");
    const double cut = nonzero_eigen_threshold * out.lambda_max;
    Eigen::Index first = 0;
    while (first < n && lambda(first) <= cut) { ++first; }
    out.lambda_min_nonzero = lambda(first);

    // W^{1/2} Q^+ W^{1/2} = C C^T with C = W^{1/2} V_r Lambda_r^{-1/2}
    const Eigen::Index rank = n - first;
    Eigen::MatrixXd cmat = eig.eigenvectors().rightCols(rank);
    for (Eigen::Index j = 0; j < rank; ++j) { cmat.col(j) /= std::sqrt(lambda(first + j)); }
    for (Eigen::Index i = 0; i < n; ++i) { cmat.row(i) *= std::sqrt(op.diagonal()[static_cast<std::size_t>(i)]); }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(cmat.transpose() * cmat, Eigen::EigenvaluesOnly);
    require(small.info() == Eigen::Success, ErrorCode::numeric_fault, "dense eigensolver did not converge");
    out.pinv_weighted_max = small.eigenvalues()(rank - 1);
    return out;
}

// Ritz values of a symmetric map after `steps` Lanczos iterations with full
// reorthogonalisation, sorted ascending.
Eigen::VectorXd lanczos_ritz_values(const LinearMap &apply, std::size_t n, std::size_t steps, std::uint64_t seed) {
    steps = std::min(steps, n);
    std::vector<Vector> basis;
    basis.reserve(steps);
    Vector v(n);
    CounterRng rng(seed);
    for (double &e : v) { e = rng.uniform(-1.0, 1.0); }
    double norm = std::sqrt(dot(v, v));
    for (double &e : v) { e /= norm; }

    std::vector<double> alpha;
    std::vector<double> beta;
    Vector w(n);
    for (std::size_t j = 0; j < steps; ++j) {
        basis.push_back(v);
        apply(v, w);
        const double a = dot(w, v);
        alpha.push_back(a);
        for (const Vector &b : basis) {
            const double proj = dot(w, b);
            for (std::size_t i = 0; i < n; ++i) { w[i] -= proj * b[i]; }
        }
        const double bnorm = std::sqrt(dot(w, w));
        if (j + 1 == steps || bnorm <= 1e-14 * std::abs(a)) { break; }
        beta.push_back(bnorm);
        for (std::size_t i = 0; i < n; ++i) { v[i] = w[i] / bnorm; }
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
            t(i, i + 1) = beta[static_cast<std::size_t>(i)];
            t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t, Eigen::EigenvaluesOnly);
    require(eig.info() == Eigen::Success, ErrorCode::numeric_fault, "Lanczos tridiagonal eigensolve failed");
    return eig.eigenvalues();
}

std::pair<double, double> extremal_nonzero(const Eigen::VectorXd &ritz) {
    const double top = ritz(ritz.size() - 1);
    require(top > 0.0, ErrorCode::invalid_problem, "operator has no positive eigenvalue");
    for (Eigen::Index i = 0; i < ritz.size(); ++i) {
        if (ritz(i) > nonzero_eigen_threshold * top) { return {ritz(i), top}; }
    }
    return {top, top};
}

// Large operators: extremal eigenvalues of Q and of W^{-1/2} Q W^{-1/2} by
// Lanczos; lambda_max(W^{1/2} Q^+ W^{1/2}) is taken as the reciprocal of the
// smallest nonzero eigenvalue of the latter (exact for nonsingular Q).
SpectralData lanczos_spectral_data(const SpsdOperator &op) {
    const std::size_t n = op.order();
    const std::size_t steps = std::min<std::size_t>(n, 400);
    SpectralData out;
    auto [lo, hi] = extremal_nonzero(lanczos_ritz_values(
        [&op](std::span<const double> x, std::span<double> y) { op.matvec(x, y); }, n, steps, 0x5eed));
    out.lambda_min_nonzero = lo;
    out.lambda_max = hi;

    Vector inv_sqrt_w(n);
    for (std::size_t i = 0; i < n; ++i) { inv_sqrt_w[i] = 1.0 / std::sqrt(op.diagonal()[i]); }
    Vector scratch(n);
    auto [wlo, whi] = extremal_nonzero(lanczos_ritz_values(
        [&](std::span<const double> x, std::span<double> y) {
            for (std::size_t i = 0; i < n; ++i) { scratch[i] = x[i] * inv_sqrt_w[i]; }
            op.matvec(scratch, y);
            for (std::size_t i = 0; i < n; ++i) { y[i] *= inv_sqrt_w[i]; }
        },
        n, steps, 0x5eed + 1));
    static_cast<void>(whi);
    out.pinv_weighted_max = 1.0 / wlo;
    return out;
}

SpectralData spectral_data(const SpsdOperator &op) {
    return op.order() <= dense_eigen_limit ? dense_spectral_data(op) : lanczos_spectral_data(op);
}

double max_diag(const SpsdOperator &op) {
    return *std::max_element(op.diagonal().begin(), op.diagonal().end());
}

}  // namespace

double iota_q(const SpsdOperator &op) {
    const SpectralData s = spectral_data(op);
    return s.lambda_min_nonzero / (static_cast<double>(op.order()) * max_diag(op));
}

double iota_tilde_q(const SpsdOperator &op) {
    const SpectralData s = spectral_data(op);
    return 1.0 / (static_cast<double>(op.order()) * s.pinv_weighted_max);
}

RateConstants rate_constants(const QuadProblem &problem) {
    const SpsdOperator &op = problem.op();
    const SpectralData s = spectral_data(op);
    const auto n = static_cast<double>(op.order());
    RateConstants out;
    out.lambda_max = s.lambda_max;
    out.lambda_min_nonzero = s.lambda_min_nonzero;
    out.iota = s.lambda_min_nonzero / (n * max_diag(op));
    out.iota_tilde = 1.0 / (n * s.pinv_weighted_max);
    out.c_qdag_norm_sq = c_qdag_norm_sq(problem);
    const AInfinity a = a_infinity(problem);
    out.a_inf = a.a_inf;
    out.a_inf_up = a.a_inf_up;
    return out;
}

AInfinity a_infinity(std::span<const double> c, std::span<const double> diag, double c_qdag_norm_sq) {
    require(c.size() == diag.size() && !c.empty(), ErrorCode::contract_violation, "a_infinity: size mismatch");
    require(c_qdag_norm_sq > 0.0, ErrorCode::invalid_argument, "a_infinity: ||c||^2 must be positive");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 1.0;
    bool hi_infinite = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double gap = 1.0 - c[i] * c[i] / (diag[i] * c_qdag_norm_sq);
        if (gap <= 1e-12) {
            hi_infinite = true;
            continue;
        }
        const double factor = 1.0 / gap;
        lo = std::min(lo, factor);
        hi = std::max(hi, factor);
    }
    AInfinity out;
    out.a_inf = std::isinf(lo) ? Extended::pos_inf() : Extended::finite(lo);
    out.a_inf_up = hi_infinite ? Extended::pos_inf() : Extended::finite(hi);
    return out;
}

AInfinity a_infinity(const QuadProblem &problem) {
    return a_infinity(problem.c(), problem.diag(), c_qdag_norm_sq(problem));
}

double c_qdag_norm_sq(const QuadProblem &problem) { return problem.const_term(); }

double qdag_norm_sq(const SpsdOperator &op, std::span<const double> c) {
    const std::size_t n = op.order();
    require(c.size() == n, ErrorCode::contract_violation, "qdag_norm_sq: dimension mismatch");
    Vector y(n, 0.0);
    Vector r(c.begin(), c.end());
    Vector p = r;
    Vector q(n);
    const double c_norm = std::sqrt(dot(c, c));
    double rr = dot(r, r);
    const std::size_t max_iter = std::max<std::size_t>(10 * n, 1000);
    for (std::size_t it = 0; it < max_iter && std::sqrt(rr) > 1e-12 * c_norm; ++it) {
        op.matvec(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) { break; }
        const double step = rr / pq;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += step * p[i];
            r[i] -= step * q[i];
        }
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i) { p[i] = r[i] + beta * p[i]; }
    }
    // recurrence residual can drift from the true one; confirm before trusting
    op.matvec(y, q);
    double true_rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) { true_rr += (c[i] - q[i]) * (c[i] - q[i]); }
    if (std::sqrt(true_rr) > 1e-10 * c_norm) {
        fail(ErrorCode::numeric_fault, "CG for Qy = c stalled at relative residual " +
                                           std::to_string(std::sqrt(true_rr) / c_norm));
    }
    return dot(c, y);
}

RateCheckReport asymptotic_rate_check(const RunResult &run, const RateConstants &constants, double epsilon) {
    require(is_relaxed_method(run.method), ErrorCode::invalid_argument,
            "asymptotic_rate_check expects a trace of a relaxed-map method");
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");

    RateCheckReport report;
    const double a = constants.a_inf.is_pos_inf() ? std::numeric_limits<double>::infinity()
                                                  : constants.a_inf.value();
    report.threshold = std::max(0.0, 1.0 - constants.iota * (1.0 - epsilon) * a) + 1e-10;

    const auto &rows = run.trace;
    std::size_t start = 0;
    while (start < rows.size() && !(rows[start].s_x > 0.0)) { ++start; }
    if (start >= rows.size()) { return report; }

    std::size_t tail_begin = start;
    for (std::size_t j = start; j + 1 < rows.size(); ++j) {
        const double prev = rows[j].r_value;
        const double next = rows[j + 1].r_value;
        bool ok = true;
        if (prev > 0.0) {
            const double steps = static_cast<double>(rows[j + 1].k - rows[j].k);
            const double ratio = next <= 0.0 ? 0.0 : std::pow(next / prev, 1.0 / std::max(1.0, steps));
            ok = ratio <= report.threshold;
        }
        if (!ok) {
            ++report.violations;
            tail_begin = j + 1;
        }
    }
    report.k_epsilon = static_cast<std::size_t>(rows[tail_begin].k);
    report.tail_length = static_cast<std::size_t>(rows.back().k - rows[tail_begin].k);
    const bool finite_termination = rows.back().r_value <= 0.0 && report.tail_length > 0;
    report.found = report.tail_length >= 10 || finite_termination;
    return report;
}

}  // namespace relaxcd
