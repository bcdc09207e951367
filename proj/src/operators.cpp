#include "relaxcd/operators.hpp"

#include "relaxcd/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace relaxcd {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_index(std::size_t i, std::size_t n) {
    if (i >= n) {
        fail(ErrorCode::contract_violation,
             "coordinate " + std::to_string(i) + " out of range for order " + std::to_string(n));
    }
}

void check_length(std::size_t got, std::size_t n, const char *what) {
    if (got != n) {
        fail(ErrorCode::contract_violation, std::string(what) + ": expected length " + std::to_string(n) +
                                                ", got " + std::to_string(got));
    }
}

}  // namespace

SpsdOperator::SpsdOperator(Storage storage) : storage_(std::move(storage)) {
    std::visit([this](const auto &s) { n_ = s.n; }, storage_);
    diag_.assign(n_, 0.0);
    if (const auto *d = as_dense()) {
        for (std::size_t i = 0; i < n_; ++i) { diag_[i] = d->values[i * n_ + i]; }
    } else if (const auto *s = as_csr()) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t p = s->row_ptr[i]; p < s->row_ptr[i + 1]; ++p) {
                if (s->col_idx[p] == i) { diag_[i] += s->values[p]; }
            }
        }
    } else {
        const auto &g = std::get<GramPlusStorage>(storage_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double *row = g.factor.data() + i * g.m;
            double acc = 0.0;
            for (std::size_t k = 0; k < g.m; ++k) { acc += row[k] * row[k]; }
            diag_[i] = acc + g.gamma + g.beta;
        }
    }
}

SpsdOperator SpsdOperator::dense(std::size_t n, Vector values) {
    require(n > 0, ErrorCode::invalid_problem, "dense operator: order must be positive");
    check_length(values.size(), n * n, "dense operator values");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (values[i * n + j] != values[j * n + i]) {
                fail(ErrorCode::invalid_problem, "dense operator is not symmetric at (" + std::to_string(i) +
                                                     "," + std::to_string(j) + ")");
            }
        }
    }
    return SpsdOperator(DenseStorage{n, std::move(values)});
}

SpsdOperator SpsdOperator::sparse_csr(std::size_t n, std::vector<std::size_t> row_ptr,
                                      std::vector<std::size_t> col_idx, Vector values) {
    require(n > 0, ErrorCode::invalid_problem, "csr operator: order must be positive");
    check_length(row_ptr.size(), n + 1, "csr row pointer");
    require(row_ptr.front() == 0 && row_ptr.back() == col_idx.size() && col_idx.size() == values.size(),
            ErrorCode::invalid_problem, "csr operator: inconsistent array sizes");
    for (std::size_t i = 0; i < n; ++i) {
        require(row_ptr[i] <= row_ptr[i + 1], ErrorCode::invalid_problem, "csr operator: row pointer decreases");
        for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            require(col_idx[p] < n, ErrorCode::invalid_problem, "csr operator: column index out of range");
            if (p > row_ptr[i]) {
                require(col_idx[p - 1] < col_idx[p], ErrorCode::invalid_problem,
                        "csr operator: columns must be strictly increasing within a row");
            }
        }
    }
    // symmetry: every (i,j,v) needs a matching (j,i,v)
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const std::size_t j = col_idx[p];
            const auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[j]);
            const auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[j + 1]);
            const auto it = std::lower_bound(first, last, i);
            if (it == last || *it != i || values[static_cast<std::size_t>(it - col_idx.begin())] != values[p]) {
                fail(ErrorCode::invalid_problem, "csr operator is not symmetric at (" + std::to_string(i) + "," +
                                                     std::to_string(j) + ")");
            }
        }
    }
    return SpsdOperator(CsrStorage{n, std::move(row_ptr), std::move(col_idx), std::move(values)});
}

SpsdOperator SpsdOperator::gram_plus(std::size_t n, std::size_t m, Vector factor, double gamma, double beta) {
    require(n > 0, ErrorCode::invalid_problem, "gram operator: order must be positive");
    check_length(factor.size(), n * m, "gram factor");
    require(gamma >= 0.0 && beta >= 0.0, ErrorCode::invalid_problem, "gram operator: gamma and beta must be >= 0");
    return SpsdOperator(GramPlusStorage{n, m, std::move(factor), gamma, beta});
}

SpsdOperator::Kind SpsdOperator::kind() const noexcept {
    return static_cast<Kind>(storage_.index());
}

const DenseStorage *SpsdOperator::as_dense() const noexcept { return std::get_if<DenseStorage>(&storage_); }
const CsrStorage *SpsdOperator::as_csr() const noexcept { return std::get_if<CsrStorage>(&storage_); }
const GramPlusStorage *SpsdOperator::as_gram_plus() const noexcept {
    return std::get_if<GramPlusStorage>(&storage_);
}

Vector SpsdOperator::column(std::size_t i) const {
    Vector out(n_);
    column(i, out);
    return out;
}

void SpsdOperator::column(std::size_t i, std::span<double> out) const {
    check_index(i, n_);
    check_length(out.size(), n_, "column output");
    std::fill(out.begin(), out.end(), 0.0);
    add_column(i, 1.0, out);
}

void SpsdOperator::add_column(std::size_t i, double scale, std::span<double> y) const {
    check_index(i, n_);
    check_length(y.size(), n_, "column accumulator");
    if (const auto *d = as_dense()) {
        // symmetric: column i == row i
        const double *row = d->values.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) { y[j] += scale * row[j]; }
    } else if (const auto *s = as_csr()) {
        for (std::size_t p = s->row_ptr[i]; p < s->row_ptr[i + 1]; ++p) {
            y[s->col_idx[p]] += scale * s->values[p];
        }
    } else {
        const auto &g = std::get<GramPlusStorage>(storage_);
        const double *xi = g.factor.data() + i * g.m;
        for (std::size_t j = 0; j < n_; ++j) {
            const double *xj = g.factor.data() + j * g.m;
            double acc = g.beta;
            for (std::size_t k = 0; k < g.m; ++k) { acc += xj[k] * xi[k]; }
            y[j] += scale * acc;
        }
        y[i] += scale * g.gamma;
    }
}

Vector SpsdOperator::matvec(std::span<const double> x) const {
    Vector out(n_);
    matvec(x, out);
    return out;
}

void SpsdOperator::matvec(std::span<const double> x, std::span<double> out) const {
    check_length(x.size(), n_, "matvec input");
    check_length(out.size(), n_, "matvec output");
    if (const auto *d = as_dense()) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double *row = d->values.data() + i * n_;
            double acc = 0.0;
            for (std::size_t j = 0; j < n_; ++j) { acc += row[j] * x[j]; }
            out[i] = acc;
        }
    } else if (const auto *s = as_csr()) {
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (std::size_t p = s->row_ptr[i]; p < s->row_ptr[i + 1]; ++p) {
                acc += s->values[p] * x[s->col_idx[p]];
            }
            out[i] = acc;
        }
    } else {
        const auto &g = std::get<GramPlusStorage>(storage_);
        Vector xt_x(g.m, 0.0);
        double sum = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            const double *xj = g.factor.data() + j * g.m;
            for (std::size_t k = 0; k < g.m; ++k) { xt_x[k] += xj[k] * x[j]; }
            sum += x[j];
        }
        for (std::size_t i = 0; i < n_; ++i) {
            const double *xi = g.factor.data() + i * g.m;
            double acc = 0.0;
            for (std::size_t k = 0; k < g.m; ++k) { acc += xi[k] * xt_x[k]; }
            out[i] = acc + g.gamma * x[i] + g.beta * sum;
        }
    }
}

double SpsdOperator::max_abs() const {
    double best = 0.0;
    if (const auto *d = as_dense()) {
        for (double v : d->values) { best = std::max(best, std::abs(v)); }
    } else if (const auto *s = as_csr()) {
        for (double v : s->values) { best = std::max(best, std::abs(v)); }
    } else {
        // |Q_ij| <= sqrt(Q_ii Q_jj), so the max sits on the diagonal.
        for (double v : diag_) { best = std::max(best, std::abs(v)); }
    }
    return best;
}

Vector SpsdOperator::to_dense(std::uint64_t budget_bytes) const {
    const std::uint64_t bytes = static_cast<std::uint64_t>(n_) * n_ * sizeof(double);
    if (bytes > budget_bytes) {
        fail(ErrorCode::size_limit, "dense copy of order " + std::to_string(n_) + " exceeds memory budget");
    }
    if (const auto *d = as_dense()) { return d->values; }
    Vector out(n_ * n_, 0.0);
    if (const auto *s = as_csr()) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t p = s->row_ptr[i]; p < s->row_ptr[i + 1]; ++p) {
                out[i * n_ + s->col_idx[p]] += s->values[p];
            }
        }
        return out;
    }
    const auto &g = std::get<GramPlusStorage>(storage_);
    Eigen::Map<const RowMajorMatrix> x(g.factor.data(), static_cast<Eigen::Index>(n_),
                                       static_cast<Eigen::Index>(g.m));
    Eigen::Map<RowMajorMatrix> q(out.data(), static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    q.noalias() = x * x.transpose();
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < i; ++j) { out[i * n_ + j] = out[j * n_ + i]; }
    }
    for (std::size_t i = 0; i < n_ * n_; ++i) { out[i] += g.beta; }
    for (std::size_t i = 0; i < n_; ++i) { out[i * n_ + i] += g.gamma; }
    return out;
}

void SpsdOperator::validate_psd() const {
    if (n_ > psd_validation_limit) { return; }
    Vector q = to_dense();
    Eigen::Map<const RowMajorMatrix> m(q.data(), static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    require(solver.info() == Eigen::Success, ErrorCode::numeric_fault, "psd validation: eigensolver failed");
    const double lambda_min = solver.eigenvalues()(0);
    if (lambda_min < -1e-8 * max_abs()) {
        fail(ErrorCode::invalid_problem,
             "operator is not positive semidefinite (lambda_min = " + std::to_string(lambda_min) + ")");
    }
}

SpsdOperator with_diagonal_shift(const SpsdOperator &op, double gamma) {
    const std::size_t n = op.order();
    if (const auto *d = op.as_dense()) {
        Vector values = d->values;
        for (std::size_t i = 0; i < n; ++i) { values[i * n + i] += gamma; }
        return SpsdOperator::dense(n, std::move(values));
    }
    if (const auto *g = op.as_gram_plus()) {
        return SpsdOperator::gram_plus(n, g->m, g->factor, g->gamma + gamma, g->beta);
    }
    const auto &s = *op.as_csr();
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::size_t> col_idx;
    Vector values;
    col_idx.reserve(s.col_idx.size() + n);
    values.reserve(s.values.size() + n);
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (std::size_t p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
            const std::size_t j = s.col_idx[p];
            if (!placed && j >= i) {
                if (j == i) {
                    col_idx.push_back(j);
                    values.push_back(s.values[p] + gamma);
                    placed = true;
                    continue;
                }
                col_idx.push_back(i);
                values.push_back(gamma);
                placed = true;
            }
            col_idx.push_back(j);
            values.push_back(s.values[p]);
        }
        if (!placed) {
            col_idx.push_back(i);
            values.push_back(gamma);
        }
        row_ptr.push_back(col_idx.size());
    }
    return SpsdOperator::sparse_csr(n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SpsdOperator materialize_within_budget(SpsdOperator op, std::uint64_t budget_bytes) {
    if (op.kind() != SpsdOperator::Kind::gram_plus) { return op; }
    const std::uint64_t n = op.order();
    if (n * n * sizeof(double) > budget_bytes) { return op; }
    return SpsdOperator::dense(op.order(), op.to_dense(budget_bytes));
}

}  // namespace relaxcd
