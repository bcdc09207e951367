#pragma once

// Independent reference computations for tests. Everything here works on
// plain dense matrices in long double and never calls the library formulas.

#include "relaxcd/quadratic.hpp"
#include "relaxcd/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using relaxcd::Vector;

struct Dense {
    std::size_t n = 0;
    Vector q;  // row-major

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return q[i * n + j]; }

    [[nodiscard]] Vector mul(const Vector &x) const {
        Vector y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            long double acc = 0;
            for (std::size_t j = 0; j < n; ++j) { acc += static_cast<long double>(at(i, j)) * x[j]; }
            y[i] = static_cast<double>(acc);
        }
        return y;
    }

    [[nodiscard]] Eigen::MatrixXd eigen() const {
        Eigen::MatrixXd m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) { m(i, j) = at(i, j); }
        }
        return m;
    }
};

inline long double dotl(const Vector &a, const Vector &b) {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) { s += static_cast<long double>(a[i]) * b[i]; }
    return s;
}

/// D(x) = x^T Q x - 2 c^T x + k by explicit summation.
inline double D(const Dense &q, const Vector &c, double k, const Vector &x) {
    long double xqx = 0;
    for (std::size_t i = 0; i < q.n; ++i) {
        for (std::size_t j = 0; j < q.n; ++j) { xqx += static_cast<long double>(x[i]) * q.at(i, j) * x[j]; }
    }
    return static_cast<double>(xqx - 2 * dotl(c, x) + k);
}

/// min_{s >= 0} D(s x): the one-dimensional quadratic s^2 a - 2 s b + k.
inline double R(const Dense &q, const Vector &c, double k, const Vector &x) {
    long double a = 0;
    for (std::size_t i = 0; i < q.n; ++i) {
        for (std::size_t j = 0; j < q.n; ++j) { a += static_cast<long double>(x[i]) * q.at(i, j) * x[j]; }
    }
    const long double b = dotl(c, x);
    if (b <= 0 || a <= 0) { return k; }
    return static_cast<double>(k - b * b / a);
}

/// Minimiser of a unimodal f on [a, b].
inline double golden_section(const std::function<double(double)> &f, double a, double b, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Q = X X^T / r + shift I with X ~ U(-1, 1) of size n x r.
inline Dense random_spsd(std::size_t n, std::size_t r, double shift, std::uint64_t seed) {
    relaxcd::CounterRng rng(seed);
    Vector x(n * r);
    for (double &v : x) { v = rng.uniform(-1.0, 1.0); }
    Dense d{n, Vector(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            long double s = 0;
            for (std::size_t l = 0; l < r; ++l) { s += static_cast<long double>(x[i * r + l]) * x[j * r + l]; }
            const double v = static_cast<double>(s / r) + (i == j ? shift : 0.0);
            d.q[i * n + j] = v;
            d.q[j * n + i] = v;
        }
    }
    return d;
}

inline Vector random_vector(std::size_t n, double lo, double hi, std::uint64_t seed) {
    relaxcd::CounterRng rng(seed);
    Vector v(n);
    for (double &e : v) { e = rng.uniform(lo, hi); }
    return v;
}

/// Problem with c = Q alpha for a random alpha.
inline relaxcd::QuadProblem problem_with_solution(const Dense &q, std::uint64_t seed) {
    Vector alpha = random_vector(q.n, -2.0, 2.0, seed);
    Vector c = q.mul(alpha);
    return relaxcd::QuadProblem(relaxcd::SpsdOperator::dense(q.n, q.q), std::move(c), std::move(alpha));
}

/// Spectrum of a dense symmetric matrix, ascending.
inline Eigen::VectorXd eigenvalues(const Dense &q) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.eigen(), Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

inline Dense dense_of(const relaxcd::SpsdOperator &op) { return Dense{op.order(), op.to_dense()}; }

inline bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
