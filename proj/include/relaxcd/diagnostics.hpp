#pragma once

#include "relaxcd/extended.hpp"
#include "relaxcd/quadratic.hpp"
#include "relaxcd/solvers.hpp"

#include <span>
#include <vector>

namespace relaxcd {

/// Rate and acceleration constants of a problem.
///
///   iota        = lambda_min(Q) / (N max_i Q_ii), lambda_min the smallest nonzero eigenvalue
///   iota_tilde  = 1 / (N lambda_max(W^{1/2} Q^+ W^{1/2})), W = diag(Q)
///   a_inf       = min_i (1 - c_i^2 / (Q_ii ||c||^2_{Q^+}))^{-1}, a_inf_up the max
struct RateConstants {
    double iota = 0.0;
    double iota_tilde = 0.0;
    Extended a_inf;
    Extended a_inf_up;
    double lambda_min_nonzero = 0.0;
    double lambda_max = 0.0;
    double c_qdag_norm_sq = 0.0;
};

struct AInfinity {
    Extended a_inf;
    Extended a_inf_up;
};

/// Eigenvalues at or below this fraction of lambda_max count as zero.
inline constexpr double nonzero_eigen_threshold = 1e-10;

/// Dense symmetric eigendecomposition up to this order; Lanczos estimates beyond.
inline constexpr std::size_t dense_eigen_limit = 2048;

double iota_q(const SpsdOperator &op);
double iota_tilde_q(const SpsdOperator &op);

/// Both constants from a single eigendecomposition.
RateConstants rate_constants(const QuadProblem &problem);

AInfinity a_infinity(const QuadProblem &problem);
AInfinity a_infinity(std::span<const double> c, std::span<const double> diag, double c_qdag_norm_sq);

/// c^T Q^+ c: the stored constant term.
double c_qdag_norm_sq(const QuadProblem &problem);

/// c^T y with Qy = c solved by conjugate gradient to relative residual 1e-12.
/// Throws numeric_fault when CG cannot reach it (c outside the range of Q).
double qdag_norm_sq(const SpsdOperator &op, std::span<const double> c);

struct RateCheckReport {
    bool found = false;
    /// Iteration index k at which the satisfying tail starts.
    std::size_t k_epsilon = 0;
    /// Steps past k_epsilon.
    std::size_t tail_length = 0;
    /// Ratio violations before k_epsilon.
    std::size_t violations = 0;
    double threshold = 0.0;
};

/// Finds the smallest k_eps after which every per-step ratio R(k+1)/R(k) is at
/// most 1 - iota (1 - eps) a_inf + 1e-10. Rows before the first iterate in the
/// cone are ignored. "Not found" when the tail is shorter than 10 steps, unless
/// the trace ends at R == 0. Throws invalid_argument for a trace of a D method.
RateCheckReport asymptotic_rate_check(const RunResult &run, const RateConstants &constants, double epsilon);

}  // namespace relaxcd
