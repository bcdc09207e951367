#pragma once

#include "relaxcd/extended.hpp"
#include "relaxcd/quadratic.hpp"

#include <Eigen/Dense>

#include <span>

// The relaxed map R(x) = min_{s >= 0} D(s x) and its calculus.
//
// On the cone C = {x : c^T x > 0}, R(x) = c^T alpha - (c^T x)^2 / (x^T Q x)
// and the optimal rescaling is s_x = c^T x / x^T Q x; outside C, s_x = 0 and
// R(x) = c^T alpha. Coordinate variants (direction e_i) run in O(1) from an
// IterateView; the vector variants do their own matvecs.

namespace relaxcd {

/// Q x and Q v are declared collinear when v^T Q v - (v^T Q x)^2 / x^T Q x
/// <= collinearity_eta * v^T Q v.
inline constexpr double collinearity_eta = 1e-12;

struct RelaxedEval {
    double s_x = 0.0;
    double r_value = 0.0;
    bool in_cone = false;
};

RelaxedEval rescale_and_eval(const QuadProblem &problem, const IterateView &cache);
RelaxedEval rescale_and_eval(const QuadProblem &problem, std::span<const double> x);
double eval_R(const QuadProblem &problem, std::span<const double> x);

/// (Upsilon(x; v), Upsilon(v; x)) with
/// Upsilon(x; v) = (c^T v)(x^T Q x) - (c^T x)(v^T Q x).
struct UpsilonPair {
    double x_v = 0.0;
    double v_x = 0.0;
};

UpsilonPair upsilon_pair(const QuadProblem &problem, const IterateView &cache, std::size_t i);
UpsilonPair upsilon_pair(const QuadProblem &problem, std::span<const double> x, std::span<const double> v);

struct LineSearchOutcome {
    enum class Case { interior_min, monotone, collinear };

    Case kind = Case::collinear;
    /// Minimising step; meaningful for interior_min only.
    double tau = 0.0;
    /// For monotone: +1 if the infimum is R(v), -1 if it is R(-v).
    int infimum_sign = 0;
    /// R at the new iterate (interior_min), the infimum (monotone), or R(x) (collinear).
    double new_r = 0.0;
};

/// Exact line search of t -> R(x + t v) from x in C. Throws
/// contract_violation when c^T x <= 0.
LineSearchOutcome line_search_R(const QuadProblem &problem, const IterateView &cache, std::size_t i);
LineSearchOutcome line_search_R(const QuadProblem &problem, std::span<const double> x, std::span<const double> v);

/// R(x) - min over span{x, v} of R. Zero for collinear potentials.
double improvement_R(const QuadProblem &problem, const IterateView &cache, std::size_t i);
double improvement_R(const QuadProblem &problem, std::span<const double> x, std::span<const double> v);

/// (1 - (v^T Q x)^2 / ((v^T Q v)(x^T Q x)))^{-1}; +inf for collinear potentials.
Extended acceleration(const QuadProblem &problem, const IterateView &cache, std::size_t i);
Extended acceleration(const QuadProblem &problem, std::span<const double> x, std::span<const double> v);

/// One-sided directional derivative of R; -inf when x is in the null space
/// of Q and v lies in C.
Extended directional_derivative(const QuadProblem &problem, std::span<const double> x, std::span<const double> v);
Extended directional_derivative(const QuadProblem &problem, const IterateView &cache, std::size_t i);

/// 2 s_x (s_x Q x - c). Throws contract_violation for x with Qx == 0.
Vector grad_R(const QuadProblem &problem, const IterateView &cache);
Vector grad_R(const QuadProblem &problem, std::span<const double> x);

/// Dense Hessian 2[s^2 Q - (2 s Q x - c)(2 s Q x - c)^T / x^T Q x] at x in C.
Eigen::MatrixXd hessian_R(const QuadProblem &problem, std::span<const double> x, std::size_t dense_limit = 64);

}  // namespace relaxcd
