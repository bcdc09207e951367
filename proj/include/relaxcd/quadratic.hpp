#pragma once

#include "relaxcd/operators.hpp"
#include "relaxcd/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>

namespace relaxcd {

/// D(x) = x^T Q x - 2 c^T x + c^T alpha together with the data it is built from.
///
/// The constant term is c^T alpha when a solution alpha is supplied and
/// c^T Q^+ c (obtained by conjugate gradient) otherwise. Construction rejects
/// c == 0, nonpositive diagonal entries of Q, and an alpha with
/// ||Q alpha - c||_inf > 1e-8 ||c||_inf.
class QuadProblem {
public:
    QuadProblem(SpsdOperator op, Vector c, std::optional<Vector> alpha = std::nullopt);

    /// Skips the CG solve when the constant term is already known.
    QuadProblem(SpsdOperator op, Vector c, double const_term);

    [[nodiscard]] const SpsdOperator &op() const noexcept { return *op_; }
    [[nodiscard]] std::shared_ptr<const SpsdOperator> shared_op() const noexcept { return op_; }
    [[nodiscard]] std::size_t order() const noexcept { return op_->order(); }
    [[nodiscard]] const Vector &c() const noexcept { return c_; }
    [[nodiscard]] const std::optional<Vector> &alpha() const noexcept { return alpha_; }
    [[nodiscard]] const Vector &diag() const noexcept { return op_->diagonal(); }
    [[nodiscard]] double const_term() const noexcept { return const_term_; }

private:
    void validate();

    std::shared_ptr<const SpsdOperator> op_;
    Vector c_;
    std::optional<Vector> alpha_;
    double const_term_ = 0.0;
};

/// Cached products of an iterate x: Qx, c^T x and x^T Q x.
struct IterateView {
    std::span<const double> qx;
    double ctx = 0.0;
    double xqx = 0.0;
};

/// Builds the cache for x by a full matvec.
struct IterateCache {
    Vector qx;
    double ctx = 0.0;
    double xqx = 0.0;

    static IterateCache of(const QuadProblem &problem, std::span<const double> x);
    [[nodiscard]] IterateView view() const noexcept { return {qx, ctx, xqx}; }
};

enum class TieBreak { lowest_index, seeded_random };

/// arg max over a score vector. Entries within 1e-12 (relative) of the max
/// are ties; lowest_index takes the first, seeded_random draws uniformly.
class ArgMaxSelector {
public:
    ArgMaxSelector() = default;
    ArgMaxSelector(TieBreak mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

    std::size_t select(std::span<const double> scores);

    static constexpr double tie_tolerance = 1e-12;

private:
    TieBreak mode_ = TieBreak::lowest_index;
    CounterRng rng_{0};
};

double eval_D(const QuadProblem &problem, std::span<const double> x);
double eval_D(const QuadProblem &problem, const IterateView &cache) noexcept;

/// [Qx - c]_i^2 / Q_ii.
double improvement_D(const QuadProblem &problem, const IterateView &cache, std::size_t i);

/// Improvement of an exact line search on D from x along an arbitrary v;
/// zero when v^T Q v == 0.
double improvement_D_along(const QuadProblem &problem, std::span<const double> x, std::span<const double> v);

/// Exact step on D along e_i: -[Qx - c]_i / Q_ii.
double line_search_D(const QuadProblem &problem, const IterateView &cache, std::size_t i);

/// Best-improvement (equivalently Gauss-Southwell-Lipschitz) coordinate for D.
std::size_t select_bi_D(const QuadProblem &problem, const IterateView &cache, ArgMaxSelector &selector);
std::size_t select_bi_D(const QuadProblem &problem, const IterateView &cache);

double dot(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace relaxcd
