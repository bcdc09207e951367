#pragma once

#include "relaxcd/extended.hpp"
#include "relaxcd/quadratic.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace relaxcd {

enum class Method {
    cd_d_bi,  // best-improvement CD on D
    sr_d,     // BI CD on D with the iterate rescaled before every step
    cd_r_h,   // CD on R, H rule (BI rule for D at the rescaled iterate)
    cd_r_bi,  // CD on R, best-improvement rule
    cg,       // plain conjugate gradient on Qx = c
};

/// Figure labels: CD-D, SR-D, H-R, BI-R, CG-D.
std::string_view method_label(Method m) noexcept;
std::optional<Method> parse_method(std::string_view label) noexcept;
bool is_relaxed_method(Method m) noexcept;

/// Iterate plus the caches needed for O(N) coordinate steps.
struct SolverState {
    Method method = Method::cd_d_bi;
    Vector x;
    Vector qx;
    double ctx = 0.0;
    double xqx = 0.0;
    std::uint64_t k = 0;
    std::uint64_t column_calls = 0;

    [[nodiscard]] IterateView view() const noexcept { return {qx, ctx, xqx}; }
};

/// One logged row. coord is -1 for CG and for the k = 0 row.
struct TraceRecord {
    std::uint64_t k = 0;
    std::uint64_t column_calls = 0;
    std::int64_t coord = -1;
    double step = 0.0;
    double d_value = 0.0;
    double r_value = 0.0;
    double s_x = 0.0;
    /// Acceleration term at the selected coordinate (relaxed methods only).
    std::optional<Extended> accel;
    std::int64_t wall_ns = 0;
};

/// Stop when the objective drops to objective_tolerance, to
/// relative_tolerance * objective(0), or when the column-call budget would be
/// exceeded by the next iteration.
struct StopRule {
    std::uint64_t max_column_calls = std::numeric_limits<std::uint64_t>::max();
    double objective_tolerance = 0.0;
    double relative_tolerance = 0.0;

    void validate() const;
};

/// Rows are kept for every column call up to dense_until, then whenever a
/// multiple of stride is crossed; the final row is always kept.
struct LogThinning {
    std::uint64_t dense_until = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t stride = 1;

    /// Every call up to 1e4, then every ceil(budget / 1e4) calls.
    static LogThinning for_budget(std::uint64_t budget_calls) noexcept;
};

struct SolverOptions {
    TieBreak tie_break = TieBreak::lowest_index;
    std::uint64_t tie_seed = 0;
    /// Full recomputation of Qx, c^T x, x^T Q x every this many steps (0 disables).
    std::uint64_t refresh_every = 1000;
    LogThinning thinning;
    /// Compare refreshed caches against the incremental ones and throw
    /// internal_consistency past 1e-8 relative drift.
    bool check_drift = false;
};

enum class Termination { tolerance, budget, stalled, breakdown };

std::string_view termination_label(Termination t) noexcept;

struct RunResult {
    Method method = Method::cd_d_bi;
    std::vector<TraceRecord> trace;
    Termination termination = Termination::budget;
    Vector x;
    std::uint64_t cd_steps = 0;
    std::uint64_t cg_iterations = 0;
    std::uint64_t column_calls = 0;
};

/// Objective tracked by a method: D for CD-D and CG-D, D of the rescaled
/// iterate for SR-D, R for the relaxed methods.
double objective_of(Method m, const TraceRecord &row) noexcept;

/// x = sign(c_i) e_i at i maximising c_i^2 / Q_ii, the signed coordinate with
/// the smallest R. Counts as one step and one column call (k = 1).
SolverState init_R(const QuadProblem &problem, ArgMaxSelector &selector);
SolverState init_R(const QuadProblem &problem);

/// Exact coordinate descent engine for the four CD methods.
class CoordinateSolver {
public:
    CoordinateSolver(const QuadProblem &problem, Method method, SolverOptions options = {});

    /// Row for the current state without advancing.
    [[nodiscard]] TraceRecord record() const;

    /// Advances by one coordinate step (one column call). For relaxed methods
    /// the first step from x = 0 is the signed-coordinate initialisation.
    /// Throws line_search_monotone if the line search leaves the interior
    /// case, numeric_fault on NaN.
    TraceRecord step();

    /// Recomputes the caches from x.
    void refresh();

    [[nodiscard]] const SolverState &state() const noexcept { return state_; }
    [[nodiscard]] double objective() const noexcept;

private:
    void apply(std::size_t i, double t);
    std::size_t select_d(const IterateView &view);
    void rescale_iterate();

    const QuadProblem &problem_;
    SolverOptions options_;
    ArgMaxSelector selector_;
    SolverState state_;
    Vector scores_;
    TraceRecord last_;
};

/// Runs a method until the stop rule fires.
RunResult run(const QuadProblem &problem, Method method, const StopRule &stop, const SolverOptions &options = {});

/// Conjugate gradient from x = 0; N column calls per iteration. A
/// non-positive curvature p^T Q p ends the run with Termination::breakdown.
RunResult cg_run(const QuadProblem &problem, const StopRule &stop, const SolverOptions &options = {});

}  // namespace relaxcd
