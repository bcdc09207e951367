#pragma once

#include "relaxcd/diagnostics.hpp"
#include "relaxcd/quadratic.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace relaxcd {

enum class Family { ex1, ex2, ex3, ex4, ex5, ex6 };

const char *family_label(Family f) noexcept;
/// Accepts "Ex1".."Ex6" (case-insensitive) or "1".."6".
Family parse_family(std::string_view text);

struct UniformRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// Parameters of one experiment family. `defaults(f)` fills the values used
/// in the reference experiments; every field can be overridden afterwards.
///
///   Ex1  Q = X X^T, X ~ U(x_range), c = Q alpha, alpha ~ U(alpha_range)
///   Ex2  Ex1's X and c with Q = X X^T + gamma I
///   Ex3  Q = X X^T, alpha with ceil(sparsity N) zeros, c = Q alpha
///   Ex4  Q = X X^T, c ~ U(c_range)
///   Ex5  Q = K + gamma I + beta 1 1^T, K Gaussian kernel exp(-zeta |p - p'|^2)
///        on N points of [0,1]^point_dim, c = v + delta 1, v ~ U(c_range)
///   Ex6  Q = M + gamma I, M read from `path`, c ~ U(c_range)
struct ExampleConfig {
    Family family = Family::ex1;
    std::size_t n = 500;
    std::size_t m = 250;
    UniformRange x_range{2.0, 4.0};
    UniformRange alpha_range{-2.0, 2.0};
    UniformRange c_range{3.0, 5.0};
    double sparsity = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    double zeta = 0.13;
    std::size_t point_dim = 5;
    std::uint64_t seed = 0;
    std::string path;
    /// Gram-form matrices are stored densely when n*n doubles fit.
    std::uint64_t memory_budget = SpsdOperator::default_memory_budget;

    static ExampleConfig defaults(Family family);

    /// Throws invalid_argument on missing or out-of-range parameters.
    void validate() const;
};

/// Named substreams of a seed.
enum class Stream : std::uint64_t { factor = 1, alpha = 2, c = 3, points = 4, support = 5 };

QuadProblem generate(const ExampleConfig &config);

/// (a_inf, a_inf_up) of `count` instances with seeds config.seed + j, in
/// order of j. Instances are built in Gram form (never densified) and spread
/// over `threads` workers (0 = hardware concurrency).
std::vector<AInfinity> batch_a_infinity(const ExampleConfig &config, std::size_t count, unsigned threads = 1);

}  // namespace relaxcd
