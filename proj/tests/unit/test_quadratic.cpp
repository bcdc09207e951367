#include "oracles.hpp"

#include "relaxcd/diagnostics.hpp"
#include "relaxcd/error.hpp"
#include "relaxcd/quadratic.hpp"
#include "relaxcd/relaxed.hpp"

#include <doctest.h>

using namespace relaxcd;

namespace {

// Q = diag(1,2), c = (1,1), alpha = (1, 0.5), c^T alpha = 1.5.
QuadProblem diag_example() { return QuadProblem(SpsdOperator::dense(2, {1, 0, 0, 2}), {1, 1}, Vector{1, 0.5}); }

QuadProblem identity_problem(Vector c) {
    const std::size_t n = c.size();
    Vector q(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) { q[i * n + i] = 1.0; }
    Vector alpha = c;
    return QuadProblem(SpsdOperator::dense(n, q), std::move(c), std::move(alpha));
}

}  // namespace

TEST_CASE("eval_D examples") {
    const auto p = diag_example();
    CHECK(eval_D(p, Vector{0, 0}) == 1.5);
    CHECK(eval_D(p, Vector{1, 0.5}) == doctest::Approx(0.0));
    CHECK(eval_D(p, Vector{1, 0}) == doctest::Approx(0.5));
    CHECK(p.const_term() == 1.5);
}

TEST_CASE("improvement_D, line_search_D and select_bi_D examples") {
    const auto p = diag_example();
    const auto at_x = IterateCache::of(p, Vector{1, 0});
    CHECK(improvement_D(p, at_x.view(), 1) == doctest::Approx(0.5));
    CHECK(improvement_D(p, at_x.view(), 0) == 0.0);
    CHECK(line_search_D(p, at_x.view(), 1) == doctest::Approx(0.5));
    CHECK(line_search_D(p, at_x.view(), 0) == 0.0);
    CHECK(select_bi_D(p, at_x.view()) == 1);

    const auto at_alpha = IterateCache::of(p, Vector{1, 0.5});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(improvement_D(p, at_alpha.view(), i) == 0.0);
        CHECK(line_search_D(p, at_alpha.view(), i) == 0.0);
    }
    CHECK(select_bi_D(p, at_alpha.view()) == 0);

    const auto e1 = identity_problem({1, 0});
    CHECK(improvement_D(e1, IterateCache::of(e1, Vector{0, 0}).view(), 0) == 1.0);
    const auto c31 = identity_problem({3, 1});
    CHECK(select_bi_D(c31, IterateCache::of(c31, Vector{0, 0}).view()) == 0);
}

TEST_CASE("problem construction invariants") {
    CHECK_THROWS_AS(QuadProblem(SpsdOperator::dense(2, {1, 0, 0, 2}), {0, 0}, Vector{0, 0}), Error);
    CHECK_THROWS_AS(QuadProblem(SpsdOperator::dense(2, {1, 0, 0, 0}), {1, 0}, Vector{1, 0}), Error);
    CHECK_THROWS_AS(QuadProblem(SpsdOperator::dense(2, {1, 0, 0, 2}), {1, 1}, Vector{1, 1}), Error);
    CHECK_THROWS_AS(QuadProblem(SpsdOperator::dense(2, {1, 0, 0, 2}), {1, 1, 1}, Vector{1, 1, 1}), Error);
    // Without alpha the constant term is c^T Q^+ c.
    const QuadProblem p(SpsdOperator::dense(2, {1, 0, 0, 2}), {1, 1});
    CHECK(p.const_term() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("tie breaking") {
    ArgMaxSelector lowest;
    CHECK(lowest.select(std::vector<double>{1, 3, 3, 2}) == 1);
    CHECK(lowest.select(std::vector<double>{0, 0, 0}) == 0);
    ArgMaxSelector a(TieBreak::seeded_random, 9);
    ArgMaxSelector b(TieBreak::seeded_random, 9);
    std::vector<int> seen(4, 0);
    for (int t = 0; t < 200; ++t) {
        const auto i = a.select(std::vector<double>{5, 1, 5, 5});
        CHECK(i == b.select(std::vector<double>{5, 1, 5, 5}));
        CHECK(i != 1);
        ++seen[i];
    }
    CHECK(seen[0] > 0);
    CHECK(seen[2] > 0);
    CHECK(seen[3] > 0);
}

TEST_CASE("properties on random problems") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto q = oracle::random_spsd(10, 6, 0.05, seed);
        const auto p = oracle::problem_with_solution(q, seed + 1000);
        const double iota = iota_q(p.op());
        const Vector x = oracle::random_vector(10, -2, 2, seed + 2000);
        const auto cache = IterateCache::of(p, x);
        const double d = eval_D(p, x);
        CHECK(oracle::close(d, oracle::D(q, p.c(), p.const_term(), x), 1e-10));

        const std::size_t best = select_bi_D(p, cache.view());
        for (std::size_t i = 0; i < 10; ++i) {
            Vector z = x;
            z[i] += line_search_D(p, cache.view(), i);
            const double drop = improvement_D(p, cache.view(), i);
            CHECK(std::abs(oracle::D(q, p.c(), p.const_term(), z) - (d - drop)) <= 1e-10 * std::max(1.0, d));
            CHECK(improvement_D(p, cache.view(), best) >= drop);
        }
        CHECK(improvement_D(p, cache.view(), best) >= iota * d * (1 - 1e-12));

        if (dot(p.c(), x) > 0) {
            // D(x) - R(x) = (x^T (Qx - c))^2 / x^T Q x.
            const Vector qx = q.mul(x);
            long double num = 0;
            for (std::size_t i = 0; i < 10; ++i) { num += static_cast<long double>(x[i]) * (qx[i] - p.c()[i]); }
            const double expected = static_cast<double>(num * num / oracle::dotl(x, qx));
            CHECK(std::abs((d - eval_R(p, x)) - expected) <= 1e-10 * std::max(1.0, expected));
        }
    }
}
