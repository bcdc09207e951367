#include "oracles.hpp"

#include "relaxcd/error.hpp"
#include "relaxcd/relaxed.hpp"

#include <doctest.h>

using namespace relaxcd;
using Case = LineSearchOutcome::Case;

namespace {

QuadProblem diag_example() { return QuadProblem(SpsdOperator::dense(2, {1, 0, 0, 2}), {1, 1}, Vector{1, 0.5}); }

QuadProblem identity_e1() { return QuadProblem(SpsdOperator::dense(2, {1, 0, 0, 1}), {1, 0}, Vector{1, 0}); }

Vector add(const Vector &x, double t, const Vector &v) {
    Vector z = x;
    for (std::size_t i = 0; i < z.size(); ++i) { z[i] += t * v[i]; }
    return z;
}

Vector unit(std::size_t n, std::size_t i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    return e;
}

struct Fixture {
    oracle::Dense q;
    QuadProblem p;
};

Fixture random_fixture(std::size_t n, std::uint64_t seed) {
    auto q = oracle::random_spsd(n, n, 0.05, seed);
    auto p = oracle::problem_with_solution(q, seed + 77);
    return {std::move(q), std::move(p)};
}

Vector random_in_cone(const QuadProblem &p, std::uint64_t seed) {
    Vector x = oracle::random_vector(p.order(), -1, 1, seed);
    if (dot(p.c(), x) <= 0) {
        for (double &v : x) { v = -v; }
    }
    return x;
}

}  // namespace

TEST_CASE("rescale_and_eval examples") {
    const auto p = diag_example();
    const auto out = rescale_and_eval(p, Vector{-1, 0});
    CHECK_FALSE(out.in_cone);
    CHECK(out.s_x == 0.0);
    CHECK(out.r_value == 1.5);
    const auto at_alpha = rescale_and_eval(p, Vector{1, 0.5});
    CHECK(at_alpha.s_x == doctest::Approx(1.0));
    CHECK(at_alpha.r_value == doctest::Approx(0.0));
    const auto at_e1 = rescale_and_eval(p, Vector{1, 0});
    CHECK(at_e1.s_x == 1.0);
    CHECK(at_e1.r_value == 0.5);
    CHECK_THROWS_AS(rescale_and_eval(p, IterateView{{}, 1.0, 0.0}), Error);
}

TEST_CASE("upsilon examples") {
    const auto p = diag_example();
    const auto u = upsilon_pair(p, Vector{1, 0}, Vector{0, 1});
    CHECK(u.x_v == 1.0);
    CHECK(u.v_x == 2.0);
    const auto self = upsilon_pair(p, Vector{0.3, 0.7}, Vector{0.3, 0.7});
    CHECK(self.x_v == 0.0);
    CHECK(self.v_x == 0.0);
    const auto e = upsilon_pair(identity_e1(), Vector{1, 0}, Vector{0, 1});
    CHECK(e.x_v == 0.0);
    CHECK(e.v_x == 1.0);
    const auto cached = upsilon_pair(p, IterateCache::of(p, Vector{1, 0}).view(), 1);
    CHECK(cached.x_v == 1.0);
    CHECK(cached.v_x == 2.0);
}

TEST_CASE("line search examples") {
    const auto p = diag_example();
    const auto ls = line_search_R(p, IterateCache::of(p, Vector{1, 0}).view(), 1);
    CHECK(ls.kind == Case::interior_min);
    CHECK(ls.tau == 0.5);
    CHECK(ls.new_r == doctest::Approx(0.0));

    const auto q = identity_e1();
    const auto flat = line_search_R(q, IterateCache::of(q, Vector{1, 0}).view(), 1);
    CHECK(flat.kind == Case::interior_min);
    CHECK(flat.tau == 0.0);
    CHECK(flat.new_r == 0.0);

    // v = -x is collinear with x, so the collinear case fires first.
    CHECK(line_search_R(p, Vector{1, 0}, Vector{-1, 0}).kind == Case::collinear);

    // Upsilon(v; x) = 1*11 - 4*3 = -1 <= 0: monotone, infimum R(v) = 1.5 - 16/11.
    const auto mono = line_search_R(p, Vector{1, 0}, Vector{3, 1});
    CHECK(mono.kind == Case::monotone);
    CHECK(mono.infimum_sign == 1);
    CHECK(mono.new_r == doctest::Approx(1.5 - 16.0 / 11.0));
    // Grid oracle: R(x + t v) decreases towards R(v) as t grows and never goes below it.
    const oracle::Dense d{2, {1, 0, 0, 2}};
    double prev = oracle::R(d, {1, 1}, 1.5, {1, 0});
    for (double t = 0.5; t <= 1000; t *= 1.5) {
        const double r = oracle::R(d, {1, 1}, 1.5, add({1, 0}, t, {3, 1}));
        CHECK(r <= prev + 1e-15);
        CHECK(r >= mono.new_r - 1e-12);
        prev = r;
    }
    for (double t = -1000; t < -0.2; t += 0.37) {
        CHECK(oracle::R(d, {1, 1}, 1.5, add({1, 0}, t, {3, 1})) >= mono.new_r - 1e-12);
    }

    CHECK_THROWS_AS(line_search_R(p, IterateCache::of(p, Vector{-1, 0}).view(), 1), Error);
}

TEST_CASE("improvement, acceleration and derivative examples") {
    const auto p = diag_example();
    const auto cache = IterateCache::of(p, Vector{1, 0});
    CHECK(improvement_R(p, cache.view(), 1) == doctest::Approx(0.5));
    CHECK(improvement_R(p, cache.view(), 0) == 0.0);
    CHECK(improvement_R(identity_e1(), Vector{1, 0}, Vector{1, 0}) == 0.0);
    const auto at_alpha = IterateCache::of(p, Vector{1, 0.5});
    CHECK(improvement_R(p, at_alpha.view(), 0) == doctest::Approx(0.0));
    CHECK(improvement_R(p, at_alpha.view(), 1) == doctest::Approx(0.0));

    CHECK(acceleration(p, cache.view(), 1) == Extended::finite(1.0));
    const QuadProblem p21(SpsdOperator::dense(2, {2, 1, 1, 2}), {1, 0});
    const auto a = acceleration(p21, Vector{1, 0}, Vector{0, 1});
    REQUIRE(a.is_finite());
    CHECK(a.value() == doctest::Approx(4.0 / 3.0));
    CHECK(acceleration(p, Vector{1, 0.3}, Vector{1, 0.3}).is_pos_inf());

    CHECK(directional_derivative(p, Vector{0.4, -0.2}, Vector{0.4, -0.2}) == Extended::finite(0.0));
    CHECK(directional_derivative(p, Vector{0, 0}, Vector{1, 0.5}).is_neg_inf());
    CHECK(directional_derivative(p, Vector{1, 0}, Vector{0, 1}) == Extended::finite(-2.0));
    CHECK(directional_derivative(p, cache.view(), 1) == Extended::finite(-2.0));
}

TEST_CASE("gradient and Hessian examples") {
    const auto p = diag_example();
    const Vector g0 = grad_R(p, Vector{1, 0.5});
    CHECK(g0[0] == doctest::Approx(0.0));
    CHECK(g0[1] == doctest::Approx(0.0));
    CHECK(grad_R(p, Vector{1, 0}) == Vector{0, -2});
    CHECK_THROWS_AS(grad_R(p, Vector{0, 0}), Error);

    const auto h = hessian_R(p, Vector{1, 0.5});
    CHECK(h(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(h(0, 1) == doctest::Approx(-4.0 / 3.0));
    CHECK(h(1, 0) == h(0, 1));
    CHECK(h(1, 1) == doctest::Approx(8.0 / 3.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(10.0 / 3.0));

    const auto f = random_fixture(70, 5);
    CHECK_THROWS_AS(hessian_R(f.p, random_in_cone(f.p, 1)), Error);
}

TEST_CASE("rescaling invariance and gradient scaling") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto f = random_fixture(8, seed);
        const Vector x = random_in_cone(f.p, seed + 500);
        const double r = eval_R(f.p, x);
        for (double s : {1e-3, 0.5, 2.0, 1e3}) {
            Vector sx = x;
            for (double &v : sx) { v *= s; }
            CHECK(std::abs(eval_R(f.p, sx) - r) <= 1e-12 * std::max(1.0, std::abs(r)) * 10);
        }
        const Vector g = grad_R(f.p, x);
        Vector x2 = x;
        for (double &v : x2) { v *= 2; }
        const Vector g2 = grad_R(f.p, x2);
        double gx = 0;
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(oracle::close(g2[i], g[i] / 2, 1e-10));
            gx += g[i] * x[i];
        }
        CHECK(std::abs(gx) <= 1e-10);
        CHECK(oracle::close(r, oracle::R(f.q, f.p.c(), f.p.const_term(), x), 1e-10));
    }
}

TEST_CASE("line search optimality and improvement identity against grid oracle") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto f = random_fixture(6, seed);
        const Vector x = random_in_cone(f.p, seed + 900);
        const auto cache = IterateCache::of(f.p, x);
        const auto ev = rescale_and_eval(f.p, cache.view());
        for (std::size_t i = 0; i < 6; ++i) {
            const auto ls = line_search_R(f.p, cache.view(), i);
            if (ls.kind != Case::interior_min) { continue; }
            const Vector e = unit(6, i);
            const double r_tau = oracle::R(f.q, f.p.c(), f.p.const_term(), add(x, ls.tau, e));
            CHECK(std::abs(r_tau - ls.new_r) <= 1e-10);
            for (int g = 0; g <= 400; ++g) {
                const double t = ls.tau - 1e3 + 2e3 * g / 400.0;
                CHECK(r_tau <= oracle::R(f.q, f.p.c(), f.p.const_term(), add(x, t, e)) + 1e-12);
            }
            const double ir = improvement_R(f.p, cache.view(), i);
            CHECK(std::abs(ir - (ev.r_value - r_tau)) <= 1e-10 * (1 + ev.r_value));
            // I_R = I_D(s_x x; e_i) * A.
            Vector sx = x;
            for (double &v : sx) { v *= ev.s_x; }
            const double id = improvement_D(f.p, IterateCache::of(f.p, sx).view(), i);
            const auto acc = acceleration(f.p, cache.view(), i);
            REQUIRE(acc.is_finite());
            CHECK(acc.value() >= 1.0);
            CHECK(std::abs(ir - id * acc.value()) <= 1e-10 * (1 + ir));
        }
    }
}

TEST_CASE("sufficient condition for the interior case") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto f = random_fixture(5, seed);
        const Vector x = random_in_cone(f.p, seed + 31);
        const double r = eval_R(f.p, x);
        const auto cache = IterateCache::of(f.p, x);
        for (std::size_t i = 0; i < 5; ++i) {
            Vector e = unit(5, i);
            Vector me = e;
            me[i] = -1.0;
            const double bound = std::min(eval_R(f.p, e), eval_R(f.p, me));
            const auto lam = directional_derivative(f.p, cache.view(), i);
            if (r <= bound && !(lam == Extended::finite(0.0))) { CHECK(upsilon_pair(f.p, cache.view(), i).v_x > 0.0); }
        }
    }
}

TEST_CASE("spanning ray is stationary on span{x, v}") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto f = random_fixture(7, seed);
        const Vector x = random_in_cone(f.p, seed + 3);
        const Vector v = oracle::random_vector(7, -1, 1, seed + 4);
        const auto u = upsilon_pair(f.p, x, v);
        if (u.x_v == 0.0 || u.v_x == 0.0 || acceleration(f.p, x, v).is_pos_inf()) { continue; }
        Vector z(7);
        for (std::size_t i = 0; i < 7; ++i) { z[i] = u.v_x * x[i] + u.x_v * v[i]; }
        if (f.p.op().matvec(z) == Vector(7, 0.0)) { continue; }
        const Vector g = grad_R(f.p, z);
        const double gn = std::sqrt(dot(g, g));
        CHECK(std::abs(dot(g, x)) <= 1e-8 * std::max(gn, 1e-300) * std::sqrt(dot(x, x)) + 1e-12);
        CHECK(std::abs(dot(g, v)) <= 1e-8 * std::max(gn, 1e-300) * std::sqrt(dot(v, v)) + 1e-12);
    }
}

TEST_CASE("quasiconvexity and pseudoconvexity sampling") {
    const auto f = random_fixture(8, 12345);
    CounterRng rng(99);
    std::size_t quasi = 0;
    std::size_t pseudo = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        Vector x(8), u(8);
        for (double &v : x) { v = rng.uniform(-1, 1); }
        for (double &v : u) { v = rng.uniform(-1, 1); }
        const double t = rng.unit();
        Vector w(8);
        for (std::size_t i = 0; i < 8; ++i) { w[i] = (1 - t) * x[i] + t * u[i]; }
        if (eval_R(f.p, w) > std::max(eval_R(f.p, x), eval_R(f.p, u)) + 1e-10) { ++quasi; }
        if (dot(f.p.c(), x) > 0 && dot(f.p.c(), u) > 0) {
            Vector d(8);
            for (std::size_t i = 0; i < 8; ++i) { d[i] = u[i] - x[i]; }
            const auto lam = directional_derivative(f.p, x, d);
            if ((lam.is_finite() && lam.value() >= 0.0) && eval_R(f.p, x) > eval_R(f.p, u) + 1e-10) { ++pseudo; }
        }
    }
    CHECK(quasi == 0);
    CHECK(pseudo == 0);
}
