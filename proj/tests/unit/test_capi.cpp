#include "relaxcd/relaxcd.h"

#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <vector>

TEST_CASE("dense problem round trip through the C interface") {
    const double q[] = {1, 0, 0, 2};
    const double c[] = {1, 1};
    const double alpha[] = {1, 0.5};
    rcd_problem *p = nullptr;
    REQUIRE(rcd_problem_from_dense(2, q, c, alpha, &p) == RCD_OK);
    CHECK(rcd_problem_order(p) == 2);
    CHECK(rcd_problem_const_term(p) == 1.5);
    double d = 0;
    const double x[] = {1, 0};
    CHECK(rcd_problem_eval_d(p, x, &d) == RCD_OK);
    CHECK(d == doctest::Approx(0.5));

    rcd_rate_constants rc{};
    REQUIRE(rcd_rate_constants_of(p, &rc) == RCD_OK);
    CHECK(rc.iota == doctest::Approx(0.25));
    CHECK(rc.iota_tilde == doctest::Approx(0.5));
    CHECK(rc.a_inf.tag == RCD_FINITE);
    CHECK(rc.a_inf.value == doctest::Approx(1.5));
    CHECK(rc.a_inf_up.value == doctest::Approx(3.0));

    rcd_run_options opts;
    rcd_run_options_defaults(&opts);
    opts.max_column_calls = 100;
    rcd_run *run = nullptr;
    REQUIRE(rcd_solve(p, RCD_METHOD_H_R, &opts, &run) == RCD_OK);
    CHECK(rcd_run_rows(run) == 3);
    rcd_trace_row row{};
    REQUIRE(rcd_run_row(run, 2, &row) == RCD_OK);
    CHECK(row.k == 2);
    CHECK(row.coord == 1);
    CHECK(row.has_accel == 1);
    CHECK(row.accel.value == doctest::Approx(1.0));
    CHECK(rcd_run_objective(run, 0) == 1.5);
    CHECK(rcd_run_termination(run) == RCD_TERM_TOLERANCE);
    CHECK(std::strcmp(rcd_termination_label(RCD_TERM_TOLERANCE), "tolerance") == 0);
    std::uint64_t steps = 0, iters = 0, calls = 0;
    rcd_run_counts(run, &steps, &iters, &calls);
    CHECK(calls == steps + 2 * iters);
    double sol[2];
    CHECK(rcd_run_solution(run, sol, 2) == RCD_OK);
    CHECK(rcd_run_solution(run, sol, 3) == RCD_CONTRACT_VIOLATION);
    CHECK(rcd_run_row(run, 99, &row) == RCD_CONTRACT_VIOLATION);
    CHECK(std::strlen(rcd_last_error()) > 0);

    rcd_rate_check check{};
    CHECK(rcd_asymptotic_rate_check(run, &rc, 0.1, &check) == RCD_OK);
    CHECK(check.found == 1);
    CHECK(check.k_epsilon == 1);
    rcd_run_free(run);

    REQUIRE(rcd_solve(p, RCD_METHOD_CG_D, &opts, &run) == RCD_OK);
    rcd_run_counts(run, &steps, &iters, &calls);
    CHECK(calls == 2 * iters);
    CHECK(rcd_asymptotic_rate_check(run, &rc, 0.1, &check) == RCD_INVALID_ARGUMENT);
    rcd_run_free(run);
    rcd_problem_free(p);
}

TEST_CASE("errors are reported as status codes") {
    const double q[] = {1, 2, 3, 4};
    const double c[] = {1, 1};
    rcd_problem *p = nullptr;
    CHECK(rcd_problem_from_dense(2, q, c, nullptr, &p) == RCD_INVALID_PROBLEM);
    CHECK(p == nullptr);
    CHECK(std::strstr(rcd_last_error(), "symmetric") != nullptr);
    CHECK(rcd_problem_from_dense(2, nullptr, c, nullptr, &p) == RCD_INVALID_ARGUMENT);
    rcd_method m{};
    CHECK(rcd_method_parse("BI-R", &m) == RCD_OK);
    CHECK(m == RCD_METHOD_BI_R);
    CHECK(rcd_method_parse("nope", &m) == RCD_INVALID_ARGUMENT);
    CHECK(std::strcmp(rcd_method_label(RCD_METHOD_SR_D), "SR-D") == 0);
    CHECK(rcd_method_is_relaxed(RCD_METHOD_H_R) == 1);
    rcd_example_config cfg{};
    CHECK(rcd_example_defaults(7, &cfg) == RCD_INVALID_ARGUMENT);
}

TEST_CASE("generation and batch through the C interface") {
    rcd_example_config cfg{};
    REQUIRE(rcd_example_defaults(1, &cfg) == RCD_OK);
    CHECK(cfg.n == 500);
    CHECK(cfg.m == 250);
    cfg.n = 30;
    cfg.m = 15;
    cfg.seed = 11;
    rcd_problem *p = nullptr;
    REQUIRE(rcd_generate(&cfg, &p) == RCD_OK);
    CHECK(rcd_problem_order(p) == 30);
    rcd_problem_free(p);

    std::vector<rcd_extended> a(8), b(8), a2(8), b2(8);
    REQUIRE(rcd_batch_a_infinity(&cfg, 8, 2, a.data(), b.data()) == RCD_OK);
    REQUIRE(rcd_batch_a_infinity(&cfg, 8, 3, a2.data(), b2.data()) == RCD_OK);
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(a[j].value == a2[j].value);
        CHECK(b[j].value == b2[j].value);
        CHECK(b[j].value >= a[j].value);
    }

    REQUIRE(rcd_example_defaults(6, &cfg) == RCD_OK);
    cfg.path = "/nonexistent/file.mtx";
    CHECK(rcd_generate(&cfg, &p) == RCD_IO_ERROR);
}
