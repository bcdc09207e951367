#include "relaxcd/generators.hpp"

#include "relaxcd/error.hpp"
#include "relaxcd/mmio.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace relaxcd {

namespace {

CounterRng stream(std::uint64_t seed, Stream s) {
    return CounterRng(CounterRng::derive(seed, static_cast<std::uint64_t>(s)));
}

Vector sample(CounterRng &rng, std::size_t count, UniformRange r) {
    Vector out(count);
    for (double &v : out) { v = rng.uniform(r.lo, r.hi); }
    return out;
}

void require_range(UniformRange r, const char *name) {
    require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo < r.hi, ErrorCode::invalid_argument,
            (std::string(name) + " range must satisfy lo < hi").c_str());
}

bool all_zero(const Vector &v) {
    return std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; });
}

SpsdOperator gram_operator(const ExampleConfig &cfg, double gamma) {
    auto rng = stream(cfg.seed, Stream::factor);
    return SpsdOperator::gram_plus(cfg.n, cfg.m, sample(rng, cfg.n * cfg.m, cfg.x_range), gamma, 0.0);
}

// Ex3 solution: exactly ceil(sparsity n) zeros on a uniformly drawn support.
Vector sparse_alpha(const ExampleConfig &cfg, std::uint64_t seed) {
    const auto zeros = static_cast<std::size_t>(std::ceil(cfg.sparsity * static_cast<double>(cfg.n) - 1e-9));
    std::vector<std::size_t> perm(cfg.n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto pick = stream(seed, Stream::support);
    for (std::size_t i = 0; i + 1 < cfg.n; ++i) {
        const std::size_t j = i + pick.below(cfg.n - i);
        std::swap(perm[i], perm[j]);
    }
    auto values = stream(seed, Stream::alpha);
    Vector alpha(cfg.n, 0.0);
    for (std::size_t p = zeros; p < cfg.n; ++p) { alpha[perm[p]] = values.uniform(cfg.alpha_range.lo, cfg.alpha_range.hi); }
    return alpha;
}

QuadProblem with_solution(SpsdOperator op, Vector alpha, std::uint64_t budget) {
    Vector c = op.matvec(alpha);
    return QuadProblem(materialize_within_budget(std::move(op), budget), std::move(c), std::move(alpha));
}

QuadProblem generate_ex1(const ExampleConfig &cfg) {
    auto rng = stream(cfg.seed, Stream::alpha);
    return with_solution(gram_operator(cfg, 0.0), sample(rng, cfg.n, cfg.alpha_range), cfg.memory_budget);
}

QuadProblem generate_ex2(const ExampleConfig &cfg) {
    auto rng = stream(cfg.seed, Stream::alpha);
    const Vector alpha = sample(rng, cfg.n, cfg.alpha_range);
    Vector c = gram_operator(cfg, 0.0).matvec(alpha);
    return QuadProblem(materialize_within_budget(gram_operator(cfg, cfg.gamma), cfg.memory_budget), std::move(c));
}

QuadProblem generate_ex3(const ExampleConfig &cfg) {
    SpsdOperator op = gram_operator(cfg, 0.0);
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        Vector alpha = sparse_alpha(cfg, cfg.seed + attempt);
        if (all_zero(alpha) || all_zero(op.matvec(alpha))) { continue; }
        return with_solution(std::move(op), std::move(alpha), cfg.memory_budget);
    }
    fail(ErrorCode::invalid_problem, "sparse solution stayed zero after 64 substreams");
}

QuadProblem generate_ex4(const ExampleConfig &cfg) {
    auto rng = stream(cfg.seed, Stream::c);
    Vector c = sample(rng, cfg.n, cfg.c_range);
    return QuadProblem(materialize_within_budget(gram_operator(cfg, 0.0), cfg.memory_budget), std::move(c));
}

QuadProblem generate_ex5(const ExampleConfig &cfg) {
    const std::size_t n = cfg.n;
    const std::size_t d = cfg.point_dim;
    auto prng = stream(cfg.seed, Stream::points);
    const Vector points = sample(prng, n * d, {0.0, 1.0});

    Vector q(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double dist2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = points[i * d + k] - points[j * d + k];
                dist2 += diff * diff;
            }
            const double v = std::exp(-cfg.zeta * dist2) + cfg.beta + (i == j ? cfg.gamma : 0.0);
            q[i * n + j] = v;
            q[j * n + i] = v;
        }
    }
    auto crng = stream(cfg.seed, Stream::c);
    Vector c = sample(crng, n, cfg.c_range);
    for (double &e : c) { e += cfg.delta; }
    return QuadProblem(SpsdOperator::dense(n, std::move(q)), std::move(c));
}

QuadProblem generate_ex6(const ExampleConfig &cfg) {
    SpsdOperator op = with_diagonal_shift(mmio::read_matrix_market(std::filesystem::path(cfg.path)), cfg.gamma);
    auto rng = stream(cfg.seed, Stream::c);
    Vector c = sample(rng, op.order(), cfg.c_range);
    return QuadProblem(std::move(op), std::move(c));
}

}  // namespace

const char *family_label(Family f) noexcept {
    switch (f) {
        case Family::ex1: return "Ex1";
        case Family::ex2: return "Ex2";
        case Family::ex3: return "Ex3";
        case Family::ex4: return "Ex4";
        case Family::ex5: return "Ex5";
        case Family::ex6: return "Ex6";
    }
    return "?";
}

Family parse_family(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (s.rfind("ex", 0) == 0) { s.erase(0, 2); }
    if (s.size() == 1 && s[0] >= '1' && s[0] <= '6') { return static_cast<Family>(s[0] - '1'); }
    fail(ErrorCode::invalid_argument, "unknown example family '" + std::string(text) + "'");
}

ExampleConfig ExampleConfig::defaults(Family family) {
    ExampleConfig cfg;
    cfg.family = family;
    switch (family) {
        case Family::ex1: break;
        case Family::ex2: cfg.gamma = 0.5; break;
        case Family::ex3:
            cfg.m = 650;
            cfg.sparsity = 0.5;
            break;
        case Family::ex4:
            cfg.m = 650;
            cfg.x_range = {-2.0, 3.0};
            cfg.c_range = {3.0, 5.0};
            break;
        case Family::ex5:
            cfg.m = 0;
            cfg.gamma = 1.0;
            cfg.c_range = {0.0, 1.0};
            break;
        case Family::ex6:
            cfg.n = 0;
            cfg.m = 0;
            cfg.gamma = 1.0;
            cfg.c_range = {-1.0, 1.0};
            break;
    }
    return cfg;
}

void ExampleConfig::validate() const {
    const auto check = [](bool ok, const char *what) { require(ok, ErrorCode::invalid_argument, what); };
    if (family == Family::ex6) {
        check(!path.empty(), "Ex6 requires a matrix file path");
        check(std::isfinite(gamma) && gamma >= 0.0, "gamma must be finite and >= 0");
        require_range(c_range, "c");
        return;
    }
    check(n >= 1, "N must be positive");
    switch (family) {
        case Family::ex1:
        case Family::ex2:
        case Family::ex3:
        case Family::ex4:
            check(m >= 1, "m must be positive");
            require_range(x_range, "X");
            break;
        default: break;
    }
    if (family == Family::ex1 || family == Family::ex2 || family == Family::ex3) { require_range(alpha_range, "alpha"); }
    if (family == Family::ex4 || family == Family::ex5) { require_range(c_range, "c"); }
    if (family == Family::ex2) { check(std::isfinite(gamma) && gamma > 0.0, "Ex2 requires gamma > 0"); }
    if (family == Family::ex3) {
        check(sparsity >= 0.0 && sparsity < 1.0, "sparsity must lie in [0, 1)");
        check(std::ceil(sparsity * static_cast<double>(n) - 1e-9) < static_cast<double>(n),
              "sparsity leaves no nonzero entry");
    }
    if (family == Family::ex5) {
        check(point_dim >= 1, "point dimension must be positive");
        check(std::isfinite(zeta) && zeta > 0.0, "zeta must be positive");
        check(std::isfinite(gamma) && gamma >= 0.0, "gamma must be finite and >= 0");
        check(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
        check(std::isfinite(delta), "delta must be finite");
    }
}

QuadProblem generate(const ExampleConfig &config) {
    config.validate();
    switch (config.family) {
        case Family::ex1: return generate_ex1(config);
        case Family::ex2: return generate_ex2(config);
        case Family::ex3: return generate_ex3(config);
        case Family::ex4: return generate_ex4(config);
        case Family::ex5: return generate_ex5(config);
        case Family::ex6: return generate_ex6(config);
    }
    fail(ErrorCode::invalid_argument, "unknown family");
}

std::vector<AInfinity> batch_a_infinity(const ExampleConfig &config, std::size_t count, unsigned threads) {
    require(count >= 1, ErrorCode::invalid_argument, "count must be >= 1");
    config.validate();
    if (threads == 0) { threads = std::max(1u, std::thread::hardware_concurrency()); }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

    std::vector<AInfinity> out(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (std::size_t j = next++; j < count; j = next++) {
            try {
                ExampleConfig cfg = config;
                cfg.seed = config.seed + j;
                cfg.memory_budget = 0;
                out[j] = a_infinity(generate(cfg));
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!error) { error = std::current_exception(); }
                next = count;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) { pool.emplace_back(worker); }
        for (auto &t : pool) { t.join(); }
    }
    if (error) { std::rethrow_exception(error); }
    return out;
}

}  // namespace relaxcd
