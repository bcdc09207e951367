#include "oracles.hpp"

#include "relaxcd/error.hpp"
#include "relaxcd/mmio.hpp"

#include <doctest.h>

#include <sstream>

using namespace relaxcd;

namespace {

SpsdOperator parse(const std::string &text) {
    std::istringstream in(text);
    return mmio::read_matrix_market(in);
}

ErrorCode parse_code(const std::string &text) {
    try {
        parse(text);
    } catch (const Error &e) { return e.code(); }
    return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("smallest instance") {
    const auto op = parse("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.5\n");
    CHECK(op.order() == 1);
    CHECK(op.column(0) == Vector{2.5});
    CHECK(op.kind() == SpsdOperator::Kind::sparse_csr);
}

TEST_CASE("symmetric inputs are mirrored") {
    const auto op = parse("%%MatrixMarket matrix coordinate real symmetric\n% comment\n\n2 2 3\n1 1 4\n2 1 3.0\n2 2 5\n");
    CHECK(op.to_dense() == Vector{4, 3, 3, 5});
    const auto *csr = op.as_csr();
    REQUIRE(csr != nullptr);
    CHECK(csr->col_idx == std::vector<std::size_t>{0, 1, 0, 1});
}

TEST_CASE("duplicates are summed and integer fields accepted") {
    const auto op = parse("%%MatrixMarket MATRIX Coordinate integer general\n2 2 4\n1 1 1\n1 1 2\n2 2 +7\n2 2 1\n");
    CHECK(op.diagonal() == Vector{3, 8});
}

TEST_CASE("rejections") {
    CHECK(parse_code("") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix array real general\n1 1\n1\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate real skew-symmetric\n1 1 0\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 1\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n2 2 1\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 abc\n") == ErrorCode::parse_error);
    CHECK(parse_code("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1\n") == ErrorCode::invalid_problem);
    CHECK_THROWS_AS(mmio::read_matrix_market(std::filesystem::path("/nonexistent.mtx")), Error);
}

TEST_CASE("write then read round trip") {
    const auto q = oracle::random_spsd(12, 5, 0.1, 3);
    Vector vals = q.q;
    // Sparsify while keeping symmetry.
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            if ((i + 2 * j) % 3 == 1 && i != j) {
                vals[i * 12 + j] = 0.0;
                vals[j * 12 + i] = 0.0;
            }
        }
    }
    std::vector<std::size_t> row_ptr{0}, cols;
    Vector v;
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            if (vals[i * 12 + j] != 0.0) {
                cols.push_back(j);
                v.push_back(vals[i * 12 + j]);
            }
        }
        row_ptr.push_back(cols.size());
    }
    const auto op = SpsdOperator::sparse_csr(12, row_ptr, cols, v);
    std::ostringstream out;
    mmio::write_matrix_market(out, op);
    CHECK(out.str().rfind("%%MatrixMarket matrix coordinate real general\n", 0) == 0);
    const auto back = parse(out.str());
    const auto a = op.to_dense();
    const auto b = back.to_dense();
    for (std::size_t k = 0; k < a.size(); ++k) { CHECK(std::abs(a[k] - b[k]) <= 1e-15 * std::abs(a[k])); }
}
