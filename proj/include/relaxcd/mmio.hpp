#pragma once

#include "relaxcd/operators.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace relaxcd::mmio {

/// Banner of a Matrix Market file. Only `matrix coordinate {real|integer}
/// {general|symmetric}` is accepted.
struct MatrixMarketHeader {
    std::string object;
    std::string format;
    std::string field;
    std::string symmetry;
};

MatrixMarketHeader parse_header(const std::string &banner);

/// Reads a square coordinate-format matrix into full-pattern CSR storage.
/// Symmetric files are mirrored, duplicate entries are summed and `%`
/// comment lines are skipped. Errors raise relaxcd::Error with parse_error.
SpsdOperator read_matrix_market(std::istream &in);
SpsdOperator read_matrix_market(const std::filesystem::path &path);

/// Writes `%%MatrixMarket matrix coordinate real general` with every stored
/// nonzero at 17 significant digits.
void write_matrix_market(std::ostream &out, const SpsdOperator &op);
void write_matrix_market(const std::filesystem::path &path, const SpsdOperator &op);

}  // namespace relaxcd::mmio
