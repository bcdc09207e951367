#include "relaxcd/mmio.hpp"

#include "relaxcd/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

namespace relaxcd::mmio {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string &what) {
    fail(ErrorCode::parse_error, "matrix market line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(std::string_view token, std::size_t line, const char *what) {
    if (token.size() > 1 && token.front() == '+') { token.remove_prefix(1); }
    T value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        parse_fail(line, std::string("non-numeric ") + what + " '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) { ++i; }
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) { ++j; }
        if (j > i) { out.push_back(s.substr(i, j - i)); }
        i = j;
    }
    return out;
}

bool is_blank(const std::string &s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); });
}

}  // namespace

MatrixMarketHeader parse_header(const std::string &banner) {
    const auto tokens = split(banner);
    if (tokens.size() != 5 || lower(std::string(tokens[0])) != "%%matrixmarket") {
        parse_fail(1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
    }
    MatrixMarketHeader h{lower(std::string(tokens[1])), lower(std::string(tokens[2])), lower(std::string(tokens[3])),
                         lower(std::string(tokens[4]))};
    if (h.object != "matrix") { parse_fail(1, "unsupported object '" + h.object + "'"); }
    if (h.format != "coordinate") { parse_fail(1, "unsupported format '" + h.format + "' (only coordinate)"); }
    if (h.field != "real" && h.field != "integer") {
        parse_fail(1, "unsupported field '" + h.field + "' (only real or integer)");
    }
    if (h.symmetry != "general" && h.symmetry != "symmetric") {
        parse_fail(1, "unsupported symmetry '" + h.symmetry + "' (only general or symmetric)");
    }
    return h;
}

SpsdOperator read_matrix_market(std::istream &in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) { parse_fail(1, "empty input"); }
    const MatrixMarketHeader header = parse_header(line);
    const bool symmetric = header.symmetry == "symmetric";

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t declared = 0;
    bool have_size = false;
    std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
    std::size_t seen = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%' || is_blank(line)) { continue; }
        const auto tokens = split(line);
        if (!have_size) {
            if (tokens.size() != 3) { parse_fail(line_no, "expected 'rows cols entries'"); }
            rows = parse_number<std::size_t>(tokens[0], line_no, "row count");
            cols = parse_number<std::size_t>(tokens[1], line_no, "column count");
            declared = parse_number<std::size_t>(tokens[2], line_no, "entry count");
            if (rows != cols) {
                parse_fail(line_no, "matrix is not square (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");
            }
            if (rows == 0) { parse_fail(line_no, "matrix has zero order"); }
            entries.reserve(symmetric ? 2 * declared : declared);
            have_size = true;
            continue;
        }
        if (tokens.size() != 3) { parse_fail(line_no, "expected 'row col value'"); }
        const auto i = parse_number<std::size_t>(tokens[0], line_no, "row index");
        const auto j = parse_number<std::size_t>(tokens[1], line_no, "column index");
        const auto v = parse_number<double>(tokens[2], line_no, "value");
        if (i < 1 || i > rows || j < 1 || j > cols) {
            parse_fail(line_no, "index (" + std::to_string(i) + "," + std::to_string(j) + ") out of bounds");
        }
        if (++seen > declared) { parse_fail(line_no, "more entries than declared (" + std::to_string(declared) + ")"); }
        entries.emplace_back(i - 1, j - 1, v);
        if (symmetric && i != j) { entries.emplace_back(j - 1, i - 1, v); }
    }
    if (!have_size) { parse_fail(line_no, "missing size line"); }
    if (seen != declared) {
        parse_fail(line_no, "expected " + std::to_string(declared) + " entries, found " + std::to_string(seen));
    }

    std::sort(entries.begin(), entries.end(), [](const auto &a, const auto &b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::size_t> row_ptr(rows + 1, 0);
    std::vector<std::size_t> col_idx;
    Vector values;
    col_idx.reserve(entries.size());
    values.reserve(entries.size());
    for (std::size_t p = 0; p < entries.size(); ++p) {
        const auto [i, j, v] = entries[p];
        if (p > 0 && std::get<0>(entries[p - 1]) == i && std::get<1>(entries[p - 1]) == j) {
            values.back() += v;
            continue;
        }
        col_idx.push_back(j);
        values.push_back(v);
        ++row_ptr[i + 1];
    }
    for (std::size_t i = 0; i < rows; ++i) { row_ptr[i + 1] += row_ptr[i]; }
    return SpsdOperator::sparse_csr(rows, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SpsdOperator read_matrix_market(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) { fail(ErrorCode::io_error, "cannot open '" + path.string() + "'"); }
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream &out, const SpsdOperator &op) {
    const std::size_t n = op.order();
    std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
    if (const auto *s = op.as_csr()) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t p = s->row_ptr[i]; p < s->row_ptr[i + 1]; ++p) {
                entries.emplace_back(i, s->col_idx[p], s->values[p]);
            }
        }
    } else {
        const Vector q = op.to_dense();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (q[i * n + j] != 0.0) { entries.emplace_back(i, j, q[i * n + j]); }
            }
        }
    }
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << n << ' ' << n << ' ' << entries.size() << '\n';
    char buf[64];
    for (const auto &[i, j, v] : entries) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << (i + 1) << ' ' << (j + 1) << ' ' << buf << '\n';
    }
    if (!out) { fail(ErrorCode::io_error, "failed writing matrix market output"); }
}

void write_matrix_market(const std::filesystem::path &path, const SpsdOperator &op) {
    std::ofstream out(path);
    if (!out) { fail(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing"); }
    write_matrix_market(out, op);
}

}  // namespace relaxcd::mmio
