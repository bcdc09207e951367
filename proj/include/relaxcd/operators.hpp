#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace relaxcd {

using Vector = std::vector<double>;

/// Dense symmetric matrix, row-major.
struct DenseStorage {
    std::size_t n = 0;
    Vector values;
};

/// CSR with both triangles stored, so row i doubles as column i.
struct CsrStorage {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col_idx;
    Vector values;
};

/// Q = X X^T + gamma I + beta 1 1^T with X stored row-major (n x m).
struct GramPlusStorage {
    std::size_t n = 0;
    std::size_t m = 0;
    Vector factor;
    double gamma = 0.0;
    double beta = 0.0;
};

/// Symmetric positive-semidefinite matrix in one of several storage forms.
/// Immutable once built; every accessor is const and thread-safe.
class SpsdOperator {
public:
    enum class Kind { dense, sparse_csr, gram_plus };

    /// Takes a row-major n x n array. Throws invalid_problem unless exactly symmetric.
    static SpsdOperator dense(std::size_t n, Vector values);

    /// Full-pattern CSR. Column indices are sorted per row; throws unless the
    /// pattern and values are exactly symmetric.
    static SpsdOperator sparse_csr(std::size_t n, std::vector<std::size_t> row_ptr,
                                   std::vector<std::size_t> col_idx, Vector values);

    static SpsdOperator gram_plus(std::size_t n, std::size_t m, Vector factor,
                                  double gamma = 0.0, double beta = 0.0);

    [[nodiscard]] Kind kind() const noexcept;
    [[nodiscard]] std::size_t order() const noexcept { return n_; }

    /// Q e_i.
    [[nodiscard]] Vector column(std::size_t i) const;
    void column(std::size_t i, std::span<double> out) const;

    /// y += scale * Q e_i, touching only the structural nonzeros of column i.
    void add_column(std::size_t i, double scale, std::span<double> y) const;

    [[nodiscard]] Vector matvec(std::span<const double> x) const;
    void matvec(std::span<const double> x, std::span<double> out) const;

    [[nodiscard]] const Vector &diagonal() const noexcept { return diag_; }

    /// max_ij |Q_ij|.
    [[nodiscard]] double max_abs() const;

    /// Row-major dense copy. Throws size_limit when n*n doubles exceed budget_bytes.
    [[nodiscard]] Vector to_dense(std::uint64_t budget_bytes = default_memory_budget) const;

    /// Checks lambda_min >= -1e-8 * max_abs() by dense eigendecomposition.
    /// Only runs for n <= 512; larger operators are trusted.
    void validate_psd() const;

    [[nodiscard]] const DenseStorage *as_dense() const noexcept;
    [[nodiscard]] const CsrStorage *as_csr() const noexcept;
    [[nodiscard]] const GramPlusStorage *as_gram_plus() const noexcept;

    static constexpr std::uint64_t default_memory_budget = 2ull << 30;
    static constexpr std::size_t psd_validation_limit = 512;

private:
    using Storage = std::variant<DenseStorage, CsrStorage, GramPlusStorage>;

    explicit SpsdOperator(Storage storage);

    Storage storage_;
    std::size_t n_ = 0;
    Vector diag_;
};

/// Q + gamma I in the same storage form (structural diagonal entries are
/// inserted for CSR when missing).
SpsdOperator with_diagonal_shift(const SpsdOperator &op, double gamma);

/// Densifies a GramPlus operator when its n*n values fit in budget_bytes;
/// any other operator (or one that does not fit) is returned unchanged.
SpsdOperator materialize_within_budget(SpsdOperator op,
                                       std::uint64_t budget_bytes = SpsdOperator::default_memory_budget);

}  // namespace relaxcd
