/// @file sparse.hpp
/// @brief Compressed-row sparse matrices and a triplet builder.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chimhd {

using Vector = std::vector<double>;

/// Row-compressed matrix. Column indices are sorted and unique within a row.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                 std::vector<std::size_t> col_idx, std::vector<double> values);

    static SparseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nonzeros() const { return values_.size(); }

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    /// y = A x. Throws std::invalid_argument on size mismatch.
    void multiply(std::span<const double> x, std::span<double> y) const;
    Vector operator*(std::span<const double> x) const;

    double at(std::size_t r, std::size_t c) const;
    Vector diagonal() const;
    SparseMatrix transpose() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

/// Accumulates (row, col, value) entries; duplicates are summed on build().
class SparseBuilder {
public:
    SparseBuilder(std::size_t rows, std::size_t cols);

    void add(std::size_t r, std::size_t c, double v);
    /// Adds every entry of `m` shifted by (row_offset, col_offset), scaled.
    void add_block(const SparseMatrix& m, std::size_t row_offset, std::size_t col_offset,
                   double scale = 1.0);
    SparseMatrix build() const;

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    struct Entry {
        std::size_t r;
        std::size_t c;
        double v;
    };
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Entry> entries_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace chimhd
