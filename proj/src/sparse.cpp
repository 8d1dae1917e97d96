#include "chimhd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chimhd {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
        row_ptr_.back() != values_.size()) {
        throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] >= cols_) throw std::invalid_argument("SparseMatrix: column out of range");
            if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
                throw std::invalid_argument("SparseMatrix: unsorted or duplicate column in row " +
                                            std::to_string(r));
            }
        }
    }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<std::size_t> ptr(n + 1), idx(n);
    std::vector<double> val(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        ptr[i] = i;
        idx[i] = i;
    }
    ptr[n] = n;
    return {n, n, std::move(ptr), std::move(idx), std::move(val)};
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_) {
        throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
        y[r] = acc;
    }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
    Vector y(rows_);
    multiply(x, y);
    return y;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Vector SparseMatrix::diagonal() const {
    Vector d(std::min(rows_, cols_), 0.0);
    for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(r, r);
    return d;
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<std::size_t> ptr(cols_ + 1, 0);
    for (std::size_t c : col_idx_) ++ptr[c + 1];
    for (std::size_t c = 0; c < cols_; ++c) ptr[c + 1] += ptr[c];
    std::vector<std::size_t> idx(values_.size());
    std::vector<double> val(values_.size());
    std::vector<std::size_t> fill(ptr.begin(), ptr.end() - 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            std::size_t dst = fill[col_idx_[k]]++;
            idx[dst] = r;
            val[dst] = values_[k];
        }
    }
    return {cols_, rows_, std::move(ptr), std::move(idx), std::move(val)};
}

SparseBuilder::SparseBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

void SparseBuilder::add(std::size_t r, std::size_t c, double v) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseBuilder::add: index out of range");
    entries_.push_back({r, c, v});
}

void SparseBuilder::add_block(const SparseMatrix& m, std::size_t row_offset, std::size_t col_offset,
                              double scale) {
    const auto& ptr = m.row_ptr();
    const auto& idx = m.col_idx();
    const auto& val = m.values();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t k = ptr[r]; k < ptr[r + 1]; ++k) add(r + row_offset, idx[k] + col_offset, scale * val[k]);
    }
}

SparseMatrix SparseBuilder::build() const {
    // Counting sort by row keeps insertion order, so duplicates are summed
    // in the order they were added.
    std::vector<std::size_t> start(rows_ + 1, 0);
    for (const Entry& e : entries_) ++start[e.r + 1];
    for (std::size_t r = 0; r < rows_; ++r) start[r + 1] += start[r];
    std::vector<Entry> sorted(entries_.size());
    {
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (const Entry& e : entries_) sorted[fill[e.r]++] = e;
    }
    std::vector<std::size_t> ptr(rows_ + 1, 0);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    idx.reserve(sorted.size());
    val.reserve(sorted.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        const auto first = sorted.begin() + static_cast<std::ptrdiff_t>(start[r]);
        const auto last = sorted.begin() + static_cast<std::ptrdiff_t>(start[r + 1]);
        // Rows are short: a stable insertion sort by column.
        for (auto it = first + (first != last ? 1 : 0); it < last; ++it) {
            const Entry e = *it;
            auto hole = it;
            for (; hole != first && (hole - 1)->c > e.c; --hole) *hole = *(hole - 1);
            *hole = e;
        }
        for (auto it = first; it != last;) {
            double sum = 0.0;
            const std::size_t c = it->c;
            for (; it != last && it->c == c; ++it) sum += it->v;
            if (sum != 0.0) {
                idx.push_back(c);
                val.push_back(sum);
            }
        }
        ptr[r + 1] = idx.size();
    }
    return {rows_, cols_, std::move(ptr), std::move(idx), std::move(val)};
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace chimhd
