#pragma once

#include "liouville/rational.hpp"

#include <cstddef>
#include <vector>

namespace liouville {

/// Dense row-major matrix over exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix from_columns(std::size_t rows,
                                       const std::vector<std::vector<Rational>>& columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Rational> column(std::size_t c) const;
    bool is_zero() const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

struct RowEchelon {
    RationalMatrix reduced;            // reduced row echelon form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

RowEchelon row_reduce(RationalMatrix m);
std::size_t rank(const RationalMatrix& m);

/// Basis of {x : m x = 0}; one vector per free column, in column order.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m);

/// Columns [a | b] side by side; both must have the same row count.
RationalMatrix hconcat(const RationalMatrix& a, const RationalMatrix& b);
/// Rows of a stacked over rows of b; both must have the same column count.
RationalMatrix vconcat(const RationalMatrix& a, const RationalMatrix& b);

/// True when v lies in the column space of m (augmented-rank test).
bool in_column_space(const RationalMatrix& m, const std::vector<Rational>& v);

} // namespace liouville
