#pragma once

#include <cstddef>
#include <vector>

#include "hermdense/arith.hpp"

namespace hermdense {

/// Dense row-major matrix over F. Rows of a base-change matrix are the new
/// basis vectors in old coordinates, so Gram matrices transform as U T U^*.
class FMatrix {
public:
    FMatrix() = default;
    FMatrix(std::size_t rows, std::size_t cols, long p);

    static FMatrix identity(std::size_t n, long p);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    long p() const noexcept { return p_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    FScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const FScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    FMatrix conj_transpose() const;
    FMatrix scaled(const FScalar& c) const;
    bool is_hermitian() const;
    bool is_zero() const;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);

    friend FMatrix operator*(const FMatrix& x, const FMatrix& y);
    friend FMatrix operator+(const FMatrix& x, const FMatrix& y);
    friend bool operator==(const FMatrix& x, const FMatrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    long p_ = 0;
    std::vector<FScalar> data_;
};

/// U T U^*
FMatrix congruence(const FMatrix& u, const FMatrix& t);

FMatrix block_diagonal(const FMatrix& x, const FMatrix& y);

FScalar determinant(FMatrix m);

/// Throws Degenerate for singular input.
FMatrix inverse(const FMatrix& m);

/// True iff every entry has valuation >= 0 and det is a unit of O_F.
bool is_unimodular(const FMatrix& u);

/// pi-adic exponents of the elementary divisors of a square matrix over O_F
/// (Smith form by minimal-valuation pivoting), sorted nondecreasing.
/// Zero divisors are reported as kInfiniteValuation.
std::vector<int> elementary_divisor_valuations(FMatrix m);

}  // namespace hermdense
