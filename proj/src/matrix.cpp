#include "hermdense/matrix.hpp"

#include <algorithm>

namespace hermdense {

FMatrix::FMatrix(std::size_t rows, std::size_t cols, long p)
    : rows_(rows), cols_(cols), p_(p), data_(rows * cols, FScalar(0, 0, p)) {}

FMatrix FMatrix::identity(std::size_t n, long p) {
    FMatrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FScalar::rational(1, p);
    return m;
}

FMatrix FMatrix::conj_transpose() const {
    FMatrix out(cols_, rows_, p_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).conj();
    return out;
}

FMatrix FMatrix::scaled(const FScalar& c) const {
    FMatrix out = *this;
    for (auto& x : out.data_) x *= c;
    return out;
}

bool FMatrix::is_hermitian() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (!((*this)(i, j) == (*this)(j, i).conj())) return false;
    return true;
}

bool FMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const FScalar& x) { return x.is_zero(); });
}

void FMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void FMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

FMatrix operator*(const FMatrix& x, const FMatrix& y) {
    if (x.cols_ != y.rows_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
    FMatrix out(x.rows_, y.cols_, x.p_ != 0 ? x.p_ : y.p_);
    for (std::size_t i = 0; i < x.rows_; ++i)
        for (std::size_t k = 0; k < x.cols_; ++k) {
            const FScalar& xik = x(i, k);
            if (xik.is_zero()) continue;
            for (std::size_t j = 0; j < y.cols_; ++j) out(i, j) += xik * y(k, j);
        }
    return out;
}

FMatrix operator+(const FMatrix& x, const FMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
        throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
    FMatrix out = x;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += y.data_[k];
    return out;
}

FMatrix congruence(const FMatrix& u, const FMatrix& t) { return u * t * u.conj_transpose(); }

FMatrix block_diagonal(const FMatrix& x, const FMatrix& y) {
    FMatrix out(x.rows() + y.rows(), x.cols() + y.cols(), x.p() != 0 ? x.p() : y.p());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) out(x.rows() + i, x.cols() + j) = y(i, j);
    return out;
}

FScalar determinant(FMatrix m) {
    if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
    const std::size_t n = m.rows();
    FScalar det = FScalar::rational(1, m.p());
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c).is_zero()) ++piv;
        if (piv == n) return FScalar(0, 0, m.p());
        if (piv != c) {
            m.swap_rows(piv, c);
            det = -det;
        }
        det *= m(c, c);
        FScalar inv = m(c, c).inverse();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m(r, c).is_zero()) continue;
            FScalar f = m(r, c) * inv;
            for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
        }
    }
    return det;
}

FMatrix inverse(const FMatrix& m) {
    if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "inverse of non-square matrix");
    const std::size_t n = m.rows();
    FMatrix a = m;
    FMatrix inv = FMatrix::identity(n, m.p());
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a(piv, c).is_zero()) ++piv;
        if (piv == n) throw Error(ErrorKind::Degenerate, "singular matrix");
        a.swap_rows(piv, c);
        inv.swap_rows(piv, c);
        FScalar s = a(c, c).inverse();
        for (std::size_t k = 0; k < n; ++k) {
            a(c, k) *= s;
            inv(c, k) *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c).is_zero()) continue;
            FScalar f = a(r, c);
            for (std::size_t k = 0; k < n; ++k) {
                a(r, k) -= f * a(c, k);
                inv(r, k) -= f * inv(c, k);
            }
        }
    }
    return inv;
}

bool is_unimodular(const FMatrix& u) {
    if (!u.is_square()) return false;
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < u.cols(); ++j)
            if (valuation(u(i, j)) < 0) return false;
    return valuation(determinant(u)) == 0;
}

std::vector<int> elementary_divisor_valuations(FMatrix m) {
    if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "Smith form of non-square matrix");
    const std::size_t n = m.rows();
    std::vector<int> out;
    for (std::size_t c = 0; c < n; ++c) {
        int best = kInfiniteValuation;
        std::size_t bi = c, bj = c;
        for (std::size_t i = c; i < n; ++i)
            for (std::size_t j = c; j < n; ++j) {
                int v = valuation(m(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best == kInfiniteValuation) {
            out.insert(out.end(), n - c, kInfiniteValuation);
            break;
        }
        m.swap_rows(bi, c);
        m.swap_cols(bj, c);
        out.push_back(best);
        FScalar inv = m(c, c).inverse();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m(r, c).is_zero()) continue;
            FScalar f = m(r, c) * inv;
            for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
        }
        for (std::size_t k = c + 1; k < n; ++k) {
            if (m(c, k).is_zero()) continue;
            FScalar f = inv * m(c, k);
            for (std::size_t r = c; r < n; ++r) m(r, k) -= m(r, c) * f;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hermdense
