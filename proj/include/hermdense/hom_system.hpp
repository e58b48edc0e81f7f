#pragma once

// The congruence conditions X T_M X^* = T_L written as quadratic forms over
// Z/p^d in the integer coordinates of X. Shared by the counting kernels.

#include <cstdint>
#include <vector>

#include "hermdense/lattice.hpp"

namespace hermdense {

/// Arithmetic tables for Z/p^d.
class ModRing {
public:
    ModRing(long p, int d);

    long p() const noexcept { return p_; }
    int d() const noexcept { return d_; }
    std::int64_t modulus() const noexcept { return mod_; }

    std::int64_t add(std::int64_t x, std::int64_t y) const {
        std::int64_t s = x + y;
        return s >= mod_ ? s - mod_ : s;
    }
    std::int64_t sub(std::int64_t x, std::int64_t y) const { return x >= y ? x - y : x + mod_ - y; }
    std::int64_t mul(std::int64_t x, std::int64_t y) const { return x * y % mod_; }
    std::int64_t neg(std::int64_t x) const { return x == 0 ? 0 : mod_ - x; }

    /// p-adic valuation of a residue, d for zero.
    int val(std::int64_t x) const { return val_[static_cast<std::size_t>(x)]; }
    /// Inverse of the unit part x / p^val(x), modulo p^d.
    std::int64_t unit_inverse(std::int64_t x) const { return unit_inv_[static_cast<std::size_t>(x)]; }
    /// Gauss-sum class of a: 2v for a = p^v * square, 2v + 1 for p^v * non-square,
    /// 2d for zero.
    int square_class(std::int64_t x) const { return class_[static_cast<std::size_t>(x)]; }
    int num_classes() const noexcept { return 2 * d_ + 1; }
    /// Representative residue of a square class.
    std::int64_t class_representative(int cls) const;

private:
    long p_;
    int d_;
    std::int64_t mod_;
    std::int64_t nonresidue_;
    std::vector<int> val_;
    std::vector<std::int64_t> unit_inv_;
    std::vector<int> class_;
};

/// One orthogonal block of the target with its hom-condition forms.
struct FormBlock {
    FMatrix gram;                    // r x r block Gram
    std::size_t rank = 0;            // r
    std::size_t multiplicity = 1;    // identical copies in the target
    std::size_t dim = 0;             // 2 n r integer coordinates
    /// forms[c] is a dim x dim symmetric matrix (row-major) over Z/p^d whose
    /// quadratic form gives output coordinate c of pi * X T X^*.
    std::vector<std::vector<std::int64_t>> forms;
};

/// Output coordinates are ordered (i, j), i <= j: one coordinate (the pi-part)
/// for i == j, then the 1-part and the pi-part for i < j.
struct HomSystem {
    ModRing ring;
    std::size_t source_rank = 0;
    std::size_t target_rank = 0;
    std::vector<FormBlock> blocks;
    std::vector<std::int64_t> target;  // coordinates of pi * T_L mod p^d

    std::size_t num_outputs() const noexcept { return source_rank * source_rank; }
};

/// Coordinates of the hermitian matrix pi * g (g = X T X^* or T_L) in the
/// output ordering above, as p-integral rationals.
std::vector<Rational> output_coordinates(const FMatrix& pi_scaled);

/// Decomposes the target through its normal form (an O_F-isometry, so counts
/// are unchanged) and groups identical blocks.
HomSystem build_hom_system(const HermLattice& target, const HermLattice& source, int d);

/// Diagonalizes the symmetric form `a` (dim x dim over Z/p^d, destroyed) by
/// congruence and adds the square classes of the diagonal entries, each
/// weighted by `weight`, into `class_counts`.
void accumulate_square_classes(std::vector<std::int64_t>& a, std::size_t dim, const ModRing& ring,
                               std::size_t weight, std::vector<int>& class_counts);

/// Value histogram #{x in Z/p^d : a x^2 = k} for a representative of `cls`.
std::vector<std::int64_t> gauss_vector(const ModRing& ring, int cls);

}  // namespace hermdense
