#pragma once

#include <optional>
#include <vector>

#include "hermdense/arith.hpp"
#include "hermdense/matrix.hpp"

namespace hermdense {

/// A hermitian O_F-lattice given by its Gram (moment) matrix T = (h(e_i, e_j)).
/// The form is linear in the first argument and conjugate-linear in the second.
class HermLattice {
public:
    /// Throws InvalidArgument if `gram` is not hermitian and Degenerate if
    /// det(gram) = 0.
    HermLattice(PrimeParams params, FMatrix gram);

    const PrimeParams& params() const noexcept { return params_; }
    long p() const noexcept { return params_.p; }
    std::size_t rank() const noexcept { return gram_.rows(); }
    const FMatrix& gram() const noexcept { return gram_; }

    /// det(T); always in F0 for a hermitian matrix.
    Rational det() const;

    friend bool operator==(const HermLattice& x, const HermLattice& y) {
        return x.params_ == y.params_ && x.gram_ == y.gram_;
    }

private:
    PrimeParams params_;
    FMatrix gram_;
};

HermLattice standard_H(long s, const PrimeParams& params);
HermLattice standard_I1(const Rational& unit, const PrimeParams& params);
/// M_n = H^(n/2) for even n, H^((n-1)/2) + I_1^1 for odd n.
HermLattice standard_Mn(long n, const PrimeParams& params);
/// <x_1> + ... + <x_n>
HermLattice diagonal_lattice(const std::vector<Rational>& entries, const PrimeParams& params);

bool is_integral(const HermLattice& lattice);

struct NormalBlock {
    enum class Kind { Unit, Hyperbolic };

    Kind kind = Kind::Unit;
    Rational beta;  // unit block beta * pi^(2b)
    int b = 0;
    int c = 0;      // hyperbolic block, off-diagonal +-pi^(2c-1)
    FMatrix gram;   // exact Gram of the block in the normal basis

    std::size_t size() const noexcept { return kind == Kind::Unit ? 1 : 2; }
    /// False for a hyperbolic block whose diagonal could not be cleared exactly.
    bool is_standard() const;
};

struct NormalForm {
    std::vector<NormalBlock> blocks;  // in block-diagonal order
    FMatrix base_change;              // rows: normal basis in the input basis

    std::vector<std::pair<Rational, int>> unit_blocks() const;
    std::vector<int> hyperbolic_blocks() const;
    FMatrix block_diagonal() const;
};

NormalForm normal_form(const HermLattice& lattice);

/// Nondecreasing elementary-divisor exponents of L^v / L. Throws NotIntegral.
std::vector<int> fundamental_invariants(const HermLattice& lattice);
int val_lattice(const HermLattice& lattice);

/// Exponents of L^v / L read off the Smith form of pi*T; independent of
/// normal_form.
std::vector<int> dual_quotient_invariants(const HermLattice& lattice);

/// L^v in the dual basis: Gram -p^(-1) T^(-1).
HermLattice dual(const HermLattice& lattice);
/// L^* = pi L^v: Gram T^(-1).
HermLattice star_dual(const HermLattice& lattice);

HermLattice orthogonal_direct_sum(const HermLattice& x, const HermLattice& y);
HermLattice scale_form(const HermLattice& lattice, const Rational& c);
/// The lattice x*L: Gram Nm(x) * T.
HermLattice rescale_basis(const HermLattice& lattice, const FScalar& x);
HermLattice apply_base_change(const HermLattice& lattice, const FMatrix& u);

/// Whether L (x) F is isometric to M_n (x) F, i.e. det(L)/det(M_n) is a norm.
bool same_isometry_class_as_Mn(const HermLattice& lattice);

/// Result of splitting off phi inside H^s. Vectors are coordinate rows in the
/// standard normal basis e_1, f_1, ..., e_s, f_s.
struct ComplementResult {
    std::vector<std::vector<FScalar>> basis;  // sigma_2, tau_2, ..., sigma_s, tau_s, phi'
    FMatrix gram;                             // H^(s-1) + <-h(phi, phi)>
    std::vector<FScalar> phi_prime;
    Rational beta;                  // h(phi, phi)
    std::optional<int> colength;    // 1 + val(beta) when beta != 0
    std::size_t pivot_block = 0;    // block moved to the front
    bool pivot_swapped = false;     // unit coordinate sat on f, basis (f, -e) used
    FScalar unit_coordinate;        // the coordinate a_1 divided out
};

ComplementResult orthogonal_complement_in_Hs(long s, const std::vector<FScalar>& phi,
                                             const PrimeParams& params);

/// O_F-length of the quotient of the lattice spanned by `rows` inside the
/// coordinate lattice; rows must be square and nonsingular.
int colength_in_ambient(const std::vector<std::vector<FScalar>>& rows, long p);

}  // namespace hermdense
