#pragma once

// Exact arithmetic in F = Q_p(pi), pi^2 = p, conj(pi) = -pi, and in the
// residue rings O_F / pi^(2d) used by the counting engine.

#include <cstdint>
#include <limits>
#include <string>

#include <gmpxx.h>

#include "hermdense/error.hpp"

namespace hermdense {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

struct PrimeParams {
    long p = 3;

    long q() const noexcept { return p; }

    /// Validates that p is an odd prime; throws OddPrimeRequired otherwise.
    static PrimeParams make(long p);

    friend bool operator==(const PrimeParams&, const PrimeParams&) = default;
};

bool is_prime(long n);

/// Exponent of p in a nonzero integer or rational.
int p_valuation(const Integer& n, long p);
int p_valuation(const Rational& r, long p);

/// Legendre symbol (u / p) for u prime to p: +1 or -1. Returns 0 if p | u.
int legendre(const Integer& u, long p);

/// Smallest positive quadratic non-residue mod p.
long smallest_nonresidue(long p);

Rational rational_pow(const Rational& base, int exponent);
std::string to_string(const Rational& r);  // canonical "num/den"

/// a + b*pi with exact rational coefficients. The prime is carried along
/// because multiplication uses pi^2 = p; a default-constructed value is zero
/// and adopts the prime of whatever it is combined with.
class FScalar {
public:
    FScalar() = default;
    FScalar(Rational a, Rational b, long p);

    static FScalar rational(Rational a, long p) { return {std::move(a), 0, p}; }
    static FScalar pi(long p) { return {0, 1, p}; }
    static FScalar pi_power(int k, long p);

    const Rational& a() const noexcept { return a_; }
    const Rational& b() const noexcept { return b_; }
    long p() const noexcept { return p_; }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    bool is_rational() const { return sgn(b_) == 0; }

    FScalar conj() const { return {a_, -b_, p_}; }
    FScalar inverse() const;

    FScalar operator-() const { return {-a_, -b_, p_}; }
    FScalar& operator+=(const FScalar& o);
    FScalar& operator-=(const FScalar& o);
    FScalar& operator*=(const FScalar& o);
    FScalar& operator/=(const FScalar& o) { return *this *= o.inverse(); }

    friend FScalar operator+(FScalar x, const FScalar& y) { return x += y; }
    friend FScalar operator-(FScalar x, const FScalar& y) { return x -= y; }
    friend FScalar operator*(FScalar x, const FScalar& y) { return x *= y; }
    friend FScalar operator/(FScalar x, const FScalar& y) { return x /= y; }

    friend bool operator==(const FScalar& x, const FScalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

    std::string to_string() const;

private:
    long merged_p(const FScalar& o) const;

    Rational a_{0};
    Rational b_{0};
    long p_ = 0;
};

/// pi-adic valuation; kInfiniteValuation for zero.
int valuation(const FScalar& x);

/// x * conj(x) = a^2 - p b^2.
Rational norm_to_F0(const FScalar& x);

/// Membership in Nm F^x for nonzero rational beta = p^v u:
/// beta is a norm iff (-1)^v u is a square mod p.
bool is_norm(const Rational& beta, const PrimeParams& params);

/// Residue of a p-integral rational modulo `modulus` (a power of p).
std::int64_t residue_mod(const Rational& r, std::int64_t modulus);

std::int64_t int_pow(std::int64_t base, int exponent);

/// Class of a + b*pi in O_F / pi^(2d) = (Z/p^d) + (Z/p^d) pi.
class ResidueElem {
public:
    ResidueElem(long p, int d, std::int64_t a = 0, std::int64_t b = 0);

    long p() const noexcept { return p_; }
    int precision() const noexcept { return d_; }
    std::int64_t modulus() const noexcept { return mod_; }
    std::int64_t a() const noexcept { return a_; }
    std::int64_t b() const noexcept { return b_; }

    ResidueElem conj() const { return {p_, d_, a_, mod_ - b_}; }
    ResidueElem operator-() const { return {p_, d_, mod_ - a_, mod_ - b_}; }
    ResidueElem& operator+=(const ResidueElem& o);
    ResidueElem& operator-=(const ResidueElem& o);
    ResidueElem& operator*=(const ResidueElem& o);

    friend ResidueElem operator+(ResidueElem x, const ResidueElem& y) { return x += y; }
    friend ResidueElem operator-(ResidueElem x, const ResidueElem& y) { return x -= y; }
    friend ResidueElem operator*(ResidueElem x, const ResidueElem& y) { return x *= y; }
    friend bool operator==(const ResidueElem& x, const ResidueElem& y) {
        return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
    }

private:
    void check_compatible(const ResidueElem& o) const;

    long p_;
    int d_;
    std::int64_t mod_;
    std::int64_t a_;
    std::int64_t b_;
};

/// Ring homomorphism O_F -> O_F / pi^(2d); throws NotIntegral if val(x) < 0.
ResidueElem reduce(const FScalar& x, int d);

}  // namespace hermdense
