#include "hermdense/arith.hpp"

#include <sstream>

namespace hermdense {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::OddPrimeRequired: return "OddPrimeRequired";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::NotIntegral: return "NotIntegral";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::ParamMismatch: return "ParamMismatch";
        case ErrorKind::RankOrder: return "RankOrder";
        case ErrorKind::NotStabilized: return "NotStabilized";
        case ErrorKind::FitNotStabilized: return "FitNotStabilized";
        case ErrorKind::CountInfeasible: return "CountInfeasible";
        case ErrorKind::SplitClass: return "SplitClass";
        case ErrorKind::OddRank: return "OddRank";
        case ErrorKind::InPiM: return "InPiM";
        case ErrorKind::NotInLattice: return "NotInLattice";
        case ErrorKind::MalformedInput: return "MalformedInput";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long k = 2; k * k <= n; ++k) {
        if (n % k == 0) return false;
    }
    return true;
}

PrimeParams PrimeParams::make(long p) {
    if (p == 2 || !is_prime(p)) {
        throw Error(ErrorKind::OddPrimeRequired,
                    "p must be an odd prime, got " + std::to_string(p));
    }
    return PrimeParams{p};
}

int p_valuation(const Integer& n, long p) {
    if (sgn(n) == 0) return kInfiniteValuation;
    Integer m = n;
    int v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

int p_valuation(const Rational& r, long p) {
    if (sgn(r) == 0) return kInfiniteValuation;
    return p_valuation(r.get_num(), p) - p_valuation(r.get_den(), p);
}

int legendre(const Integer& u, long p) {
    Integer pp = p;
    return mpz_legendre(u.get_mpz_t(), pp.get_mpz_t());
}

long smallest_nonresidue(long p) {
    for (long e = 2; e < p; ++e) {
        if (legendre(Integer(e), p) == -1) return e;
    }
    throw Error(ErrorKind::OddPrimeRequired, "no quadratic non-residue mod " + std::to_string(p));
}

Rational rational_pow(const Rational& base, int exponent) {
    Rational result = 1;
    Rational b = exponent >= 0 ? base : Rational(1) / base;
    for (int e = exponent >= 0 ? exponent : -exponent; e > 0; --e) result *= b;
    return result;
}

std::string to_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

FScalar::FScalar(Rational a, Rational b, long p) : a_(std::move(a)), b_(std::move(b)), p_(p) {
    a_.canonicalize();
    b_.canonicalize();
}

FScalar FScalar::pi_power(int k, long p) {
    // pi^(2j) = p^j, pi^(2j+1) = p^j pi
    int j = k >= 0 ? k / 2 : -((-k + 1) / 2);
    Rational pj = rational_pow(Rational(p), j);
    return (k - 2 * j) == 0 ? FScalar(pj, 0, p) : FScalar(0, pj, p);
}

long FScalar::merged_p(const FScalar& o) const {
    if (p_ == 0) return o.p_;
    if (o.p_ != 0 && o.p_ != p_) {
        throw Error(ErrorKind::ParamMismatch, "scalars over different primes");
    }
    return p_;
}

FScalar& FScalar::operator+=(const FScalar& o) {
    p_ = merged_p(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

FScalar& FScalar::operator-=(const FScalar& o) {
    p_ = merged_p(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

FScalar& FScalar::operator*=(const FScalar& o) {
    p_ = merged_p(o);
    Rational a = a_ * o.a_ + Rational(p_) * b_ * o.b_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
}

FScalar FScalar::inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero in F");
    // a^2 - p b^2 != 0 because p is not a rational square.
    Rational n = norm_to_F0(*this);
    return {a_ / n, -b_ / n, p_};
}

std::string FScalar::to_string() const {
    std::ostringstream os;
    os << a_.get_str() << " + " << b_.get_str() << "*pi";
    return os.str();
}

int valuation(const FScalar& x) {
    if (x.is_zero()) return kInfiniteValuation;
    int va = sgn(x.a()) == 0 ? kInfiniteValuation : 2 * p_valuation(x.a(), x.p());
    int vb = sgn(x.b()) == 0 ? kInfiniteValuation : 2 * p_valuation(x.b(), x.p()) + 1;
    return std::min(va, vb);
}

Rational norm_to_F0(const FScalar& x) {
    return x.a() * x.a() - Rational(x.p()) * x.b() * x.b();
}

bool is_norm(const Rational& beta, const PrimeParams& params) {
    if (sgn(beta) == 0) throw Error(ErrorKind::InvalidArgument, "is_norm of zero");
    const long p = params.p;
    int v = p_valuation(beta, p);
    Rational unit = beta / rational_pow(Rational(p), v);
    if (v % 2 != 0) unit = -unit;
    Integer pp = p;
    Integer num = unit.get_num() % pp;
    Integer den = unit.get_den() % pp;
    return legendre(num * den, p) == 1;
}

std::int64_t int_pow(std::int64_t base, int exponent) {
    std::int64_t r = 1;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

std::int64_t residue_mod(const Rational& r, std::int64_t modulus) {
    Integer m = static_cast<long>(modulus);
    Integer num = r.get_num() % m;
    if (sgn(num) < 0) num += m;
    Integer den = r.get_den() % m;
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw Error(ErrorKind::NotIntegral, "rational " + to_string(r) + " is not p-integral");
    }
    Integer out = (num * inv) % m;
    return out.get_si();
}

namespace {

std::int64_t mulmod(std::int64_t x, std::int64_t y, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(x) * y % m);
}

}  // namespace

ResidueElem::ResidueElem(long p, int d, std::int64_t a, std::int64_t b)
    : p_(p), d_(d), mod_(int_pow(p, d)), a_(((a % mod_) + mod_) % mod_),
      b_(((b % mod_) + mod_) % mod_) {}

void ResidueElem::check_compatible(const ResidueElem& o) const {
    if (o.p_ != p_ || o.d_ != d_) {
        throw Error(ErrorKind::ParamMismatch, "residues at different precisions");
    }
}

ResidueElem& ResidueElem::operator+=(const ResidueElem& o) {
    check_compatible(o);
    a_ = (a_ + o.a_) % mod_;
    b_ = (b_ + o.b_) % mod_;
    return *this;
}

ResidueElem& ResidueElem::operator-=(const ResidueElem& o) {
    check_compatible(o);
    a_ = (a_ + mod_ - o.a_) % mod_;
    b_ = (b_ + mod_ - o.b_) % mod_;
    return *this;
}

ResidueElem& ResidueElem::operator*=(const ResidueElem& o) {
    check_compatible(o);
    std::int64_t a = (mulmod(a_, o.a_, mod_) + mulmod(p_, mulmod(b_, o.b_, mod_), mod_)) % mod_;
    std::int64_t b = (mulmod(a_, o.b_, mod_) + mulmod(b_, o.a_, mod_)) % mod_;
    a_ = a;
    b_ = b;
    return *this;
}

ResidueElem reduce(const FScalar& x, int d) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "precision must be >= 1");
    if (valuation(x) < 0) {
        throw Error(ErrorKind::NotIntegral, "cannot reduce non-integral " + x.to_string());
    }
    if (x.p() == 0) throw Error(ErrorKind::InvalidArgument, "scalar has no prime attached");
    const long p = x.p();
    const std::int64_t mod = int_pow(p, d);
    return ResidueElem(p, d, residue_mod(x.a(), mod), residue_mod(x.b(), mod));
}

}  // namespace hermdense
