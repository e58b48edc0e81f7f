#include "hermdense/lattice.hpp"

#include <algorithm>
#include <numeric>

namespace hermdense {

namespace {

FScalar rat(const Rational& r, long p) { return FScalar::rational(r, p); }

bool is_rational_square(const Rational& r, Rational& root) {
    if (sgn(r) < 0) return false;
    Integer n = r.get_num(), d = r.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    Integer sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    root = Rational(sn, sd);
    root.canonicalize();
    return true;
}

void add_row_multiple(FMatrix& u, std::size_t target, std::size_t source, const FScalar& f) {
    for (std::size_t k = 0; k < u.cols(); ++k) u(target, k) += f * u(source, k);
}

void scale_row(FMatrix& u, std::size_t row, const FScalar& f) {
    for (std::size_t k = 0; k < u.cols(); ++k) u(row, k) *= f;
}

FScalar herm(const std::vector<FScalar>& x, const std::vector<FScalar>& y, const FMatrix& gram) {
    FScalar acc(0, 0, gram.p());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j].is_zero()) continue;
            acc += x[i] * gram(i, j) * y[j].conj();
        }
    }
    return acc;
}

}  // namespace

HermLattice::HermLattice(PrimeParams params, FMatrix gram)
    : params_(PrimeParams::make(params.p)), gram_(std::move(gram)) {
    if (gram_.rows() == 0) throw Error(ErrorKind::InvalidArgument, "lattice of rank 0");
    if (gram_.p() != params_.p) throw Error(ErrorKind::ParamMismatch, "gram prime differs from lattice prime");
    if (!gram_.is_hermitian()) throw Error(ErrorKind::InvalidArgument, "gram matrix is not hermitian");
    if (determinant(gram_).is_zero()) throw Error(ErrorKind::Degenerate, "degenerate gram");
}

Rational HermLattice::det() const { return determinant(gram_).a(); }

HermLattice standard_H(long s, const PrimeParams& params) {
    if (s < 1) throw Error(ErrorKind::InvalidArgument, "H^s needs s >= 1");
    const long p = params.p;
    FMatrix g(2 * s, 2 * s, p);
    for (long i = 0; i < s; ++i) {
        g(2 * i, 2 * i + 1) = FScalar::pi_power(-1, p);
        g(2 * i + 1, 2 * i) = -FScalar::pi_power(-1, p);
    }
    return {params, std::move(g)};
}

HermLattice standard_I1(const Rational& unit, const PrimeParams& params) {
    if (sgn(unit) == 0 || p_valuation(unit, params.p) != 0)
        throw Error(ErrorKind::InvalidArgument, "I_1 needs a p-adic unit, got " + to_string(unit));
    return diagonal_lattice({unit}, params);
}

HermLattice standard_Mn(long n, const PrimeParams& params) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "M_n needs n >= 1");
    if (n == 1) return standard_I1(1, params);
    if (n % 2 == 0) return standard_H(n / 2, params);
    return orthogonal_direct_sum(standard_H(n / 2, params), standard_I1(1, params));
}

HermLattice diagonal_lattice(const std::vector<Rational>& entries, const PrimeParams& params) {
    FMatrix g(entries.size(), entries.size(), params.p);
    for (std::size_t i = 0; i < entries.size(); ++i) g(i, i) = rat(entries[i], params.p);
    return {params, std::move(g)};
}

bool is_integral(const HermLattice& lattice) {
    const FMatrix& t = lattice.gram();
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) {
            int v = valuation(t(i, j));
            if (v < -1 || (i == j && v < 0)) return false;
        }
    return true;
}

bool NormalBlock::is_standard() const {
    return kind == Kind::Unit || (gram(0, 0).is_zero() && gram(1, 1).is_zero());
}

std::vector<std::pair<Rational, int>> NormalForm::unit_blocks() const {
    std::vector<std::pair<Rational, int>> out;
    for (const auto& blk : blocks)
        if (blk.kind == NormalBlock::Kind::Unit) out.emplace_back(blk.beta, blk.b);
    return out;
}

std::vector<int> NormalForm::hyperbolic_blocks() const {
    std::vector<int> out;
    for (const auto& blk : blocks)
        if (blk.kind == NormalBlock::Kind::Hyperbolic) out.push_back(blk.c);
    return out;
}

FMatrix NormalForm::block_diagonal() const {
    FMatrix out;
    for (const auto& blk : blocks) out = out.rows() == 0 ? blk.gram : hermdense::block_diagonal(out, blk.gram);
    return out;
}

namespace {

struct Pivot {
    std::size_t i = 0, j = 0;
    int v = kInfiniteValuation;
};

// Minimal valuation in the trailing submatrix; diagonal entries win ties,
// then the lowest row index.
Pivot find_pivot(const FMatrix& a, std::size_t from) {
    Pivot best;
    for (std::size_t i = from; i < a.rows(); ++i) {
        int v = valuation(a(i, i));
        if (v < best.v) best = {i, i, v};
    }
    for (std::size_t i = from; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            int v = valuation(a(i, j));
            if (v < best.v) best = {i, j, v};
        }
    return best;
}

// Scales row r1 so that h(e_r0, e_r1) = pi^(2c-1) exactly.
void normalize_offdiagonal(FMatrix& u, const FMatrix& t, std::size_t r0, std::size_t r1, int c) {
    FMatrix a = congruence(u, t);
    FScalar target = FScalar::pi_power(2 * c - 1, t.p());
    scale_row(u, r1, (target / a(r0, r1)).conj());
}

// Clears the diagonal of a hyperbolic block where an exact rational solution
// exists; see the ledger for the residual case.
void clear_hyperbolic_diagonal(FMatrix& u, const FMatrix& t, std::size_t r0, std::size_t r1, int c) {
    const long p = t.p();
    const Rational pc = rational_pow(Rational(p), c);
    FMatrix a = congruence(u, t);
    Rational alpha = a(r0, r0).a();
    Rational delta = a(r1, r1).a();

    if (sgn(alpha) != 0 && sgn(delta) != 0) {
        // e_r0 + t*pi*e_r1 is isotropic iff p*delta*t^2 + 2 p^c t - alpha = 0.
        Rational disc = pc * pc + Rational(p) * alpha * delta;
        Rational root;
        if (is_rational_square(disc, root)) {
            for (int sign : {1, -1}) {
                Rational tt = (-pc + Rational(sign) * root) / (Rational(p) * delta);
                if (sgn(tt) != 0 && p_valuation(tt, p) < 0) continue;
                add_row_multiple(u, r0, r1, FScalar(0, tt, p));
                normalize_offdiagonal(u, t, r0, r1, c);
                break;
            }
            a = congruence(u, t);
            alpha = a(r0, r0).a();
            delta = a(r1, r1).a();
        }
    }
    if (sgn(alpha) == 0 && sgn(delta) != 0) {
        Rational tt = -delta / (2 * pc);
        add_row_multiple(u, r1, r0, FScalar(0, tt, p));
    } else if (sgn(delta) == 0 && sgn(alpha) != 0) {
        Rational tt = alpha / (2 * pc);
        add_row_multiple(u, r0, r1, FScalar(0, tt, p));
    }
}

}  // namespace

NormalForm normal_form(const HermLattice& lattice) {
    const FMatrix& t = lattice.gram();
    const long p = lattice.p();
    const std::size_t n = lattice.rank();
    FMatrix u = FMatrix::identity(n, p);
    NormalForm out;

    std::size_t cur = 0;
    while (cur < n) {
        FMatrix a = congruence(u, t);
        Pivot pv = find_pivot(a, cur);
        if (pv.v == kInfiniteValuation) throw Error(ErrorKind::Degenerate, "degenerate gram");

        if (pv.i == pv.j) {
            u.swap_rows(pv.i, cur);
            a = congruence(u, t);
            FScalar inv = a(cur, cur).inverse();
            for (std::size_t k = cur + 1; k < n; ++k) {
                if (a(k, cur).is_zero()) continue;
                add_row_multiple(u, k, cur, -(a(k, cur) * inv));
            }
            a = congruence(u, t);
            NormalBlock blk;
            blk.kind = NormalBlock::Kind::Unit;
            blk.b = pv.v / 2;
            blk.beta = a(cur, cur).a() / rational_pow(Rational(p), blk.b);
            blk.gram = FMatrix(1, 1, p);
            blk.gram(0, 0) = a(cur, cur);
            out.blocks.push_back(std::move(blk));
            cur += 1;
            continue;
        }

        if (pv.v % 2 == 0) {
            // Even off-diagonal minimum: e_i + e_j has a diagonal entry of the
            // same valuation, so the next round pivots on a diagonal.
            add_row_multiple(u, pv.i, pv.j, FScalar::rational(1, p));
            continue;
        }

        const int c = (pv.v + 1) / 2;
        u.swap_rows(pv.i, cur);
        u.swap_rows(pv.j == cur ? pv.i : pv.j, cur + 1);
        a = congruence(u, t);
        {
            FMatrix blk(2, 2, p);
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t s = 0; s < 2; ++s) blk(r, s) = a(cur + r, cur + s);
            FMatrix binv = inverse(blk);
            for (std::size_t k = cur + 2; k < n; ++k) {
                FScalar mu = a(k, cur) * binv(0, 0) + a(k, cur + 1) * binv(1, 0);
                FScalar nu = a(k, cur) * binv(0, 1) + a(k, cur + 1) * binv(1, 1);
                add_row_multiple(u, k, cur, -mu);
                add_row_multiple(u, k, cur + 1, -nu);
            }
        }
        normalize_offdiagonal(u, t, cur, cur + 1, c);
        clear_hyperbolic_diagonal(u, t, cur, cur + 1, c);
        a = congruence(u, t);
        NormalBlock blk;
        blk.kind = NormalBlock::Kind::Hyperbolic;
        blk.c = c;
        blk.gram = FMatrix(2, 2, p);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t s = 0; s < 2; ++s) blk.gram(r, s) = a(cur + r, cur + s);
        out.blocks.push_back(std::move(blk));
        cur += 2;
    }
    out.base_change = std::move(u);
    return out;
}

std::vector<int> fundamental_invariants(const HermLattice& lattice) {
    if (!is_integral(lattice)) throw Error(ErrorKind::NotIntegral, "fundamental invariants need an integral lattice");
    std::vector<int> out;
    for (const auto& blk : normal_form(lattice).blocks) {
        if (blk.kind == NormalBlock::Kind::Unit) {
            out.push_back(2 * blk.b + 1);
        } else {
            out.push_back(2 * blk.c);
            out.push_back(2 * blk.c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int val_lattice(const HermLattice& lattice) {
    auto inv = fundamental_invariants(lattice);
    return std::accumulate(inv.begin(), inv.end(), 0);
}

std::vector<int> dual_quotient_invariants(const HermLattice& lattice) {
    return elementary_divisor_valuations(lattice.gram().scaled(FScalar::pi(lattice.p())));
}

HermLattice dual(const HermLattice& lattice) {
    const long p = lattice.p();
    return {lattice.params(), inverse(lattice.gram()).scaled(FScalar::rational(Rational(-1, p), p))};
}

HermLattice star_dual(const HermLattice& lattice) {
    return {lattice.params(), inverse(lattice.gram())};
}

HermLattice orthogonal_direct_sum(const HermLattice& x, const HermLattice& y) {
    if (!(x.params() == y.params())) throw Error(ErrorKind::ParamMismatch, "direct sum of lattices over different primes");
    return {x.params(), block_diagonal(x.gram(), y.gram())};
}

HermLattice scale_form(const HermLattice& lattice, const Rational& c) {
    if (sgn(c) == 0) throw Error(ErrorKind::InvalidArgument, "scale_form by zero");
    return {lattice.params(), lattice.gram().scaled(FScalar::rational(c, lattice.p()))};
}

HermLattice rescale_basis(const HermLattice& lattice, const FScalar& x) {
    if (x.is_zero()) throw Error(ErrorKind::InvalidArgument, "rescale_basis by zero");
    if (x.p() != 0 && x.p() != lattice.p()) throw Error(ErrorKind::ParamMismatch, "scalar over a different prime");
    return scale_form(lattice, norm_to_F0(FScalar(x.a(), x.b(), lattice.p())));
}

HermLattice apply_base_change(const HermLattice& lattice, const FMatrix& u) {
    return {lattice.params(), congruence(u, lattice.gram())};
}

bool same_isometry_class_as_Mn(const HermLattice& lattice) {
    const long n = static_cast<long>(lattice.rank());
    // det H = p^(-1), det I_1^1 = 1
    Rational det_mn = rational_pow(Rational(lattice.p()), -static_cast<int>(n / 2));
    return is_norm(lattice.det() / det_mn, lattice.params());
}

ComplementResult orthogonal_complement_in_Hs(long s, const std::vector<FScalar>& phi,
                                             const PrimeParams& params) {
    const long p = params.p;
    if (s < 1) throw Error(ErrorKind::InvalidArgument, "H^s needs s >= 1");
    if (phi.size() != static_cast<std::size_t>(2 * s))
        throw Error(ErrorKind::InvalidArgument, "phi must have 2s coordinates");
    std::vector<FScalar> coords;
    for (const auto& x : phi) coords.emplace_back(x.a(), x.b(), p);
    for (const auto& x : coords)
        if (valuation(x) < 0) throw Error(ErrorKind::NotInLattice, "phi is not in H^s");

    std::size_t unit_index = coords.size();
    for (std::size_t k = 0; k < coords.size(); ++k)
        if (valuation(coords[k]) == 0) {
            unit_index = k;
            break;
        }
    if (unit_index == coords.size()) throw Error(ErrorKind::InPiM, "phi lies in pi*H^s");

    const FMatrix gram = standard_H(s, params).gram();
    const std::size_t dim = coords.size();
    auto unit_vec = [&](std::size_t k) {
        std::vector<FScalar> v(dim, FScalar(0, 0, p));
        v[k] = FScalar::rational(1, p);
        return v;
    };
    auto axpy = [](std::vector<FScalar> x, const FScalar& c, const std::vector<FScalar>& y) {
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += c * y[k];
        return x;
    };

    ComplementResult out;
    out.pivot_block = unit_index / 2;
    out.pivot_swapped = unit_index % 2 == 1;

    // New standard normal basis: block `pivot_block` first; if its unit
    // coordinate is on f, use (f, -e), which again pairs to pi^(-1).
    std::vector<std::size_t> order{out.pivot_block};
    for (std::size_t k = 0; k < static_cast<std::size_t>(s); ++k)
        if (k != out.pivot_block) order.push_back(k);

    std::vector<std::vector<FScalar>> e_new, f_new;
    std::vector<FScalar> a_new, b_new;
    for (std::size_t k : order) {
        if (k == out.pivot_block && out.pivot_swapped) {
            e_new.push_back(unit_vec(2 * k + 1));
            f_new.push_back(axpy(std::vector<FScalar>(dim, FScalar(0, 0, p)), FScalar::rational(-1, p), unit_vec(2 * k)));
            a_new.push_back(coords[2 * k + 1]);
            b_new.push_back(-coords[2 * k]);
        } else {
            e_new.push_back(unit_vec(2 * k));
            f_new.push_back(unit_vec(2 * k + 1));
            a_new.push_back(coords[2 * k]);
            b_new.push_back(coords[2 * k + 1]);
        }
    }

    const FScalar a1 = a_new[0];
    out.unit_coordinate = a1;
    const FScalar a1_inv = a1.inverse();
    for (std::size_t k = 1; k < order.size(); ++k) {
        FScalar a = a_new[k] * a1_inv;
        FScalar b = b_new[k] * a1_inv;
        out.basis.push_back(axpy(e_new[k], b.conj(), f_new[0]));
        out.basis.push_back(axpy(f_new[k], -a.conj(), f_new[0]));
    }

    const FScalar beta = herm(coords, coords, gram);
    out.beta = beta.a();
    out.phi_prime = axpy(coords, beta * a1.conj().inverse() * FScalar::pi(p), f_new[0]);
    out.basis.push_back(out.phi_prime);

    const std::size_t r = out.basis.size();
    out.gram = FMatrix(r, r, p);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) out.gram(i, j) = herm(out.basis[i], out.basis[j], gram);

    for (const auto& v : out.basis)
        if (!herm(v, coords, gram).is_zero())
            throw Error(ErrorKind::Internal, "complement basis is not orthogonal to phi");

    if (!beta.is_zero()) out.colength = 1 + valuation(beta);
    return out;
}

int colength_in_ambient(const std::vector<std::vector<FScalar>>& rows, long p) {
    FMatrix m(rows.size(), rows.size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw Error(ErrorKind::InvalidArgument, "inclusion matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = FScalar(rows[i][j].a(), rows[i][j].b(), p);
    }
    int total = 0;
    for (int v : elementary_divisor_valuations(std::move(m))) {
        if (v == kInfiniteValuation) throw Error(ErrorKind::Degenerate, "sublattice is not of full rank");
        total += v;
    }
    return total;
}

}  // namespace hermdense
