#include "hermdense/hom_system.hpp"

#include <utility>

namespace hermdense {

ModRing::ModRing(long p, int d)
    : p_(p), d_(d), mod_(int_pow(p, d)), nonresidue_(smallest_nonresidue(p)) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "precision must be >= 1");
    const auto size = static_cast<std::size_t>(mod_);
    val_.assign(size, d);
    unit_inv_.assign(size, 0);
    class_.assign(size, 2 * d);
    for (std::int64_t x = 1; x < mod_; ++x) {
        int v = 0;
        std::int64_t u = x;
        while (u % p == 0) {
            u /= p;
            ++v;
        }
        // u is a unit mod p^d; invert by brute extended Euclid
        std::int64_t r0 = mod_, r1 = u % mod_, s0 = 0, s1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::swap(r0, r1);
            r1 -= q * r0;
            std::swap(s0, s1);
            s1 -= q * s0;
        }
        std::int64_t inv = ((s0 % mod_) + mod_) % mod_;
        const auto ix = static_cast<std::size_t>(x);
        val_[ix] = v;
        unit_inv_[ix] = inv;
        class_[ix] = 2 * v + (legendre(Integer(static_cast<long>(u % p)), p) == 1 ? 0 : 1);
    }
}

std::int64_t ModRing::class_representative(int cls) const {
    if (cls >= 2 * d_) return 0;
    std::int64_t unit = cls % 2 == 0 ? 1 : nonresidue_;
    return int_pow(p_, cls / 2) * unit % mod_;
}

std::vector<Rational> output_coordinates(const FMatrix& pi_scaled) {
    std::vector<Rational> out;
    const std::size_t n = pi_scaled.rows();
    out.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (i == j) {
                out.push_back(pi_scaled(i, i).b());
            } else {
                out.push_back(pi_scaled(i, j).a());
                out.push_back(pi_scaled(i, j).b());
            }
        }
    return out;
}

namespace {

// Output coordinates of pi * X T X^* for X (n x r) read from z.
std::vector<Rational> evaluate_block(const std::vector<Rational>& z, const FMatrix& gram, std::size_t n) {
    const long p = gram.p();
    const std::size_t r = gram.rows();
    FMatrix x(n, r, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < r; ++k) x(i, k) = FScalar(z[(i * r + k) * 2], z[(i * r + k) * 2 + 1], p);
    FMatrix g = congruence(x, gram).scaled(FScalar::pi(p));
    return output_coordinates(g);
}

FormBlock make_form_block(const FMatrix& gram, std::size_t n, const ModRing& ring) {
    FormBlock blk;
    blk.gram = gram;
    blk.rank = gram.rows();
    blk.dim = 2 * n * blk.rank;
    const std::size_t dim = blk.dim;
    const std::size_t outputs = n * n;
    const std::int64_t mod = ring.modulus();

    std::vector<std::vector<Rational>> single(dim);
    for (std::size_t u = 0; u < dim; ++u) {
        std::vector<Rational> z(dim, Rational(0));
        z[u] = 1;
        single[u] = evaluate_block(z, gram, n);
    }
    blk.forms.assign(outputs, std::vector<std::int64_t>(dim * dim, 0));
    for (std::size_t u = 0; u < dim; ++u) {
        for (std::size_t c = 0; c < outputs; ++c)
            blk.forms[c][u * dim + u] = residue_mod(single[u][c], mod);
        for (std::size_t v = u + 1; v < dim; ++v) {
            std::vector<Rational> z(dim, Rational(0));
            z[u] = 1;
            z[v] = 1;
            auto both = evaluate_block(z, gram, n);
            for (std::size_t c = 0; c < outputs; ++c) {
                Rational cross = (both[c] - single[u][c] - single[v][c]) / 2;
                std::int64_t r = residue_mod(cross, mod);
                blk.forms[c][u * dim + v] = r;
                blk.forms[c][v * dim + u] = r;
            }
        }
    }
    return blk;
}

}  // namespace

HomSystem build_hom_system(const HermLattice& target, const HermLattice& source, int d) {
    HomSystem sys{ModRing(target.p(), d), source.rank(), target.rank(), {}, {}};
    const std::size_t n = source.rank();
    for (const auto& nb : normal_form(target).blocks) {
        bool merged = false;
        for (auto& fb : sys.blocks)
            if (fb.gram == nb.gram) {
                ++fb.multiplicity;
                merged = true;
                break;
            }
        if (!merged) sys.blocks.push_back(make_form_block(nb.gram, n, sys.ring));
    }
    auto t = output_coordinates(source.gram().scaled(FScalar::pi(source.p())));
    for (const auto& x : t) sys.target.push_back(residue_mod(x, sys.ring.modulus()));
    return sys;
}

void accumulate_square_classes(std::vector<std::int64_t>& a, std::size_t dim, const ModRing& ring,
                               std::size_t weight, std::vector<int>& class_counts) {
    const int d = ring.d();
    const auto w = static_cast<int>(weight);
    auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return a[i * dim + j]; };

    for (std::size_t k = 0; k < dim; ++k) {
        int best = d;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < dim; ++i) {
            int v = ring.val(at(i, i));
            if (v < best) {
                best = v;
                bi = bj = i;
            }
        }
        for (std::size_t i = k; i < dim && best > 0; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) {
                int v = ring.val(at(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best == d) {
            class_counts[static_cast<std::size_t>(2 * d)] += w * static_cast<int>(dim - k);
            return;
        }
        if (bi != bj) {
            // z_bi += z_bj: the new diagonal a_ii + 2 a_ij + a_jj has valuation `best`
            for (std::size_t l = k; l < dim; ++l) at(bi, l) = ring.add(at(bi, l), at(bj, l));
            for (std::size_t l = k; l < dim; ++l) at(l, bi) = ring.add(at(l, bi), at(l, bj));
        }
        if (bi != k) {
            for (std::size_t l = k; l < dim; ++l) std::swap(at(bi, l), at(k, l));
            for (std::size_t l = k; l < dim; ++l) std::swap(at(l, bi), at(l, k));
        }
        const std::int64_t pivot = at(k, k);
        class_counts[static_cast<std::size_t>(ring.square_class(pivot))] += w;
        const std::int64_t inv = ring.unit_inverse(pivot);
        const std::int64_t pv = int_pow(ring.p(), best);
        for (std::size_t i = k + 1; i < dim; ++i) {
            const std::int64_t aik = at(i, k);
            if (aik == 0) continue;
            const std::int64_t f = ring.mul(aik / pv, inv);
            for (std::size_t j = k + 1; j < dim; ++j) {
                if (at(k, j) == 0) continue;
                at(i, j) = ring.sub(at(i, j), ring.mul(f, at(k, j)));
            }
        }
    }
}

std::vector<std::int64_t> gauss_vector(const ModRing& ring, int cls) {
    const std::int64_t mod = ring.modulus();
    const std::int64_t a = ring.class_representative(cls);
    std::vector<std::int64_t> out(static_cast<std::size_t>(mod), 0);
    for (std::int64_t x = 0; x < mod; ++x) ++out[static_cast<std::size_t>(a * (x * x % mod) % mod)];
    return out;
}

}  // namespace hermdense
