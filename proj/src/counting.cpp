#include "hermdense/counting.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>

#include <omp.h>

#include "hermdense/hom_system.hpp"

namespace hermdense {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void validate(const HermLattice& source, const HermLattice& target, int d) {
    if (source.p() != target.p()) throw Error(ErrorKind::ParamMismatch, "source and target use different primes");
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "precision d must be >= 1");
    if (source.rank() > target.rank())
        throw Error(ErrorKind::RankOrder, "rank of the represented lattice exceeds the target rank");
    if (!is_integral(source)) throw Error(ErrorKind::NotIntegral, "represented lattice is not integral");
    if (!is_integral(target)) throw Error(ErrorKind::NotIntegral, "target lattice is not integral");
}

// pi * T reduced modulo pi^(2d), split into coordinate arrays.
struct ResidueGram {
    long p = 0;
    std::int64_t mod = 0;
    std::size_t m = 0;
    std::vector<std::int64_t> a, b;

    ResidueGram(const FMatrix& t, int d) : p(t.p()), mod(int_pow(t.p(), d)), m(t.rows()) {
        a.resize(m * m);
        b.resize(m * m);
        const FScalar pi = FScalar::pi(p);
        for (std::size_t k = 0; k < m * m; ++k) {
            ResidueElem r = reduce(pi * t(k / m, k % m), d);
            a[k] = r.a();
            b[k] = r.b();
        }
    }

    // w = G * conj(y)
    void apply(const std::int64_t* y, std::int64_t* w) const {
        for (std::size_t k = 0; k < m; ++k) {
            std::int64_t wa = 0, wb = 0;
            for (std::size_t l = 0; l < m; ++l) {
                const std::int64_t ya = y[2 * l], yb = y[2 * l + 1] == 0 ? 0 : mod - y[2 * l + 1];
                const std::int64_t ga = a[k * m + l], gb = b[k * m + l];
                wa = (wa + ga * ya + p * (gb * yb % mod)) % mod;
                wb = (wb + ga * yb + gb * ya) % mod;
            }
            w[2 * k] = wa;
            w[2 * k + 1] = wb;
        }
    }

    // sum_k x_k w_k
    void pair(const std::int64_t* x, const std::int64_t* w, std::int64_t& ra, std::int64_t& rb) const {
        ra = 0;
        rb = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::int64_t xa = x[2 * k], xb = x[2 * k + 1], wa = w[2 * k], wb = w[2 * k + 1];
            ra = (ra + xa * wa + p * (xb * wb % mod)) % mod;
            rb = (rb + xa * wb + xb * wa) % mod;
        }
    }
};

struct TargetGram {
    std::vector<std::int64_t> a, b;  // n x n
    std::size_t n = 0;
};

TargetGram residue_target(const HermLattice& source, int d) {
    ResidueGram g(source.gram(), d);
    return {g.a, g.b, g.m};
}

void decode_digits(std::uint64_t index, std::int64_t mod, std::int64_t* out, std::size_t count) {
    const auto base = static_cast<std::uint64_t>(mod);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = static_cast<std::int64_t>(index % base);
        index /= base;
    }
}

void apply_workers(int workers) {
    if (workers > 0) omp_set_num_threads(workers);
}

std::uint64_t checked_power(std::int64_t base, std::size_t exponent) {
    const double est = std::pow(static_cast<double>(base), static_cast<double>(exponent));
    if (est > 9.0e18) throw Error(ErrorKind::CountInfeasible, "enumeration does not fit in 64 bits");
    std::uint64_t r = 1;
    for (std::size_t k = 0; k < exponent; ++k) r *= static_cast<std::uint64_t>(base);
    return r;
}

Integer count_brute_force(const HermLattice& source, const HermLattice& target, int d, int workers) {
    const ResidueGram g(target.gram(), d);
    const TargetGram t = residue_target(source, d);
    const std::size_t n = source.rank(), m = target.rank(), row = 2 * m;
    const std::uint64_t total = checked_power(g.mod, 2 * n * m);
    apply_workers(workers);
    std::int64_t count = 0;
#pragma omp parallel reduction(+ : count)
    {
        std::vector<std::int64_t> x(row * n), w(row * n);
#pragma omp for schedule(static)
        for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
            decode_digits(static_cast<std::uint64_t>(idx), g.mod, x.data(), row * n);
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                g.apply(&x[i * row], &w[i * row]);
                for (std::size_t j = 0; j <= i && ok; ++j) {
                    std::int64_t ra, rb;
                    g.pair(&x[i * row], &w[j * row], ra, rb);
                    ok = ra == t.a[i * n + j] && rb == t.b[i * n + j];
                }
            }
            if (ok) ++count;
        }
    }
    return Integer(static_cast<long>(count));
}

class Backtracker {
public:
    Backtracker(const ResidueGram& g, const TargetGram& t, std::uint64_t candidates)
        : g_(g), t_(t), row_(2 * g.m), candidates_(candidates), x_(row_ * t.n), w_(row_ * t.n) {}

    // Number of completions when rows 0..level-1 are fixed; `nodes` counts
    // candidate rows examined.
    std::int64_t extend(std::size_t level, std::uint64_t& nodes, const std::atomic<bool>& abort) {
        if (level == t_.n) return 1;
        std::int64_t total = 0;
        for (std::uint64_t c = 0; c < candidates_; ++c) {
            if ((c & 0xffff) == 0 && abort.load(std::memory_order_relaxed)) return total;
            ++nodes;
            if (try_row(level, c)) total += extend(level + 1, nodes, abort);
        }
        return total;
    }

    bool try_row(std::size_t level, std::uint64_t c) {
        std::int64_t* x = &x_[level * row_];
        std::int64_t* w = &w_[level * row_];
        decode_digits(c, g_.mod, x, row_);
        std::int64_t ra, rb;
        // off-diagonal entries first: cheaper than the self pairing
        for (std::size_t j = 0; j < level; ++j) {
            g_.pair(x, &w_[j * row_], ra, rb);
            if (ra != t_.a[level * t_.n + j] || rb != t_.b[level * t_.n + j]) return false;
        }
        g_.apply(x, w);
        g_.pair(x, w, ra, rb);
        return ra == t_.a[level * t_.n + level] && rb == t_.b[level * t_.n + level];
    }

private:
    const ResidueGram& g_;
    const TargetGram& t_;
    std::size_t row_;
    std::uint64_t candidates_;
    std::vector<std::int64_t> x_, w_;
};

Integer count_backtracking(const HermLattice& source, const HermLattice& target, int d, const CountOptions& opt) {
    const ResidueGram g(target.gram(), d);
    const TargetGram t = residue_target(source, d);
    const std::uint64_t candidates = checked_power(g.mod, 2 * target.rank());
    apply_workers(opt.workers);
    std::atomic<bool> abort{false};
    std::atomic<std::uint64_t> all_nodes{0};
    std::int64_t count = 0;
#pragma omp parallel reduction(+ : count)
    {
        Backtracker bt(g, t, candidates);
        std::uint64_t nodes = 0;
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(candidates); ++c) {
            if (abort.load(std::memory_order_relaxed)) continue;
            ++nodes;
            if (bt.try_row(0, static_cast<std::uint64_t>(c))) count += bt.extend(1, nodes, abort);
            if (nodes > 4096) {
                if (static_cast<double>(all_nodes.fetch_add(nodes) + nodes) > opt.budget) abort = true;
                nodes = 0;
            }
        }
        all_nodes.fetch_add(nodes);
    }
    if (abort || static_cast<double>(all_nodes.load()) > opt.budget)
        throw Error(ErrorKind::CountInfeasible, "backtracking exceeded the work budget");
    return Integer(static_cast<long>(count));
}

// Cyclic convolution in Z[Z/P].
std::vector<Integer> convolve(const std::vector<Integer>& x, const std::vector<std::int64_t>& y) {
    const std::size_t mod = x.size();
    std::vector<Integer> out(mod, Integer(0));
    for (std::size_t j = 0; j < mod; ++j) {
        if (y[j] == 0) continue;
        const long c = static_cast<long>(y[j]);
        for (std::size_t i = 0; i < mod; ++i) {
            if (sgn(x[i]) == 0) continue;
            std::size_t k = i + j;
            if (k >= mod) k -= mod;
            out[k] += x[i] * c;
        }
    }
    return out;
}

Integer count_split_histogram(const HermLattice& source, const HermLattice& target, int d) {
    if (source.rank() != 1) throw Error(ErrorKind::InvalidArgument, "histogram kernel needs a rank-1 source");
    const HomSystem sys = build_hom_system(target, source, d);
    const ModRing& ring = sys.ring;
    std::vector<int> classes(static_cast<std::size_t>(ring.num_classes()), 0);
    for (const auto& blk : sys.blocks) {
        auto form = blk.forms[0];
        accumulate_square_classes(form, blk.dim, ring, blk.multiplicity, classes);
    }
    std::vector<Integer> hist(static_cast<std::size_t>(ring.modulus()), Integer(0));
    hist[0] = 1;
    for (int cls = 0; cls < ring.num_classes(); ++cls) {
        const int times = classes[static_cast<std::size_t>(cls)];
        if (times == 0) continue;
        if (cls == 2 * ring.d()) {
            // a zero diagonal entry contributes a free coordinate
            Integer factor;
            mpz_ui_pow_ui(factor.get_mpz_t(), static_cast<unsigned long>(ring.modulus()),
                          static_cast<unsigned long>(times));
            for (auto& h : hist) h *= factor;
            continue;
        }
        const auto gv = gauss_vector(ring, cls);
        for (int k = 0; k < times; ++k) hist = convolve(hist, gv);
    }
    return hist[static_cast<std::size_t>(sys.target[0])];
}

// Gauss sum of one square class as c * g^e with g = sum_{y mod p} zeta_p^(y^2)
// and e in {0, 1}.
struct GaussValue {
    Integer scale;
    int g_power = 0;
};

GaussValue gauss_value(const ModRing& ring, int cls) {
    const long p = ring.p();
    const int d = ring.d();
    Integer pw;
    if (cls == 2 * d) {
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
        return {pw, 0};
    }
    const int v = cls / 2;
    const int e = d - v;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v + e / 2));
    if (e % 2 == 0) return {pw, 0};
    const bool square = cls % 2 == 0;
    return {square ? pw : Integer(-pw), 1};
}

using Signature = std::vector<int>;
using ShiftTable = std::map<Signature, std::vector<std::int64_t>>;

void merge_into(ShiftTable& dst, const ShiftTable& src) {
    for (const auto& [sig, shifts] : src) {
        auto& row = dst[sig];
        if (row.empty()) row.assign(shifts.size(), 0);
        for (std::size_t k = 0; k < shifts.size(); ++k) row[k] += shifts[k];
    }
}

Integer count_character_sum(const HermLattice& source, const HermLattice& target, int d, int workers) {
    const HomSystem sys = build_hom_system(target, source, d);
    const ModRing& ring = sys.ring;
    const long p = ring.p();
    const std::int64_t mod = ring.modulus();
    const std::size_t outputs = sys.num_outputs();
    const auto num_classes = static_cast<std::size_t>(ring.num_classes());

    std::size_t total_dim = 0;
    for (const auto& blk : sys.blocks) total_dim += blk.dim * blk.multiplicity;

    ShiftTable table;
    {
        Signature trivial(num_classes, 0);
        trivial[num_classes - 1] = static_cast<int>(total_dim);
        table[trivial].assign(static_cast<std::size_t>(mod), 0);
        table[trivial][0] = 1;
    }

    apply_workers(workers);
    for (int v = 0; v < d; ++v) {
        const std::int64_t pv = int_pow(p, v);
        const std::int64_t orbit_mod = int_pow(p, d - v);
        std::vector<std::pair<std::int64_t, bool>> units;  // (lambda, lambda is a nonresidue)
        for (std::int64_t lam = 1; lam < orbit_mod; ++lam)
            if (lam % p != 0) units.emplace_back(lam, legendre(Integer(static_cast<long>(lam % p)), p) != 1);

        for (std::size_t j0 = 0; j0 < outputs; ++j0) {
            // coordinates before j0 lie in p^(v+1) Z/p^d, j0 is p^v, later ones in p^v Z/p^d
            const std::int64_t low_range = int_pow(p, d - v - 1);
            const std::int64_t high_range = orbit_mod;
            const std::uint64_t total =
                checked_power(low_range, j0) * checked_power(high_range, outputs - 1 - j0);

            ShiftTable merged;
#pragma omp parallel
            {
                ShiftTable local;
                std::vector<std::int64_t> chi(outputs), a;
                Signature sig(num_classes);
#pragma omp for schedule(dynamic, 64)
                for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
                    auto rest = static_cast<std::uint64_t>(idx);
                    for (std::size_t c = 0; c < outputs; ++c) {
                        if (c == j0) {
                            chi[c] = pv;
                            continue;
                        }
                        const auto range = static_cast<std::uint64_t>(c < j0 ? low_range : high_range);
                        const auto digit = static_cast<std::int64_t>(rest % range);
                        rest /= range;
                        chi[c] = c < j0 ? digit * pv * p : digit * pv;
                    }
                    std::fill(sig.begin(), sig.end(), 0);
                    for (const auto& blk : sys.blocks) {
                        const std::size_t cells = blk.dim * blk.dim;
                        a.assign(cells, 0);
                        for (std::size_t c = 0; c < outputs; ++c) {
                            if (chi[c] == 0) continue;
                            const auto& f = blk.forms[c];
                            for (std::size_t k = 0; k < cells; ++k) a[k] = (a[k] + chi[c] * f[k]) % mod;
                        }
                        accumulate_square_classes(a, blk.dim, ring, blk.multiplicity, sig);
                    }
                    std::int64_t shift = 0;
                    for (std::size_t c = 0; c < outputs; ++c) shift = (shift + chi[c] * sys.target[c]) % mod;
                    shift = shift == 0 ? 0 : mod - shift;

                    Signature flipped = sig;
                    for (int k = 0; k < d; ++k) std::swap(flipped[2 * k], flipped[2 * k + 1]);
                    auto& plain_row = local[sig];
                    if (plain_row.empty()) plain_row.assign(static_cast<std::size_t>(mod), 0);
                    auto& flip_row = local[flipped];
                    if (flip_row.empty()) flip_row.assign(static_cast<std::size_t>(mod), 0);
                    for (const auto& [lam, nonres] : units) {
                        auto& row = nonres ? flip_row : plain_row;
                        ++row[static_cast<std::size_t>(lam * shift % mod)];
                    }
                }
#pragma omp critical
                merge_into(merged, local);
            }
            merge_into(table, merged);
        }
    }

    // Evaluate sum_chi zeta^shift * prod G(class) in Z[x]/(x^P - 1).
    std::vector<GaussValue> values;
    for (int cls = 0; cls < ring.num_classes(); ++cls) values.push_back(gauss_value(ring, cls));
    const std::int64_t step = mod / p;  // exponent of zeta_p inside zeta_(p^d)
    std::vector<std::size_t> g_offsets;
    for (std::int64_t y = 0; y < p; ++y) g_offsets.push_back(static_cast<std::size_t>(step * (y * y % p)));
    const Integer p_star = (p % 4 == 1) ? Integer(p) : Integer(-p);  // g^2

    std::vector<Integer> acc(static_cast<std::size_t>(mod), Integer(0));
    for (const auto& [sig, shifts] : table) {
        Integer coeff = 1;
        int g_power = 0;
        for (std::size_t cls = 0; cls < num_classes; ++cls) {
            if (sig[cls] == 0) continue;
            Integer pw;
            mpz_pow_ui(pw.get_mpz_t(), values[cls].scale.get_mpz_t(), static_cast<unsigned long>(sig[cls]));
            coeff *= pw;
            g_power += values[cls].g_power * sig[cls];
        }
        Integer gp;
        mpz_pow_ui(gp.get_mpz_t(), p_star.get_mpz_t(), static_cast<unsigned long>(g_power / 2));
        coeff *= gp;
        for (std::size_t s = 0; s < shifts.size(); ++s) {
            if (shifts[s] == 0) continue;
            const Integer term = coeff * Integer(static_cast<long>(shifts[s]));
            if (g_power % 2 == 0) {
                acc[s] += term;
            } else {
                for (std::size_t off : g_offsets) acc[(s + off) % static_cast<std::size_t>(mod)] += term;
            }
        }
    }

    // Reduce modulo the cyclotomic polynomial Phi_(p^d)(x) = sum_k x^(k p^(d-1)).
    const auto ustep = static_cast<std::size_t>(step);
    const auto umod = static_cast<std::size_t>(mod);
    const std::size_t phi = umod - ustep;
    for (std::size_t i = umod; i-- > phi;) {
        if (sgn(acc[i]) == 0) continue;
        const std::size_t base = i - (static_cast<std::size_t>(p) - 1) * ustep;
        for (long k = 0; k + 1 < p; ++k) acc[base + static_cast<std::size_t>(k) * ustep] -= acc[i];
        acc[i] = 0;
    }
    for (std::size_t i = 1; i < umod; ++i)
        if (sgn(acc[i]) != 0) throw Error(ErrorKind::Internal, "character sum is not rational");

    Integer denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(mod), static_cast<unsigned long>(outputs));
    if (!mpz_divisible_p(acc[0].get_mpz_t(), denom.get_mpz_t()))
        throw Error(ErrorKind::Internal, "character sum is not divisible by the group order");
    return Integer(acc[0] / denom);
}

CountStrategy choose(const HermLattice& source, const HermLattice& target, int d, double budget) {
    const std::vector<CountStrategy> order =
        source.rank() == 1
            ? std::vector{CountStrategy::SplitHistogram, CountStrategy::CharacterSum, CountStrategy::Backtracking}
            : std::vector{CountStrategy::CharacterSum, CountStrategy::Backtracking, CountStrategy::BruteForce};
    for (auto s : order)
        if (estimate_work(source, target, d, s) <= budget) return s;
    throw Error(ErrorKind::CountInfeasible, "no counting kernel fits the work budget at d = " + std::to_string(d));
}

}  // namespace

std::string_view to_string(CountStrategy s) {
    switch (s) {
        case CountStrategy::Auto: return "auto";
        case CountStrategy::BruteForce: return "brute";
        case CountStrategy::Backtracking: return "backtrack";
        case CountStrategy::SplitHistogram: return "histogram";
        case CountStrategy::CharacterSum: return "charsum";
    }
    return "?";
}

CountStrategy parse_strategy(std::string_view name) {
    for (auto s : {CountStrategy::Auto, CountStrategy::BruteForce, CountStrategy::Backtracking,
                   CountStrategy::SplitHistogram, CountStrategy::CharacterSum})
        if (to_string(s) == name) return s;
    throw Error(ErrorKind::InvalidArgument, "unknown counting strategy '" + std::string(name) + "'");
}

double default_budget() {
    if (const char* env = std::getenv("HERMDENSE_BUDGET")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0) return v;
    }
    return 2e9;
}

double estimate_work(const HermLattice& source, const HermLattice& target, int d, CountStrategy s) {
    const double big_p = std::pow(static_cast<double>(source.p()), d);
    const auto n = static_cast<double>(source.rank());
    const auto m = static_cast<double>(target.rank());
    switch (s) {
        case CountStrategy::BruteForce: return std::pow(big_p, 2 * n * m);
        case CountStrategy::Backtracking: return std::pow(big_p, 2 * m) * n;
        case CountStrategy::SplitHistogram: return source.rank() == 1 ? 2 * m * big_p * big_p : kInfinity;
        case CountStrategy::CharacterSum: return std::pow(big_p, n * n);
        case CountStrategy::Auto: break;
    }
    return kInfinity;
}

CountResult count_homs(const HermLattice& source, const HermLattice& target, int d, const CountOptions& options) {
    validate(source, target, d);
    CountStrategy s = options.strategy;
    if (s == CountStrategy::Auto) s = choose(source, target, d, options.budget);
    const double work = estimate_work(source, target, d, s);
    if (work > options.budget)
        throw Error(ErrorKind::CountInfeasible, std::string(to_string(s)) + " kernel exceeds the work budget");
    CountResult out;
    out.strategy = s;
    out.work = work;
    switch (s) {
        case CountStrategy::BruteForce: out.count = count_brute_force(source, target, d, options.workers); break;
        case CountStrategy::Backtracking: out.count = count_backtracking(source, target, d, options); break;
        case CountStrategy::SplitHistogram: out.count = count_split_histogram(source, target, d); break;
        case CountStrategy::CharacterSum: out.count = count_character_sum(source, target, d, options.workers); break;
        case CountStrategy::Auto: throw Error(ErrorKind::Internal, "unresolved strategy");
    }
    return out;
}

Rational hom_ratio(const Integer& count, std::size_t n, std::size_t m, int d, long p) {
    Integer denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(d) * n * (2 * m - n));
    Rational r(count, denom);
    r.canonicalize();
    return r;
}

}  // namespace hermdense
