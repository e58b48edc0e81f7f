#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "hermdense/counting.hpp"
#include "hermdense/hom_system.hpp"
#include "test_support.hpp"

using namespace hermdense;
using hermdense::testing::random_integral_lattice;
using hermdense::testing::random_unimodular;

namespace {

const PrimeParams P3 = PrimeParams::make(3);
const PrimeParams P5 = PrimeParams::make(5);

HermLattice diag(std::initializer_list<long> xs, const PrimeParams& params = P3) {
    std::vector<Rational> v;
    for (long x : xs) v.emplace_back(x);
    return diagonal_lattice(v, params);
}

Integer count_with(const HermLattice& l, const HermLattice& m, int d, CountStrategy s, int workers = 0) {
    CountOptions o;
    o.strategy = s;
    o.workers = workers;
    o.budget = 1e12;
    return count_homs(l, m, d, o).count;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::Internal;
}

struct Instance {
    HermLattice source;
    HermLattice target;
    int d;
};

std::vector<Instance> instances() {
    const HermLattice h = standard_H(1, P3);
    return {
        {diag({1}), diag({1}), 1},
        {diag({1}), diag({1}), 2},
        {diag({1}), diag({1}), 3},
        {diag({-1}), h, 1},
        {diag({-1}), h, 2},
        {diag({2}), h, 2},
        {diag({3}), h, 2},
        {diag({9}), h, 2},
        {diag({3}), orthogonal_direct_sum(h, diag({1})), 1},
        {diag({1}), diag({-1}), 2},
        {h, h, 1},
        {diag({1, -1}), h, 1},
        {diag({2, -1}), h, 1},
        {diag({3, 1}), h, 1},
        {diag({1}, P5), standard_H(1, P5), 1},
        {diag({2}, P5), diag({1}, P5), 2},
        {diag({5}, P5), standard_H(1, P5), 1},
    };
}

const CountStrategy kKernels[] = {CountStrategy::BruteForce, CountStrategy::Backtracking,
                                  CountStrategy::SplitHistogram, CountStrategy::CharacterSum};

}  // namespace

TEST_CASE("strategy names") {
    for (auto s : {CountStrategy::Auto, CountStrategy::BruteForce, CountStrategy::Backtracking,
                   CountStrategy::SplitHistogram, CountStrategy::CharacterSum})
        CHECK(parse_strategy(to_string(s)) == s);
    CHECK(kind_of([] { parse_strategy("fast"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("budget from the environment") {
    setenv("HERMDENSE_BUDGET", "12345", 1);
    CHECK(default_budget() == 12345.0);
    unsetenv("HERMDENSE_BUDGET");
    CHECK(default_budget() == 2e9);
}

TEST_CASE("hom ratio") {
    CHECK(hom_ratio(6, 1, 1, 1, 3) == 2);
    CHECK(hom_ratio(72, 2, 2, 1, 3) == Rational(8, 9));
    CHECK(hom_ratio(648, 1, 2, 2, 3) == Rational(8, 9));
}

TEST_CASE("small counts") {
    const HermLattice h = standard_H(1, P3);
    // x conj(x) = 1 has 2 p^d solutions mod pi^(2d)
    CHECK(count_homs(diag({1}), diag({1}), 1).count == 6);
    CHECK(count_homs(diag({1}), diag({1}), 2).count == 18);
    CHECK(count_homs(h, h, 1).count == 72);
    CHECK(count_homs(h, h, 2).count == 5832);
    CHECK(count_homs(diag({-1}), h, 1).count == 24);
    CHECK(count_homs(diag({-1}), h, 2).count == 648);
    CHECK(hom_ratio(count_homs(diag({1}), diag({1}), 3).count, 1, 1, 3, 3) == 2);
}

TEST_CASE("every applicable kernel matches the serial reference") {
    for (const auto& [l, m, d] : instances()) {
        const Integer expected = count_homs_reference(l, m, d);
        CAPTURE(d);
        CAPTURE(l.rank());
        CAPTURE(m.rank());
        for (auto s : kKernels) {
            if (!std::isfinite(estimate_work(l, m, d, s))) continue;
            CAPTURE(to_string(s));
            CHECK(count_with(l, m, d, s) == expected);
        }
        CHECK(count_homs(l, m, d).count == expected);
    }
}

TEST_CASE("histogram kernel only takes rank one sources") {
    const HermLattice h = standard_H(1, P3);
    CHECK_FALSE(std::isfinite(estimate_work(h, h, 1, CountStrategy::SplitHistogram)));
    CHECK(kind_of([&] { count_with(h, h, 1, CountStrategy::SplitHistogram); }) == ErrorKind::CountInfeasible);
}

TEST_CASE("counts do not depend on the basis of source or target") {
    std::mt19937 rng(3);
    for (int i = 0; i < 10; ++i) {
        const HermLattice l = random_integral_lattice(rng, 1, 3);
        const HermLattice m = random_integral_lattice(rng, 2, 3);
        const Integer base = count_homs_reference(l, m, 2);
        const HermLattice l2 = apply_base_change(l, random_unimodular(rng, 1, 3));
        const HermLattice m2 = apply_base_change(m, random_unimodular(rng, 2, 3));
        CHECK(count_homs(l2, m2, 2).count == base);
        CHECK(count_with(l2, m2, 2, CountStrategy::CharacterSum) == base);
        CHECK(count_with(l2, m2, 2, CountStrategy::Backtracking) == base);
    }
    for (int i = 0; i < 4; ++i) {
        const HermLattice l = random_integral_lattice(rng, 2, 3);
        const HermLattice m = random_integral_lattice(rng, 2, 3);
        const Integer base = count_homs_reference(l, m, 1);
        CHECK(count_with(l, m, 1, CountStrategy::CharacterSum) == base);
        CHECK(count_with(apply_base_change(l, random_unimodular(rng, 2, 3)), m, 1, CountStrategy::Backtracking) == base);
    }
}

TEST_CASE("results are identical across worker counts") {
    const HermLattice h = standard_H(1, P3);
    const HermLattice m = orthogonal_direct_sum(h, diag({1}));
    for (auto s : kKernels) {
        if (!std::isfinite(estimate_work(diag({3}), m, 2, s))) continue;
        if (estimate_work(diag({3}), m, 2, s) > 1e8) continue;
        const Integer one = count_with(diag({3}), m, 2, s, 1);
        CHECK(count_with(diag({3}), m, 2, s, 2) == one);
        CHECK(count_with(diag({3}), m, 2, s, 4) == one);
    }
}

TEST_CASE("input validation") {
    const HermLattice h = standard_H(1, P3);
    CHECK(kind_of([&] { count_homs(h, diag({1}), 1); }) == ErrorKind::RankOrder);
    CHECK(kind_of([&] { count_homs(diagonal_lattice({Rational(1, 3)}, P3), h, 1); }) == ErrorKind::NotIntegral);
    CHECK(kind_of([&] { count_homs(diag({1}), standard_H(1, P5), 1); }) == ErrorKind::ParamMismatch);
    CHECK(kind_of([&] { count_homs(diag({1}), h, 0); }) == ErrorKind::InvalidArgument);
    CountOptions tiny;
    tiny.budget = 10;
    CHECK(kind_of([&] { count_homs(h, h, 2, tiny); }) == ErrorKind::CountInfeasible);
    CHECK(kind_of([&] { count_homs_reference(h, h, 3, 1e3); }) == ErrorKind::CountInfeasible);
}

TEST_CASE("square classes of Z/p^d") {
    for (long p : {3L, 5L}) {
        for (int d = 1; d <= 3; ++d) {
            const ModRing ring(p, d);
            for (int cls = 0; cls < ring.num_classes(); ++cls)
                CHECK(ring.square_class(ring.class_representative(cls)) == cls);
            for (std::int64_t x = 0; x < ring.modulus(); ++x) {
                // x and its class representative have the same value histogram
                std::vector<std::int64_t> hist(static_cast<std::size_t>(ring.modulus()), 0);
                for (std::int64_t y = 0; y < ring.modulus(); ++y) ++hist[static_cast<std::size_t>(ring.mul(x, ring.mul(y, y)))];
                CHECK(hist == gauss_vector(ring, ring.square_class(x)));
                if (ring.val(x) < d) {
                    const std::int64_t unit = x / int_pow(p, ring.val(x));
                    CHECK(ring.mul(unit, ring.unit_inverse(x)) == 1);
                }
            }
        }
    }
}

TEST_CASE("diagonalization preserves the value distribution of a quadratic form") {
    std::mt19937 rng(8);
    for (long p : {3L, 5L}) {
        const int d = 2;
        const ModRing ring(p, d);
        const std::int64_t mod = ring.modulus();
        std::uniform_int_distribution<std::int64_t> entry(0, mod - 1);
        for (int trial = 0; trial < 12; ++trial) {
            const std::size_t dim = p == 3 ? 2 + trial % 3 : 2 + trial % 2;
            std::vector<std::int64_t> a(dim * dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = i; j < dim; ++j) {
                    std::int64_t v = entry(rng);
                    if (trial % 2 == 0) v = ring.mul(v, p);  // exercise non-unit pivots
                    a[i * dim + j] = a[j * dim + i] = v;
                }

            std::vector<std::int64_t> brute(static_cast<std::size_t>(mod), 0);
            std::vector<std::int64_t> x(dim, 0);
            for (;;) {
                std::int64_t q = 0;
                for (std::size_t i = 0; i < dim; ++i)
                    for (std::size_t j = 0; j < dim; ++j) q = ring.add(q, ring.mul(a[i * dim + j], ring.mul(x[i], x[j])));
                ++brute[static_cast<std::size_t>(q)];
                std::size_t k = 0;
                while (k < dim && ++x[k] == mod) x[k++] = 0;
                if (k == dim) break;
            }

            std::vector<int> classes(static_cast<std::size_t>(ring.num_classes()), 0);
            auto work = a;
            accumulate_square_classes(work, dim, ring, 1, classes);
            std::vector<std::int64_t> conv(static_cast<std::size_t>(mod), 0);
            conv[0] = 1;
            int total = 0;
            for (int cls = 0; cls < ring.num_classes(); ++cls) {
                for (int rep = 0; rep < classes[static_cast<std::size_t>(cls)]; ++rep) {
                    const auto g = gauss_vector(ring, cls);
                    std::vector<std::int64_t> next(static_cast<std::size_t>(mod), 0);
                    for (std::int64_t u = 0; u < mod; ++u)
                        for (std::int64_t v = 0; v < mod; ++v)
                            next[static_cast<std::size_t>((u + v) % mod)] += conv[static_cast<std::size_t>(u)] * g[static_cast<std::size_t>(v)];
                    conv = std::move(next);
                    ++total;
                }
            }
            CHECK(total == static_cast<int>(dim));
            CHECK(conv == brute);
        }
    }
}

TEST_CASE("pi-scaled comparison matches the unscaled congruence on H") {
    // X T X^* = T modulo pi^(2d-1) O_F, checked with exact field arithmetic on
    // lifts of every X over O_F / pi^(2d)
    const HermLattice h = standard_H(1, P3);
    const int d = 1;
    const long mod = 3;
    const FMatrix& t = h.gram();
    long direct = 0;
    std::vector<long> digit(8, 0);
    for (;;) {
        FMatrix x(2, 2, 3);
        for (std::size_t k = 0; k < 4; ++k) x(k / 2, k % 2) = FScalar(digit[2 * k], digit[2 * k + 1], 3);
        const FMatrix diff = congruence(x, t) + t.scaled(FScalar(-1, 0, 3));
        bool ok = true;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) ok = ok && valuation(diff(i, j)) >= 2 * d - 1;
        if (ok) ++direct;
        std::size_t pos = 0;
        while (pos < digit.size() && ++digit[pos] == mod) digit[pos++] = 0;
        if (pos == digit.size()) break;
    }
    CHECK(direct == 72);
    CHECK(count_homs(h, h, d).count == direct);
    CHECK(count_homs_reference(h, h, d) == direct);
}
