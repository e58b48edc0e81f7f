#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hermdense/density.hpp"

using namespace hermdense;

namespace {

const PrimeParams P3 = PrimeParams::make(3);
const Rational kEps = smallest_nonresidue(3);

HermLattice diag(std::vector<Rational> xs, const PrimeParams& params = P3) {
    return diagonal_lattice(xs, params);
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

Polynomial poly(std::vector<Rational> c) { return Polynomial(std::move(c)); }

}  // namespace

TEST_CASE("polynomial basics") {
    const Polynomial p = poly({1, -2, 0, 1});
    CHECK(p.degree() == 3);
    CHECK(p(Rational(2)) == 5);
    CHECK(p.derivative() == poly({-2, 0, 3}));
    CHECK(poly({0, 0}).degree() == -1);
    CHECK(poly({1, Rational(-1, 9)}).to_string() == "1/1 - 1/9*X");
    CHECK(poly({0, 0, 2}).to_string() == "2/1*X^2");

    std::vector<Rational> xs{1, Rational(1, 9), Rational(1, 81), Rational(1, 729)}, ys;
    for (const auto& x : xs) ys.push_back(p(x));
    CHECK(Polynomial::interpolate(xs, ys) == p);
}

TEST_CASE("self-dual closed form") {
    CHECK(selfdual_density_closed_form(1, 3) == 2);
    CHECK(selfdual_density_closed_form(2, 3) == Rational(8, 9));
    CHECK(selfdual_density_closed_form(3, 3) == Rational(16, 9));
    CHECK(selfdual_density_closed_form(4, 3) == Rational(8, 9) * Rational(80, 81));
    CHECK(selfdual_density_closed_form(2, 5) == Rational(24, 25));
    CHECK(kind_of([] { selfdual_density_closed_form(0, 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("self densities of M_1 and M_2 match the closed form") {
    CHECK(local_density(standard_I1(1, P3), standard_I1(1, P3)) == selfdual_density_closed_form(1, 3));
    CHECK(local_density(standard_H(1, P3), standard_H(1, P3)) == selfdual_density_closed_form(2, 3));
    const auto P5 = PrimeParams::make(5);
    CHECK(local_density(standard_I1(1, P5), standard_I1(1, P5)) == 2);
    CHECK(local_density(standard_H(1, P5), standard_H(1, P5)) == Rational(24, 25));
}

TEST_CASE("unit-norm vector densities") {
    const HermLattice h = standard_H(1, P3);
    CHECK(local_density(h, diag({-1})) == Rational(8, 9));
    CHECK(local_density(standard_H(2, P3), diag({-1})) == Rational(80, 81));
    // no vector of norm eps in <1>
    CHECK(local_density(diag({1}), diag({kEps})) == 0);
}

TEST_CASE("series records the precisions") {
    DensityEngine engine;
    const DensitySeries s = engine.series(standard_H(1, P3), standard_H(1, P3));
    REQUIRE(s.stabilized_at);
    CHECK(*s.stabilized_at == 1);
    CHECK(s.ratios.size() == 2);
    CHECK(s.counts[0].second == 72);
    CHECK(s.value() == Rational(8, 9));
    CHECK(engine.log().size() == 2);
    engine.series(standard_H(1, P3), standard_H(1, P3));
    CHECK(engine.log().size() == 2);
}

TEST_CASE("stabilization starts from the largest invariant") {
    CHECK(default_min_precision(diag({1})) == 1);
    CHECK(default_min_precision(standard_H(1, P3)) == 1);
    CHECK(default_min_precision(diag({3})) == 2);
    CHECK(default_min_precision(diag({18})) == 3);
    // starting at d = 1 would accept the spurious plateau 1, 1
    DensityOptions early;
    early.d_min = 1;
    early.d_max = 2;
    DensityEngine engine(early);
    const DensitySeries s = engine.series(diag({1}), diag({18}));
    CHECK(s.value() == 1);
    // 18 = 2 * 3^2 is not a norm, so <1> has no such vector
    CHECK(local_density(diag({1}), diag({18})) == 0);
}

TEST_CASE("NotStabilized and FitNotStabilized") {
    DensityOptions short_run;
    short_run.d_max = 3;
    CHECK(kind_of([&] { local_density(diag({1}), diag({18}), short_run); }) == ErrorKind::NotStabilized);
    DensityOptions low_fit;
    low_fit.k_max = 0;
    CHECK(kind_of([&] { density_polynomial(diag({1}), diag({kEps}), low_fit); }) == ErrorKind::FitNotStabilized);
}

TEST_CASE("density polynomials") {
    // Den(H^(1+k), <-1>) = 1 - q^(-2-2k)
    const DensityPolynomial dp = density_polynomial(standard_H(1, P3), diag({-1}));
    CHECK(dp.poly == poly({1, Rational(-1, 9)}));
    CHECK(dp.grid[0].second == Rational(8, 9));
    CHECK(density_polynomial(diag({1}), diag({kEps})).poly == poly({1, -1}));
    CHECK(density_polynomial(diag({1}), diag({3})).poly == poly({1, 0, -1}));
}

TEST_CASE("derived densities of rank one lattices") {
    CHECK(derived_density(diag({kEps})) == 1);
    CHECK(derived_density(diag({3})) == 2);
    DensityEngine engine;
    const DerivedDensity dd = engine.derived_density(diag({kEps * 9}));
    CHECK(dd.value == 3);
    CHECK(dd.poly.poly == poly({1, 0, 0, -1}));
    CHECK(dd.normalization == 2);
    CHECK(dd.derivative_at_one == -3);
}

TEST_CASE("derived densities of rank two lattices") {
    CHECK(derived_density(diag({kEps, -1})) == 2);
    CHECK(derived_density(diag({3, -1})) == 4);
}

TEST_CASE("split lattices have no derived density") {
    CHECK(kind_of([] { derived_density(diag({1})); }) == ErrorKind::SplitClass);
    CHECK(kind_of([] { derived_density(standard_H(1, P3)); }) == ErrorKind::SplitClass);
    CHECK(kind_of([] { derived_density(diag({5}, PrimeParams::make(5))); }) == ErrorKind::SplitClass);
}

TEST_CASE("Whittaker values") {
    CHECK(whittaker_value(standard_I1(1, P3), 0) == 2);
    CHECK(whittaker_value(diag({-1}), 0) == 0);
    CHECK(whittaker_value(diag({-1}), 1) == Rational(8, 9));
    CHECK(whittaker_value(diag({-1}), 2) == Rational(80, 81));
    CHECK(kind_of([] { whittaker_value(diag({-1}), -1); }) == ErrorKind::InvalidArgument);
}
