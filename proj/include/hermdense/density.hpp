#pragma once

// Local densities Den(M, L), density polynomials Den(M, L, X) and the derived
// density of a nonsplit lattice.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hermdense/counting.hpp"
#include "hermdense/polynomial.hpp"

namespace hermdense {

struct DensityOptions {
    int d_max = 4;
    /// Extra fit rounds beyond the starting order val(L) + rank(L); the fit
    /// order is capped at start + k_extra unless k_max is set.
    int k_extra = 3;
    std::optional<int> k_max;
    /// Precision the stabilization check starts from; derived from the
    /// largest fundamental invariant of L when unset.
    std::optional<int> d_min;
    CountOptions count;
};

struct DensitySeries {
    std::vector<std::pair<int, Integer>> counts;
    std::vector<std::pair<int, Rational>> ratios;
    std::vector<CountStrategy> strategies;
    std::optional<int> stabilized_at;  // d0 with ratio(d0) = ratio(d0 + 1)

    /// The stabilized ratio; throws NotStabilized if there is none.
    const Rational& value() const;
};

struct DensityPolynomial {
    Polynomial poly;
    std::vector<std::pair<int, Rational>> grid;  // (k, Den(M + H^k, L))
    int fit_order = 0;                           // K: fit through k = 0..K
};

struct DerivedDensity {
    Rational value;
    DensityPolynomial poly;
    Rational derivative_at_one;
    Rational normalization;  // Den(M_n, M_n)
};

/// Counting front end with a memo of exact counts, keyed on the Gram
/// matrices and the precision. Not thread-safe; one engine per thread.
class DensityEngine {
public:
    explicit DensityEngine(DensityOptions options = {});

    const DensityOptions& options() const noexcept { return options_; }

    Integer count(const HermLattice& target, const HermLattice& source, int d);
    DensitySeries series(const HermLattice& target, const HermLattice& source);
    Rational local_density(const HermLattice& target, const HermLattice& source);
    DensityPolynomial density_polynomial(const HermLattice& target, const HermLattice& source);
    DerivedDensity derived_density(const HermLattice& lattice);
    Rational whittaker_value(const HermLattice& lattice, long s);

    /// Every count performed or reused so far, in first-use order.
    struct CountRecord {
        std::string target;
        std::string source;
        int d;
        Integer count;
        CountStrategy strategy;
        HermLattice target_lattice;
        HermLattice source_lattice;
    };
    const std::vector<CountRecord>& log() const noexcept { return log_; }

private:
    DensityOptions options_;
    std::map<std::string, std::pair<Integer, CountStrategy>> memo_;
    std::vector<CountRecord> log_;
};

/// Smallest precision at which the stabilization check starts for source L.
int default_min_precision(const HermLattice& source);

Rational local_density(const HermLattice& target, const HermLattice& source, const DensityOptions& options = {});
DensityPolynomial density_polynomial(const HermLattice& target, const HermLattice& source,
                                     const DensityOptions& options = {});
/// Throws SplitClass when L (x) F is isometric to M_n (x) F.
Rational derived_density(const HermLattice& lattice, const DensityOptions& options = {});
/// prod_{i=1}^{r} (1 - q^(-2i)) for n = 2r, twice that for n = 2r + 1.
Rational selfdual_density_closed_form(long n, long q);
/// Den(M_n + H^s, L).
Rational whittaker_value(const HermLattice& lattice, long s, const DensityOptions& options = {});

}  // namespace hermdense
