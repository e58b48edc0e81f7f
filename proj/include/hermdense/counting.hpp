#pragma once

// Exact counts of |Herm_{L,M}(O_F / pi^(2d))|: matrices X over O_F/pi^(2d)
// (n x m) with X T_M X^* = T_L modulo the congruence level d.

#include <string>
#include <string_view>

#include "hermdense/lattice.hpp"

namespace hermdense {

enum class CountStrategy {
    Auto,
    BruteForce,      // every X, OpenMP over the index range
    Backtracking,    // row by row with pruning on the partial Gram
    SplitHistogram,  // rank-1 source: convolved value histograms per diagonal term
    CharacterSum,    // additive characters of the n^2 output coordinates
};

std::string_view to_string(CountStrategy s);
/// Accepts auto, brute, backtrack, histogram, charsum. Throws InvalidArgument.
CountStrategy parse_strategy(std::string_view name);

/// Work budget from HERMDENSE_BUDGET, default 2e9 elementary steps.
double default_budget();

struct CountOptions {
    CountStrategy strategy = CountStrategy::Auto;
    double budget = default_budget();
    int workers = 0;  // 0 keeps the OpenMP default
};

struct CountResult {
    Integer count;
    CountStrategy strategy = CountStrategy::Auto;  // the kernel that ran
    double work = 0;                                // estimated elementary steps
};

/// Throws NotIntegral, RankOrder (rank L > rank M), ParamMismatch,
/// InvalidArgument (d < 1) and CountInfeasible when the chosen kernel would
/// exceed the budget.
CountResult count_homs(const HermLattice& source, const HermLattice& target, int d,
                       const CountOptions& options = {});

/// Serial enumeration of every X with plain residue arithmetic. Kept as the
/// oracle for the kernels; refuses more than `limit` candidates.
Integer count_homs_reference(const HermLattice& source, const HermLattice& target, int d,
                             double limit = 1e8);

/// Estimated steps for a strategy (infinity when it does not apply).
double estimate_work(const HermLattice& source, const HermLattice& target, int d, CountStrategy s);

/// count / p^(d * n * (2m - n))
Rational hom_ratio(const Integer& count, std::size_t n, std::size_t m, int d, long p);

}  // namespace hermdense
