#pragma once

// Verifiers for the identities relating derived densities, plus the
// intersection-number API. Int_Y(L) is *defined* here as the derived density
// ∂Den(L); the equality with the geometric intersection number is a theorem
// and is never recomputed geometrically.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hermdense/density.hpp"

namespace hermdense {

enum class ReportStatus { Pass, Fail, Skipped, Infeasible, Error };
std::string_view to_string(ReportStatus s);

struct VerificationReport {
    std::string id;        // manifest item id, empty for ad hoc checks
    std::string identity;  // identity tag
    std::vector<std::pair<std::string, std::string>> inputs;
    std::string lhs;
    std::string rhs;
    bool pass = false;
    ReportStatus status = ReportStatus::Fail;
    std::vector<std::pair<std::string, std::string>> diagnostics;
    std::string message;  // why an item was skipped or failed to run
    std::optional<ErrorKind> error;
};

/// Int_Y(L) = ∂Den(L). Throws SplitClass for split L.
Rational int_y(const HermLattice& lattice, DensityEngine& engine);
/// ∂Den of the lattice with form p^(-1) h. Throws OddRank, NotIntegral, SplitClass.
Rational int_z_even(const HermLattice& lattice, DensityEngine& engine);

/// ∂Den(L) against (1/2) ∂Den(L + <-1>).
VerificationReport check_analytic_reduction(const HermLattice& lattice, DensityEngine& engine);
/// Den(M_(n+1) + H^k, L + <-1>) against Den(M_n + H^k, L) (1 - q^(-1-n-2k)) for
/// each k. A point that cannot be counted marks the report Infeasible.
VerificationReport check_factorization(const HermLattice& lattice, const std::vector<long>& ks,
                                       DensityEngine& engine);
/// ∂Den(<unit p^a>) = a + 1. Throws SplitClass for a split class.
VerificationReport check_rank1(long a, const Rational& unit, const PrimeParams& params, DensityEngine& engine);
/// ∂Den(L) = ∂Den(-L) for even rank.
VerificationReport check_sign_invariance(const HermLattice& lattice, DensityEngine& engine);
/// Int_Y(L) = Int_Z(pi L) for even rank.
VerificationReport check_y_pi_z(const HermLattice& lattice, DensityEngine& engine);
/// A computed value against an expected one.
VerificationReport check_value(const std::string& identity, const Rational& computed, const Rational& expected);

/// Runs the manifest at `manifest_path` for prime p in manifest order.
/// Individual failures are data; only an unreadable manifest throws.
std::vector<VerificationReport> run_suite(long p, const std::string& manifest_path, const DensityOptions& options);
/// Same, sharing `engine` so its count log covers every suite instance.
std::vector<VerificationReport> run_suite(long p, const std::string& manifest_path, DensityEngine& engine);

/// Path of the manifest shipped with the sources.
std::string default_manifest_path();

}  // namespace hermdense
