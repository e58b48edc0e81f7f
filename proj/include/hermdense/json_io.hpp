#pragma once

// JSON and text formats: rationals as "num/den", FScalar as ["a", "b"],
// lattices as {"p": 3, "gram": [[["a","b"], ...], ...]}.

#include <string>

#include <json.hpp>

#include "hermdense/identities.hpp"

namespace hermdense {

using Json = nlohmann::ordered_json;

/// Accepts "n/d" and plain integers "n"; throws MalformedInput.
Rational parse_rational(const std::string& text);

Json to_json(const Rational& r);
Json to_json(const FScalar& x);
Json to_json(const HermLattice& lattice);
Json to_json(const VerificationReport& report);
Json to_json(const Polynomial& poly);

/// Throws MalformedInput naming the offending field, and the lattice
/// constructor's errors (OddPrimeRequired, Degenerate, ...).
HermLattice lattice_from_json(const Json& j);
HermLattice read_lattice_file(const std::string& path);

/// Parses compact lattice descriptions used by the suite manifest:
///   "H", "H^3", "M2", "I1", "diag(eps, p, -1, eps*p^2, 2/3)"
/// joined by " + " for orthogonal sums. "eps" is the smallest non-residue.
HermLattice parse_lattice_spec(const std::string& spec, const PrimeParams& params);

/// Rational expression over integers, fractions, parentheses and the names
/// q, p (both the prime) and eps, e.g. "1 - q^-2" or "2*(1 - q^-2)".
Rational evaluate_expression(const std::string& text, const PrimeParams& params);

}  // namespace hermdense
