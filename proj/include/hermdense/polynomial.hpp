#pragma once

#include <string>
#include <vector>

#include "hermdense/arith.hpp"

namespace hermdense {

/// Polynomial over Q, coefficients from X^0 upward, no trailing zeros.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);

    /// Unique polynomial of degree < xs.size() through the points; xs distinct.
    static Polynomial interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    Rational operator()(const Rational& x) const;
    Polynomial derivative() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    /// e.g. "1/1 - 1/9*X"
    std::string to_string() const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

}  // namespace hermdense
