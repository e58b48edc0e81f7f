#include "hermdense/polynomial.hpp"

#include <utility>

namespace hermdense {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Polynomial Polynomial::interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw Error(ErrorKind::InvalidArgument, "interpolation needs matching, nonempty point lists");
    const std::size_t n = xs.size();
    // Newton divided differences, then expand the Newton form.
    std::vector<Rational> dd = ys;
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i) {
            const Rational dx = xs[i] - xs[i - level];
            if (sgn(dx) == 0) throw Error(ErrorKind::InvalidArgument, "interpolation nodes must be distinct");
            dd[i] = (dd[i] - dd[i - 1]) / dx;
        }
    std::vector<Rational> c(n, Rational(0));
    for (std::size_t i = n; i-- > 0;) {
        // c <- c * (X - xs[i]) + dd[i]
        for (std::size_t k = n - 1; k > 0; --k) c[k] = c[k - 1] - xs[i] * c[k];
        c[0] = -xs[i] * c[0] + dd[i];
    }
    return Polynomial(std::move(c));
}

Rational Polynomial::operator()(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    std::vector<Rational> out;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out.push_back(coeffs_[i] * static_cast<long>(i));
    return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
    if (coeffs_.empty()) return "0/1";
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (sgn(coeffs_[i]) == 0) continue;
        Rational mag = abs(coeffs_[i]);
        if (out.empty()) {
            if (sgn(coeffs_[i]) < 0) out += "-";
        } else {
            out += sgn(coeffs_[i]) < 0 ? " - " : " + ";
        }
        out += hermdense::to_string(mag);
        if (i >= 1) out += "*X";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
}

}  // namespace hermdense
