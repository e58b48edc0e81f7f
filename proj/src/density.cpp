#include "hermdense/density.hpp"

#include <algorithm>

namespace hermdense {

namespace {

std::string gram_key(const HermLattice& l) {
    std::string key = std::to_string(l.p()) + ":" + std::to_string(l.rank());
    const auto& g = l.gram();
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) key += "|" + g(i, j).to_string();
    return key;
}

HermLattice with_hyperbolic(const HermLattice& target, long k) {
    return k == 0 ? target : orthogonal_direct_sum(target, standard_H(k, target.params()));
}

}  // namespace

const Rational& DensitySeries::value() const {
    if (!stabilized_at) throw Error(ErrorKind::NotStabilized, "density series did not stabilize");
    for (const auto& [d, r] : ratios)
        if (d == *stabilized_at) return r;
    throw Error(ErrorKind::Internal, "stabilized precision missing from the series");
}

int default_min_precision(const HermLattice& source) {
    const auto inv = fundamental_invariants(source);
    const int top = inv.empty() ? 0 : inv.back();
    return std::max(1, (top + 2) / 2);
}

DensityEngine::DensityEngine(DensityOptions options) : options_(std::move(options)) {}

Integer DensityEngine::count(const HermLattice& target, const HermLattice& source, int d) {
    const std::string tk = gram_key(target), sk = gram_key(source);
    const std::string key = tk + "#" + sk + "#" + std::to_string(d);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
        CountResult r = count_homs(source, target, d, options_.count);
        it = memo_.emplace(key, std::make_pair(r.count, r.strategy)).first;
        log_.push_back({tk, sk, d, r.count, r.strategy, target, source});
    }
    return it->second.first;
}

DensitySeries DensityEngine::series(const HermLattice& target, const HermLattice& source) {
    const int d_lo = options_.d_min.value_or(default_min_precision(source));
    const std::size_t n = source.rank(), m = target.rank();
    DensitySeries out;
    for (int d = d_lo; d <= options_.d_max; ++d) {
        Integer c = count(target, source, d);
        out.counts.emplace_back(d, c);
        out.ratios.emplace_back(d, hom_ratio(c, n, m, d, source.p()));
        out.strategies.push_back(memo_.at(gram_key(target) + "#" + gram_key(source) + "#" + std::to_string(d)).second);
        const std::size_t last = out.ratios.size() - 1;
        if (last > 0 && out.ratios[last].second == out.ratios[last - 1].second) {
            out.stabilized_at = d - 1;
            return out;
        }
    }
    throw Error(ErrorKind::NotStabilized,
                "ratios did not stabilize by d_max = " + std::to_string(options_.d_max) + " (started at d = " +
                    std::to_string(d_lo) + ")");
}

Rational DensityEngine::local_density(const HermLattice& target, const HermLattice& source) {
    return series(target, source).value();
}

DensityPolynomial DensityEngine::density_polynomial(const HermLattice& target, const HermLattice& source) {
    const int start = val_lattice(source) + static_cast<int>(source.rank());
    const int cap = options_.k_max.value_or(start + options_.k_extra);
    const Rational q2 = Rational(target.p() * target.p());

    DensityPolynomial out;
    std::vector<Rational> xs, ys;
    auto extend_grid = [&](int upto) {
        for (int k = static_cast<int>(xs.size()); k <= upto; ++k) {
            Rational v = local_density(with_hyperbolic(target, k), source);
            xs.push_back(1 / rational_pow(q2, k));
            ys.push_back(v);
            out.grid.emplace_back(k, v);
        }
    };
    auto fit = [&](int order) {
        return Polynomial::interpolate({xs.begin(), xs.begin() + order + 1}, {ys.begin(), ys.begin() + order + 1});
    };
    for (int order = std::min(start, cap); order <= cap; ++order) {
        extend_grid(order + 1);
        Polynomial lo = fit(order), hi = fit(order + 1);
        if (lo == hi) {
            out.poly = lo;
            out.fit_order = order;
            return out;
        }
    }
    throw Error(ErrorKind::FitNotStabilized,
                "density polynomial fits disagree up to order " + std::to_string(cap));
}

DerivedDensity DensityEngine::derived_density(const HermLattice& lattice) {
    if (same_isometry_class_as_Mn(lattice))
        throw Error(ErrorKind::SplitClass, "lattice is in the split class of M_n; the derived density is undefined");
    const auto n = static_cast<long>(lattice.rank());
    DerivedDensity out;
    out.poly = density_polynomial(standard_Mn(n, lattice.params()), lattice);
    if (sgn(out.poly.poly(Rational(1))) != 0)
        throw Error(ErrorKind::Internal, "Den(M_n, L, 1) is nonzero for a nonsplit lattice");
    out.derivative_at_one = out.poly.poly.derivative()(Rational(1));
    out.normalization = selfdual_density_closed_form(n, lattice.params().q());
    out.value = -2 * out.derivative_at_one / out.normalization;
    return out;
}

Rational DensityEngine::whittaker_value(const HermLattice& lattice, long s) {
    if (s < 0) throw Error(ErrorKind::InvalidArgument, "s must be >= 0");
    const auto n = static_cast<long>(lattice.rank());
    return local_density(with_hyperbolic(standard_Mn(n, lattice.params()), s), lattice);
}

Rational local_density(const HermLattice& target, const HermLattice& source, const DensityOptions& options) {
    return DensityEngine(options).local_density(target, source);
}

DensityPolynomial density_polynomial(const HermLattice& target, const HermLattice& source,
                                     const DensityOptions& options) {
    return DensityEngine(options).density_polynomial(target, source);
}

Rational derived_density(const HermLattice& lattice, const DensityOptions& options) {
    return DensityEngine(options).derived_density(lattice).value;
}

Rational selfdual_density_closed_form(long n, long q) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "rank must be >= 1");
    Rational out = n % 2 == 1 ? 2 : 1;
    const Rational qq(q);
    for (long i = 1; i <= n / 2; ++i) out *= 1 - 1 / rational_pow(qq, static_cast<int>(2 * i));
    return out;
}

Rational whittaker_value(const HermLattice& lattice, long s, const DensityOptions& options) {
    return DensityEngine(options).whittaker_value(lattice, s);
}

}  // namespace hermdense
