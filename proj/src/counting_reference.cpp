#include "hermdense/counting.hpp"

#include <cmath>

namespace hermdense {

// Deliberately plain: every X over O_F/pi^(2d), Gram computed with ResidueElem
// and compared entrywise against pi * T_L. No normal form, no pruning.
Integer count_homs_reference(const HermLattice& source, const HermLattice& target, int d, double limit) {
    if (source.p() != target.p()) throw Error(ErrorKind::ParamMismatch, "source and target use different primes");
    if (source.rank() > target.rank()) throw Error(ErrorKind::RankOrder, "source rank exceeds target rank");
    const long p = source.p();
    const std::size_t n = source.rank(), m = target.rank();
    const std::int64_t mod = int_pow(p, d);
    const std::size_t digits = 2 * n * m;
    if (std::pow(static_cast<double>(mod), static_cast<double>(digits)) > limit)
        throw Error(ErrorKind::CountInfeasible, "reference enumeration exceeds its limit");

    const FScalar pi = FScalar::pi(p);
    std::vector<ResidueElem> g, t;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g.push_back(reduce(pi * target.gram()(i, j), d));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t.push_back(reduce(pi * source.gram()(i, j), d));

    std::vector<std::int64_t> digit(digits, 0);
    std::vector<ResidueElem> x(n * m, ResidueElem(p, d)), row(m, ResidueElem(p, d));
    Integer count = 0;
    for (;;) {
        for (std::size_t k = 0; k < n * m; ++k) x[k] = ResidueElem(p, d, digit[2 * k], digit[2 * k + 1]);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t l = 0; l < m; ++l) {
                ResidueElem acc(p, d);
                for (std::size_t k = 0; k < m; ++k) acc += x[i * m + k] * g[k * m + l];
                row[l] = acc;
            }
            for (std::size_t j = 0; j < n && ok; ++j) {
                ResidueElem s(p, d);
                for (std::size_t l = 0; l < m; ++l) s += row[l] * x[j * m + l].conj();
                ok = s == t[i * n + j];
            }
        }
        if (ok) ++count;
        std::size_t pos = 0;
        while (pos < digits && ++digit[pos] == mod) digit[pos++] = 0;
        if (pos == digits) break;
    }
    return count;
}

}  // namespace hermdense
