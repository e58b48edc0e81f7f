// Wall-clock comparison of the serial reference counter against the parallel
// kernels. Usage: bench_counting [repeats]
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <omp.h>

#include "hermdense/counting.hpp"

using namespace hermdense;

namespace {

struct Case {
    std::string name;
    HermLattice source;
    HermLattice target;
    int d;
};

template <class Fn>
double best_of(int repeats, Fn&& fn) {
    double best = INFINITY;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    const PrimeParams p3 = PrimeParams::make(3);
    const HermLattice h = standard_H(1, p3);
    const std::vector<Case> cases{
        {"<-1> -> H, d=3", diagonal_lattice({-1}, p3), h, 3},
        {"<3> -> H + <1>, d=2", diagonal_lattice({3}, p3), orthogonal_direct_sum(h, standard_I1(1, p3)), 2},
        {"<2> -> H^2, d=2", diagonal_lattice({2}, p3), standard_H(2, p3), 2},
        {"H -> H, d=2", h, h, 2},
        {"<2,-1> -> H, d=2", diagonal_lattice({2, -1}, p3), h, 2},
    };
    const CountStrategy kernels[] = {CountStrategy::BruteForce, CountStrategy::Backtracking,
                                     CountStrategy::SplitHistogram, CountStrategy::CharacterSum};

    std::cout << "threads: " << omp_get_max_threads() << ", best of " << repeats << "\n";
    std::cout << std::left << std::setw(24) << "instance" << std::setw(12) << "strategy" << std::right
              << std::setw(12) << "count" << std::setw(12) << "seconds" << std::setw(10) << "speedup" << "\n";
    for (const auto& c : cases) {
        Integer ref;
        const double t_ref = best_of(repeats, [&] { ref = count_homs_reference(c.source, c.target, c.d, 1e9); });
        std::cout << std::left << std::setw(24) << c.name << std::setw(12) << "reference" << std::right
                  << std::setw(12) << ref.get_str() << std::setw(12) << std::fixed << std::setprecision(4) << t_ref
                  << std::setw(10) << "1.0" << "\n";
        for (auto s : kernels) {
            if (estimate_work(c.source, c.target, c.d, s) > 1e10) continue;
            CountOptions o;
            o.strategy = s;
            o.budget = 1e10;
            Integer got;
            const double t = best_of(repeats, [&] { got = count_homs(c.source, c.target, c.d, o).count; });
            std::cout << std::left << std::setw(24) << "" << std::setw(12) << to_string(s) << std::right
                      << std::setw(12) << got.get_str() << std::setw(12) << t << std::setw(10) << std::setprecision(1)
                      << t_ref / t << std::setprecision(4) << (got == ref ? "" : "  MISMATCH") << "\n";
            if (got != ref) return 1;
        }
    }
    return 0;
}
