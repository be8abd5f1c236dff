#ifndef CAVCHAIN_TESTS_HELPERS_HPP
#define CAVCHAIN_TESTS_HELPERS_HPP

#include <random>

#include "cavchain/model.hpp"

namespace cavchain::testing {

// Deterministic generators for randomized suites. Rates are log-uniform in
// [0.1, 100] gamma. Atoms couple to a single normal mode, the regime in
// which the symmetric (t, r) description of one subsystem applies; chains
// with both couplings active are exercised through the direct solver only.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double rate() {
        std::uniform_real_distribution<double> u(std::log(0.1), std::log(100.0));
        return std::exp(u(rng_));
    }
    double uniform(double a, double b) {
        std::uniform_real_distribution<double> u(a, b);
        return u(rng_);
    }
    bool flip(double p = 0.5) {
        std::bernoulli_distribution b(p);
        return b(rng_);
    }
    std::size_t pick(std::initializer_list<std::size_t> xs) {
        std::uniform_int_distribution<std::size_t> u(0, xs.size() - 1);
        return *(xs.begin() + u(rng_));
    }

    SubsystemParams subsystem(bool allow_atom = true) {
        SubsystemParams sub;
        sub.cavity.delta0 = 0.0;
        sub.cavity.h = rate();
        sub.cavity.kappa_ex = rate();
        sub.cavity.kappa_i = rate();
        if (allow_atom && flip(0.7)) {
            AtomParams at;
            at.gamma = 1.0;
            const double g = rate();
            if (flip())
                at.g_B = g;
            else
                at.g_A = g;
            sub.atom = at;
        }
        return sub;
    }

    ChainSpec chain(std::size_t n, bool allow_atom = true) {
        ChainSpec spec;
        for (std::size_t i = 0; i < n; ++i)
            spec.subsystems.push_back(subsystem(allow_atom));
        for (std::size_t i = 0; i + 1 < n; ++i)
            spec.lengths.push_back(uniform(50.0, 200.0));
        return spec;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace cavchain::testing

#endif
