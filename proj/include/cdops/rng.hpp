#pragma once

#include <cstdint>
#include <random>

#include "cdops/kernel.hpp"

namespace cdops {

/// Deterministic random source for experiments and tests. Draws only raw
/// engine words and converts them by hand, so streams are identical across
/// standard library implementations for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    cplx complex_box() {  // uniform in [-1,1] x [-1,1]i
        double re = uniform(-1.0, 1.0);
        double im = uniform(-1.0, 1.0);
        return {re, im};
    }

    KernelBlock random_block(int q, double weight) {
        Eigen::MatrixXcd g(q, q);
        for (int x = 0; x < q; ++x) {
            for (int y = 0; y < q; ++y) g(x, y) = complex_box();
        }
        return KernelBlock(std::move(g), weight);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cdops
