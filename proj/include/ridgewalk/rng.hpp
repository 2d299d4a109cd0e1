#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ridgewalk {

// Deterministic random source. Draws go through explicit conversions rather
// than std::*_distribution so that a given seed yields the same stream on
// every standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; one draw per call, the sine branch is discarded
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    std::vector<double> normal_vec(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = normal();
        return v;
    }

    // isotropic direction on the unit sphere
    std::vector<double> unit_vec(std::size_t n) {
        std::vector<double> v;
        double s = 0.0;
        do {
            v = normal_vec(n);
            s = 0.0;
            for (double x : v) s += x * x;
        } while (s == 0.0);
        s = 1.0 / std::sqrt(s);
        for (auto& x : v) x *= s;
        return v;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace ridgewalk
