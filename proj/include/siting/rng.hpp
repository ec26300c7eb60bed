#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace siting {

// mt19937_64 with hand-rolled value transforms. std::*_distribution output
// is implementation-defined, which would break byte-identical reruns across
// standard libraries; these mappings are fixed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [0, n). Modulo bias is < 2^-50 for any n we use.
    std::uint64_t uniform_int(std::uint64_t n) {
        return eng_() % n;
    }

    // Standard normal via Box-Muller. Draws two uniforms per call.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Log-normal parameterized by median: exp(log(median) + sigma * N(0,1)).
    double lognormal(double median, double sigma) {
        return std::exp(std::log(median) + sigma * normal());
    }

    // Index drawn proportionally to non-negative weights.
    std::size_t weighted_pick(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        const double x = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (x < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace siting
