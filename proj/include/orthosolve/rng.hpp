#pragma once

#include <cmath>
#include <cstdint>

#include "orthosolve/matrix.hpp"

namespace orthosolve {

// SplitMix64: the 64-bit mixing generator. Pinned here so that every run of
// the library is bit-reproducible given the same seed. Constants:
//   gamma       0x9E3779B97F4A7C15
//   mix step 1  0xBF58476D1CE4E5B9  (xor-shift 30)
//   mix step 2  0x94D049BB133111EB  (xor-shift 27)
//   final       xor-shift 31
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; generates in pairs and caches the spare.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline Matrix fill_gaussian(SplitMix64& rng, int rows, int cols) {
    if (rows < 1 || cols < 1) throw ShapeMismatch("fill_gaussian: dimensions must be positive");
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.gaussian();
    return m;
}

inline Matrix fill_uniform(SplitMix64& rng, int rows, int cols) {
    if (rows < 1 || cols < 1) throw ShapeMismatch("fill_uniform: dimensions must be positive");
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.uniform01();
    return m;
}

// i.i.d. N(0,1) entries, deterministic given seed.
inline Matrix random_gaussian(int rows, int cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return fill_gaussian(rng, rows, cols);
}

// i.i.d. uniform [0,1) entries, deterministic given seed.
inline Matrix random_uniform(int rows, int cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return fill_uniform(rng, rows, cols);
}

}  // namespace orthosolve
