#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace coherlss {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer applied to (seed, index). Used to derive independent
/// stream seeds for rows and replicates without any shared generator state.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Generator for stream `index` of master seed `seed`.
Engine make_stream(std::uint64_t seed, std::uint64_t index);

/// Circular complex Gaussian N_C(0, variance): real and imaginary parts are
/// independent N(0, variance / 2).
class ComplexNormal {
public:
    explicit ComplexNormal(double variance = 1.0);

    std::complex<double> operator()(Engine& engine);

private:
    std::normal_distribution<double> part_;
};

} // namespace coherlss
