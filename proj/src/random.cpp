#include "coherlss/random.hpp"

#include <cmath>

namespace coherlss {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    std::uint64_t z = seed + (index + 1) * UINT64_C(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

Engine make_stream(std::uint64_t seed, std::uint64_t index)
{
    return Engine(derive_seed(seed, index));
}

ComplexNormal::ComplexNormal(double variance) : part_(0.0, std::sqrt(variance / 2.0)) {}

std::complex<double> ComplexNormal::operator()(Engine& engine)
{
    const double re = part_(engine);
    const double im = part_(engine);
    return {re, im};
}

} // namespace coherlss
