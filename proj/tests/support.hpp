#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "coherlss/rmt.hpp"
#include "coherlss/signal.hpp"

namespace testing {

inline coherlss::PanelMatrix random_panel(Eigen::Index M, Eigen::Index N, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    coherlss::PanelMatrix p(M, N);
    for (Eigen::Index m = 0; m < M; ++m) {
        for (Eigen::Index n = 0; n < N; ++n) {
            p(m, n) = {g(gen), g(gen)};
        }
    }
    return p;
}

inline double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// Integral of g against the MP density, tanh-sinh on the raw density.
inline double mp_quadrature(double c, const std::function<double(double)>& g)
{
    const coherlss::MarchenkoPastur law(c);
    boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate([&](double x) { return g(x) * law.density(x); }, law.lambda_minus(),
                          law.lambda_plus());
}

inline std::complex<double> mp_stieltjes_quadrature(double c, std::complex<double> z)
{
    const double re = mp_quadrature(c, [&](double x) { return std::real(1.0 / (x - z)); });
    const double im = mp_quadrature(c, [&](double x) { return std::imag(1.0 / (x - z)); });
    return {re, im};
}

/// m_k = sum_r c^r/(r+1) C(k,r) C(k-1,r)
inline double mp_moment(int k, double c)
{
    auto binom = [](int n, int r) {
        double v = 1.0;
        for (int i = 1; i <= r; ++i) {
            v = v * (n - r + i) / i;
        }
        return v;
    };
    double sum = 0.0;
    for (int r = 0; r <= k - 1; ++r) {
        sum += std::pow(c, r) / (r + 1) * binom(k, r) * binom(k - 1, r);
    }
    return sum;
}

} // namespace testing
