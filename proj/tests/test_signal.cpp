#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coherlss/errors.hpp"
#include "coherlss/signal.hpp"

using namespace coherlss;

TEST_CASE("spectral density closed forms")
{
    CHECK(spectral_density(ModelSpec::white_noise(), 0.17) == doctest::Approx(1.0));
    const auto ar = ModelSpec::ar1(0.4);
    CHECK(spectral_density(ar, 0.0) == doctest::Approx(1.0 / 0.36).epsilon(1e-12));
    CHECK(spectral_density(ar, 0.5) == doctest::Approx(1.0 / 1.96).epsilon(1e-12));
}

TEST_CASE("spectral density derivative")
{
    const auto ar = ModelSpec::ar1(0.4);
    CHECK(spectral_density_derivative(ar, 0.0) == doctest::Approx(0.0));
    CHECK(spectral_density_derivative(ModelSpec::white_noise(), 0.31) == 0.0);
    const double h = 1e-6;
    const double fd = (spectral_density(ar, 0.2 + h) - spectral_density(ar, 0.2 - h)) / (2 * h);
    CHECK(spectral_density_derivative(ar, 0.2) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("autocovariance values and Fourier sum")
{
    const auto wn = ModelSpec::white_noise();
    CHECK(autocovariance(wn, 0) == std::complex<double>(1.0));
    CHECK(autocovariance(wn, 3) == std::complex<double>(0.0));
    const auto ar = ModelSpec::ar1(0.4);
    CHECK(autocovariance(ar, 0).real() == doctest::Approx(1.0 / 0.84).epsilon(1e-12));
    CHECK(autocovariance(ar, 2).real() == doctest::Approx(0.16 / 0.84).epsilon(1e-12));
    CHECK(autocovariance(ar, -2) == std::conj(autocovariance(ar, 2)));

    for (double nu : {0.0, 0.13, 0.25, 0.4, 0.77}) {
        std::complex<double> sum = 0.0;
        for (long u = -200; u <= 200; ++u) {
            sum += autocovariance(ar, u) * std::polar(1.0, -2.0 * std::numbers::pi * u * nu);
        }
        CHECK(std::abs(sum.real() - spectral_density(ar, nu)) <= 1e-12 + 10 * std::pow(0.4, 200));
    }
}

TEST_CASE("density symmetry and bounds")
{
    for (double theta : {-0.7, 0.0, 0.4, 0.9}) {
        const auto m = ModelSpec::ar1(theta);
        for (int k = 0; k <= 50; ++k) {
            const double nu = k / 50.0;
            const double s = spectral_density(m, nu);
            CHECK(s == doctest::Approx(spectral_density(m, 1.0 - nu)).epsilon(1e-12));
            CHECK(s >= m.density_lower_bound() * (1 - 1e-12));
            CHECK(s <= m.density_upper_bound() * (1 + 1e-12));
        }
    }
}

TEST_CASE("model validation")
{
    CHECK_THROWS_AS(ModelSpec::ar1(1.0), InvalidArgument);
    CHECK_THROWS_AS(ModelSpec::ar1(-1.2), InvalidArgument);
    CHECK_THROWS_AS(ModelSpec::white_noise(2), InvalidArgument);
}

TEST_CASE("simulate_panel is deterministic")
{
    const auto a = simulate_panel(ModelSpec::ar1(0.4), 5, 300, 99);
    const auto b = simulate_panel(ModelSpec::ar1(0.4), 5, 300, 99);
    CHECK(a.data == b.data);
    const auto c = simulate_panel(ModelSpec::ar1(0.4), 5, 300, 100);
    CHECK(a.data != c.data);
}

TEST_CASE("theta zero matches white noise")
{
    const auto a = simulate_panel(ModelSpec::ar1(0.0), 3, 100, 5);
    const auto b = simulate_panel(ModelSpec::white_noise(), 3, 100, 5);
    CHECK(a.data == b.data);
}

TEST_CASE("white noise second moment")
{
    const auto p = simulate_panel(ModelSpec::white_noise(), 4, 50000, 11);
    for (Eigen::Index m = 0; m < 4; ++m) {
        const double mean = p.data.row(m).cwiseAbs2().mean();
        CHECK(mean >= 0.97);
        CHECK(mean <= 1.03);
    }
}

TEST_CASE("AR(1) lag-one autocorrelation")
{
    const auto p = simulate_panel(ModelSpec::ar1(0.4), 4, 50000, 12);
    const Eigen::Index N = p.sample_count();
    for (Eigen::Index m = 0; m < 4; ++m) {
        std::complex<double> r1 = 0.0;
        double r0 = 0.0;
        for (Eigen::Index n = 0; n < N; ++n) {
            r0 += std::norm(p.data(m, n));
            if (n + 1 < N) {
                r1 += p.data(m, n + 1) * std::conj(p.data(m, n));
            }
        }
        const double rho = r1.real() / r0;
        CHECK(rho >= 0.37);
        CHECK(rho <= 0.43);
    }
}

TEST_CASE("stationary initialization")
{
    // variance of the first sample across many rows should be 1/(1-theta^2)
    const auto p = simulate_panel(ModelSpec::ar1(0.8), 20000, 2, 3);
    const double v0 = p.data.col(0).cwiseAbs2().mean();
    CHECK(v0 == doctest::Approx(1.0 / 0.36).epsilon(0.05));
}

TEST_CASE("rows are uncorrelated")
{
    const long N = 4096;
    const auto p = simulate_panel(ModelSpec::ar1(0.4), 6, N, 21);
    for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) {
            const auto a = p.data.row(i);
            const auto b = p.data.row(j);
            const double corr =
                std::abs(a.dot(b)) / std::sqrt(a.squaredNorm() * b.squaredNorm());
            CHECK(corr <= 4.0 / std::sqrt(static_cast<double>(N)));
        }
    }
}
