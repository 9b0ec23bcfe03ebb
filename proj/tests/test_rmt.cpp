#include <doctest.h>

#include <cmath>
#include <complex>

#include "coherlss/errors.hpp"
#include "coherlss/rmt.hpp"
#include "coherlss/spectral_function.hpp"
#include "support.hpp"

using namespace coherlss;
using cd = std::complex<double>;

TEST_CASE("density examples")
{
    const MarchenkoPastur law(0.25);
    CHECK(law.lambda_minus() == doctest::Approx(0.25));
    CHECK(law.lambda_plus() == doctest::Approx(2.25));
    CHECK(law.density(0.1) == 0.0);
    CHECK(law.density(law.lambda_minus()) == 0.0);
    CHECK(law.density(law.lambda_plus()) == 0.0);
    CHECK(law.density(5.0) == 0.0);
    CHECK(testing::mp_quadrature(0.5, [](double) { return 1.0; }) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(MarchenkoPastur(0.0), InvalidArgument);
    CHECK_THROWS_AS(MarchenkoPastur(1.0), InvalidArgument);
}

TEST_CASE("mp_integral examples and moments")
{
    const auto one = SpectralFunction::polynomial({1.0});
    const auto square = SpectralFunction::square_centered();
    const auto identity = SpectralFunction::from_name("identity");
    for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const MarchenkoPastur law(c);
        CHECK(std::abs(mp_integral(law, one) - 1.0) < 1e-10);
        CHECK(std::abs(mp_integral(law, square) - c) < 1e-8);
        CHECK(std::abs(mp_integral(law, identity) - 1.0) < 1e-8);
        for (int k = 1; k <= 4; ++k) {
            std::vector<double> coeffs(static_cast<std::size_t>(k) + 1, 0.0);
            coeffs.back() = 1.0;
            const double value = mp_integral(law, SpectralFunction::polynomial(coeffs));
            CHECK(std::abs(value - testing::mp_moment(k, c)) < 1e-7);
        }
    }
    CHECK(testing::mp_moment(2, 0.4) == doctest::Approx(1.4));
}

TEST_CASE("mp_integral against tanh-sinh")
{
    const auto f = SpectralFunction::callable("exp-sin", [](double x) {
        return std::exp(-x) * std::sin(3 * x);
    });
    for (double c : {0.2, 0.6}) {
        const double ref =
            testing::mp_quadrature(c, [](double x) { return std::exp(-x) * std::sin(3 * x); });
        CHECK(std::abs(mp_integral(MarchenkoPastur(c), f) - ref) < 1e-9);
    }
}

TEST_CASE("stieltjes transform")
{
    const MarchenkoPastur half(0.5);
    const cd z(1.0, 1.0);
    const cd t = half.stieltjes(z);
    CHECK(std::abs(0.5 * z * t * t + (z - 1.0 + 0.5) * t + 1.0) <= 1e-12);
    CHECK(std::abs(t - 1.0 / (-z + 1.0 / (1.0 + 0.5 * t))) <= 1e-12 * (1 + std::abs(t)));

    const cd big(0.0, 1e6);
    CHECK(std::abs(half.stieltjes(big) + 1.0 / big) <= 10 / std::norm(big));

    const cd z2(1.2, 0.3);
    CHECK(std::abs(MarchenkoPastur(0.25).stieltjes(z2) -
                   testing::mp_stieltjes_quadrature(0.25, z2)) <= 1e-7);

    CHECK_THROWS_AS(half.stieltjes(cd(1.0, 0.0)), InvalidArgument);
    CHECK_THROWS_AS(half.stieltjes(cd(1.0, -0.2)), InvalidArgument);
    CHECK_THROWS_AS(half.p_transform(cd(1.0, 0.0)), InvalidArgument);
}

TEST_CASE("stieltjes tilde")
{
    const MarchenkoPastur half(0.5);
    const cd z(0.5, 0.5);
    const cd t = half.stieltjes(z);
    const cd tt = half.stieltjes_tilde(z);
    CHECK(std::abs(t + 1.0 / (z * (1.0 + tt))) <= 1e-10);

    const cd z2(2.0, 1.0);
    const cd ref = 0.3 * testing::mp_stieltjes_quadrature(0.3, z2) + 0.7 * (-1.0 / z2);
    CHECK(std::abs(MarchenkoPastur(0.3).stieltjes_tilde(z2) - ref) <= 1e-7);

    const cd big(0.0, 1e6);
    CHECK(std::abs(half.stieltjes_tilde(big) + 1.0 / big) <= 10 / std::norm(big));
}

TEST_CASE("p and p tilde transforms")
{
    const MarchenkoPastur half(0.5);
    const cd big(0.0, 1e6);
    CHECK(std::abs(half.p_transform(big)) <= 10 * 0.5 / std::pow(std::abs(big), 3));
    CHECK(std::abs(half.p_tilde_transform(big)) <= 10 / std::norm(big));

    const cd z(1.0, 1.0);
    const cd p = half.p_transform(z);
    CHECK(std::abs(p) < 10);
    const double h = 1e-5;
    const cd dx = (half.p_transform(z + h) - half.p_transform(z - h)) / (2 * h);
    const cd dy = (half.p_transform(z + cd(0, h)) - half.p_transform(z - cd(0, h))) / cd(0, 2 * h);
    CHECK(std::abs(dx - dy) <= 1e-5 * std::max(1.0, std::abs(dx)));

    const cd z2(0.8, 0.4);
    const double step = 1e-6;
    auto zt = [&](cd w) { return w * half.stieltjes(w); };
    const cd deriv = (zt(z2 + step) - zt(z2 - step)) / (2 * step);
    const cd pt = half.p_tilde_transform(z2);
    CHECK(std::abs(pt - deriv) <= 1e-5 * std::abs(deriv));
}

TEST_CASE("continued transforms agree in the upper half plane")
{
    for (double c : {0.1, 0.5, 0.9}) {
        const MarchenkoPastur law(c);
        for (cd z : {cd(0.3, 0.2), cd(-1.0, 0.05), cd(3.5, 1.5)}) {
            CHECK(std::abs(law.stieltjes_continued(z) - law.stieltjes(z)) < 1e-13);
            CHECK(std::abs(law.p_continued(z) - law.p_transform(z)) < 1e-13);
            CHECK(std::abs(law.p_tilde_continued(z) - law.p_tilde_transform(z)) < 1e-13);
        }
        // real axis outside the support: real Stieltjes value
        const cd right = law.stieltjes_continued(cd(law.lambda_plus() + 1.0, 0.0));
        CHECK(std::abs(right.imag()) < 1e-14);
        CHECK(right.real() < 0.0);
    }
}

TEST_CASE("grid bounds on the upper half plane")
{
    for (double c : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const MarchenkoPastur law(c);
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                const cd z(-2.0 + 6.0 * i / 9.0, 0.05 + 1.95 * j / 9.0);
                const cd t = law.stieltjes(z);
                const cd tt = law.stieltjes_tilde(z);
                CHECK(t.imag() > 0.0);
                CHECK(tt.imag() > 0.0);
                CHECK(std::abs(t) <= 1.0 / z.imag() * (1 + 1e-12));
                CHECK(std::abs(1.0 / (1.0 + c * t)) <= std::abs(z) / z.imag() * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("distribution action examples")
{
    const MarchenkoPastur half(0.5);
    const auto zero = SpectralFunction::polynomial({0.0});
    for (auto method : {ActionMethod::inversion, ActionMethod::contour}) {
        CHECK(std::abs(distribution_action(CorrectionTransform::p, half,
                                           SpectralFunction::square_centered(), method) -
                       0.5) <= 1e-3);
        CHECK(std::abs(distribution_action(CorrectionTransform::p_tilde, half,
                                           SpectralFunction::log(), method) +
                       1.0) <= 1e-3);
        CHECK(distribution_action(CorrectionTransform::p, half, zero, method) == 0.0);
    }
}

TEST_CASE("distribution action is linear")
{
    const MarchenkoPastur law(0.4);
    const auto f = SpectralFunction::polynomial({0.5, -1.0, 0.25});
    const auto g = SpectralFunction::polynomial({0.0, 0.3, 0.0, 1.0});
    const auto h = SpectralFunction::combine(2.0, f, -0.7, g);
    for (auto tr : {CorrectionTransform::p, CorrectionTransform::p_tilde}) {
        for (auto method : {ActionMethod::inversion, ActionMethod::contour}) {
            const double lhs = distribution_action(tr, law, h, method);
            const double rhs = 2.0 * distribution_action(tr, law, f, method) -
                               0.7 * distribution_action(tr, law, g, method);
            CHECK(std::abs(lhs - rhs) <= 1e-6);
        }
    }
}

TEST_CASE("methods agree on smooth analytic functions")
{
    const auto f = SpectralFunction::callable(
        "exp", [](double x) { return std::exp(-x); }, [](cd z) { return std::exp(-z); });
    for (double c : {0.2, 0.6}) {
        const MarchenkoPastur law(c);
        for (auto tr : {CorrectionTransform::p, CorrectionTransform::p_tilde}) {
            CHECK(std::abs(distribution_action(tr, law, f, ActionMethod::inversion) -
                           distribution_action(tr, law, f, ActionMethod::contour)) <= 1e-3);
        }
    }
}

TEST_CASE("distribution action errors")
{
    const MarchenkoPastur half(0.5);
    ActionOptions wide;
    wide.margin = 0.2;
    CHECK_THROWS_AS(distribution_action(CorrectionTransform::p_tilde, half,
                                        SpectralFunction::log(), ActionMethod::inversion, wide),
                    DomainError);
    const auto rough =
        SpectralFunction::callable("abs", [](double x) { return std::abs(x - 1.0); });
    CHECK_FALSE(rough.is_analytic());
    CHECK_THROWS_AS(distribution_action(CorrectionTransform::p, half, rough,
                                        ActionMethod::contour),
                    InvalidArgument);
}
