#pragma once

#include <array>
#include <complex>
#include <optional>

#include "coherlss/spectral_function.hpp"

namespace coherlss {

/// Marchenko-Pastur law with ratio c in (0, 1) and its transforms.
///
/// t is the Stieltjes transform of the law, solving c z t^2 + (z - 1 + c) t + 1 = 0.
/// t~ = -1/(z(1 + c t)) is the transform of c*MP + (1 - c)*delta_0. With
/// w = z t t~, the correction transforms are p = -c w^3 / (1 - c w^2) and
/// p~ = w^2 / (1 - c w^2) = (z t)'. All four are evaluated for Im z > 0.
class MarchenkoPastur {
public:
    /// Throws InvalidArgument unless 0 < c < 1.
    explicit MarchenkoPastur(double c);

    double ratio() const noexcept { return c_; }
    double lambda_minus() const noexcept { return lambda_minus_; }
    double lambda_plus() const noexcept { return lambda_plus_; }

    double density(double lambda) const;

    std::complex<double> stieltjes(std::complex<double> z) const;
    std::complex<double> stieltjes_tilde(std::complex<double> z) const;
    std::complex<double> p_transform(std::complex<double> z) const;
    std::complex<double> p_tilde_transform(std::complex<double> z) const;

    /// Same transforms continued to every z off the support (including the
    /// lower half plane through conjugate symmetry and real points outside
    /// [lambda-, lambda+]). Used by contour integration.
    std::complex<double> stieltjes_continued(std::complex<double> z) const;
    std::complex<double> p_continued(std::complex<double> z) const;
    std::complex<double> p_tilde_continued(std::complex<double> z) const;

private:
    std::complex<double> w_of(std::complex<double> z) const;
    std::complex<double> fixed_point(std::complex<double> z) const;

    double c_;
    double lambda_minus_;
    double lambda_plus_;
};

/// Integral of f against the Marchenko-Pastur density, via adaptive
/// Gauss-Kronrod after lambda = center + radius * sin(t), which removes the
/// square-root edge behaviour. Throws NumericalFailure above 1e-8 error.
double mp_integral(const MarchenkoPastur& law, const SpectralFunction& f);

enum class CorrectionTransform { p, p_tilde };
enum class ActionMethod { inversion, contour };

struct ActionOptions {
    /// a1 = lambda- - margin, a2 = lambda+ + margin. Unset: 0.1, reduced to
    /// lambda-/2 when f needs a positive domain.
    std::optional<double> margin;
    double contour_half_height = 0.5;
    int contour_nodes = 2048;
    std::array<double, 4> heights = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
};

/// Action of f on the compactly supported distribution whose Stieltjes
/// transform is p (phi_N) or p~ (phi~_N).
///
/// inversion: (1/pi) int_{a1}^{a2} f(x) Im T(x + i y) dx at each height,
///            Richardson-extrapolated to y -> 0.
/// contour:   (1/2 i pi) times the integral of f T over the boundary of
///            [a1, a2] x [-h, h], traversed clockwise, by the trapezoid rule.
///            Requires a holomorphic f.
double distribution_action(CorrectionTransform transform, const MarchenkoPastur& law,
                           const SpectralFunction& f, ActionMethod method,
                           const ActionOptions& options = {});

/// Contour route when f is analytic, inversion otherwise.
double distribution_action(CorrectionTransform transform, const MarchenkoPastur& law,
                           const SpectralFunction& f);

} // namespace coherlss
