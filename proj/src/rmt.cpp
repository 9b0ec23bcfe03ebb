#include "coherlss/rmt.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "coherlss/errors.hpp"

namespace coherlss {

using cplx = std::complex<double>;

MarchenkoPastur::MarchenkoPastur(double c) : c_(c)
{
    if (!(c > 0.0 && c < 1.0)) {
        throw InvalidArgument("Marchenko-Pastur ratio must lie in (0, 1), got " +
                              std::to_string(c));
    }
    const double s = std::sqrt(c);
    lambda_minus_ = (1.0 - s) * (1.0 - s);
    lambda_plus_ = (1.0 + s) * (1.0 + s);
}

double MarchenkoPastur::density(double lambda) const
{
    if (lambda <= lambda_minus_ || lambda >= lambda_plus_) {
        return 0.0;
    }
    return std::sqrt((lambda_plus_ - lambda) * (lambda - lambda_minus_)) /
           (2.0 * std::numbers::pi * c_ * lambda);
}

cplx MarchenkoPastur::fixed_point(cplx z) const
{
    cplx t = -1.0 / z;
    for (int it = 0; it < 500; ++it) {
        const cplx next = 1.0 / (-z + 1.0 / (1.0 + c_ * t));
        if (std::abs(next - t) <= 1e-15 * (1.0 + std::abs(t))) {
            return next;
        }
        t = next;
    }
    return t;
}

cplx MarchenkoPastur::stieltjes_continued(cplx z) const
{
    if (z.imag() == 0.0 && z.real() >= lambda_minus_ && z.real() <= lambda_plus_) {
        throw InvalidArgument("Stieltjes transform is not defined on the support");
    }
    // (z - l-)(z - l+) = (z - 1 + c)^2 - 4cz; the product of principal roots is
    // analytic off [l-, l+] and behaves like z at infinity.
    const cplx b = z - 1.0 + c_;
    const cplx d = std::sqrt(z - lambda_minus_) * std::sqrt(z - lambda_plus_);
    const cplx u = -b + d;
    const cplx v = -b - d;
    // u / (2cz) == 2 / v; take the form without cancellation.
    cplx t = std::abs(u) >= std::abs(v) ? u / (2.0 * c_ * z) : 2.0 / v;
    if (z.imag() > 0.0 && !(t.imag() > 0.0)) {
        t = fixed_point(z);
    }
    return t;
}

cplx MarchenkoPastur::w_of(cplx z) const
{
    // z t t~ with t~ = -1/(z(1 + ct)); the z cancels.
    const cplx t = stieltjes_continued(z);
    return -t / (1.0 + c_ * t);
}

namespace {

void require_upper_half_plane(cplx z)
{
    if (!(z.imag() > 0.0)) {
        throw InvalidArgument("transform requires Im z > 0");
    }
}

cplx guarded_denominator(double c, cplx w)
{
    const cplx den = 1.0 - c * w * w;
    if (std::abs(den) < 1e-14) {
        throw NumericalFailure("1 - c w^2 vanishes: z is at a singular point of the transform");
    }
    return den;
}

} // namespace

cplx MarchenkoPastur::p_continued(cplx z) const
{
    const cplx w = w_of(z);
    return -c_ * w * w * w / guarded_denominator(c_, w);
}

cplx MarchenkoPastur::p_tilde_continued(cplx z) const
{
    const cplx w = w_of(z);
    return w * w / guarded_denominator(c_, w);
}

cplx MarchenkoPastur::stieltjes(cplx z) const
{
    require_upper_half_plane(z);
    return stieltjes_continued(z);
}

cplx MarchenkoPastur::stieltjes_tilde(cplx z) const
{
    require_upper_half_plane(z);
    return -1.0 / (z * (1.0 + c_ * stieltjes_continued(z)));
}

cplx MarchenkoPastur::p_transform(cplx z) const
{
    require_upper_half_plane(z);
    return p_continued(z);
}

cplx MarchenkoPastur::p_tilde_transform(cplx z) const
{
    require_upper_half_plane(z);
    return p_tilde_continued(z);
}

double mp_integral(const MarchenkoPastur& law, const SpectralFunction& f)
{
    using boost::math::quadrature::gauss_kronrod;
    const double c = law.ratio();
    const double center = 0.5 * (law.lambda_minus() + law.lambda_plus());
    const double radius = 0.5 * (law.lambda_plus() - law.lambda_minus());
    auto integrand = [&](double t) {
        const double ct = std::cos(t);
        const double lambda = center + radius * std::sin(t);
        return f(lambda) * radius * radius * ct * ct / (2.0 * std::numbers::pi * c * lambda);
    };
    double error = 0.0;
    const double half_pi = 0.5 * std::numbers::pi;
    const double value =
        gauss_kronrod<double, 31>::integrate(integrand, -half_pi, half_pi, 15, 1e-13, &error);
    if (!std::isfinite(value) || error > 1e-8) {
        throw NumericalFailure("mp_integral: quadrature error estimate " + std::to_string(error) +
                               " exceeds 1e-8");
    }
    return value;
}

namespace {

cplx evaluate_transform(CorrectionTransform transform, const MarchenkoPastur& law, cplx z)
{
    return transform == CorrectionTransform::p ? law.p_continued(z) : law.p_tilde_continued(z);
}

// Polynomial extrapolation of samples (h_i, v_i) to h = 0 (Neville).
double extrapolate_to_zero(std::span<const double> h, std::vector<double> v)
{
    const std::size_t n = v.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            const double hi = h[i];
            const double hj = h[i + level];
            v[i] = (hi * v[i + 1] - hj * v[i]) / (hi - hj);
        }
    }
    return v[0];
}

double inversion_action(CorrectionTransform transform, const MarchenkoPastur& law,
                        const SpectralFunction& f, double a1, double a2,
                        std::span<const double> heights)
{
    using boost::math::quadrature::gauss_kronrod;
    const std::array<double, 4> breaks = {a1, law.lambda_minus(), law.lambda_plus(), a2};
    std::vector<double> samples;
    samples.reserve(heights.size());
    for (const double y : heights) {
        auto integrand = [&](double x) {
            return f(x) * evaluate_transform(transform, law, cplx(x, y)).imag();
        };
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            double error = 0.0;
            total += gauss_kronrod<double, 61>::integrate(integrand, breaks[i], breaks[i + 1], 25,
                                                          1e-11, &error);
            if (!std::isfinite(total) || error > 1e-7) {
                throw NumericalFailure("inversion quadrature did not converge at height " +
                                       std::to_string(y));
            }
        }
        samples.push_back(total / std::numbers::pi);
    }
    return extrapolate_to_zero(heights, std::move(samples));
}

double contour_action(CorrectionTransform transform, const MarchenkoPastur& law,
                      const SpectralFunction& f, double a1, double a2, double h, int nodes)
{
    if (!f.is_analytic()) {
        throw InvalidArgument("contour method needs a holomorphic extension of '" + f.name() +
                              "'");
    }
    if (h <= 0.0 || nodes < 8) {
        throw InvalidArgument("contour needs a positive half-height and at least 8 nodes");
    }
    // Counterclockwise; the action is -(1/2 i pi) times this integral.
    const std::array<cplx, 5> corners = {cplx(a1, -h), cplx(a2, -h), cplx(a2, h), cplx(a1, h),
                                         cplx(a1, -h)};
    double perimeter = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
        perimeter += std::abs(corners[s + 1] - corners[s]);
    }
    cplx integral = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
        const cplx edge = corners[s + 1] - corners[s];
        const int k = std::max(2, static_cast<int>(std::lround(nodes * std::abs(edge) / perimeter)));
        cplx sum = 0.0;
        for (int j = 0; j <= k; ++j) {
            const cplx z = corners[s] + edge * (static_cast<double>(j) / k);
            const cplx g = f(z) * evaluate_transform(transform, law, z);
            sum += (j == 0 || j == k) ? 0.5 * g : g;
        }
        integral += sum * edge / static_cast<double>(k);
    }
    const cplx action = -integral / cplx(0.0, 2.0 * std::numbers::pi);
    return action.real();
}

} // namespace

double distribution_action(CorrectionTransform transform, const MarchenkoPastur& law,
                           const SpectralFunction& f, ActionMethod method,
                           const ActionOptions& options)
{
    double margin = 0.1;
    if (options.margin) {
        margin = *options.margin;
    } else if (f.requires_positive_domain()) {
        margin = std::min(0.1, 0.5 * law.lambda_minus());
    }
    if (!(margin > 0.0)) {
        throw InvalidArgument("integration margin must be positive");
    }
    const double a1 = law.lambda_minus() - margin;
    const double a2 = law.lambda_plus() + margin;
    if (f.requires_positive_domain() && a1 <= 0.0) {
        throw DomainError("integration interval reaches the non-positive axis where '" +
                              f.name() + "' is undefined",
                          a1);
    }
    if (method == ActionMethod::contour) {
        return contour_action(transform, law, f, a1, a2, options.contour_half_height,
                              options.contour_nodes);
    }
    return inversion_action(transform, law, f, a1, a2, options.heights);
}

double distribution_action(CorrectionTransform transform, const MarchenkoPastur& law,
                           const SpectralFunction& f)
{
    const ActionMethod method = f.is_analytic() ? ActionMethod::contour : ActionMethod::inversion;
    return distribution_action(transform, law, f, method);
}

} // namespace coherlss
