#include "coherlss/signal.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "coherlss/errors.hpp"
#include "coherlss/random.hpp"

namespace coherlss {

ModelSpec::ModelSpec(ModelKind kind, double theta, int gamma0)
    : kind_(kind), theta_(theta), gamma0_(gamma0)
{
    if (gamma0 < 3) {
        throw InvalidArgument("gamma0 must be >= 3, got " + std::to_string(gamma0));
    }
    if (!(std::abs(theta) < 1.0)) {
        throw InvalidArgument("AR(1) coefficient must satisfy |theta| < 1");
    }
}

ModelSpec ModelSpec::white_noise(int gamma0) { return {ModelKind::white_noise, 0.0, gamma0}; }

ModelSpec ModelSpec::ar1(double theta, int gamma0) { return {ModelKind::ar1, theta, gamma0}; }

double ModelSpec::density_lower_bound() const noexcept
{
    const double d = 1.0 + std::abs(theta_);
    return 1.0 / (d * d);
}

double ModelSpec::density_upper_bound() const noexcept
{
    const double d = 1.0 - std::abs(theta_);
    return 1.0 / (d * d);
}

std::string ModelSpec::describe() const
{
    std::ostringstream os;
    if (kind_ == ModelKind::white_noise) {
        os << "white_noise";
    } else {
        os.precision(17);
        os << "ar1(theta=" << theta_ << ")";
    }
    return os.str();
}

double spectral_density(const ModelSpec& model, double nu)
{
    if (model.kind() == ModelKind::white_noise) {
        return 1.0;
    }
    const double th = model.theta();
    const double denom = 1.0 - 2.0 * th * std::cos(2.0 * std::numbers::pi * nu) + th * th;
    return 1.0 / denom;
}

double spectral_density_derivative(const ModelSpec& model, double nu)
{
    if (model.kind() == ModelKind::white_noise) {
        return 0.0;
    }
    const double th = model.theta();
    const double w = 2.0 * std::numbers::pi * nu;
    const double denom = 1.0 - 2.0 * th * std::cos(w) + th * th;
    return -4.0 * std::numbers::pi * th * std::sin(w) / (denom * denom);
}

std::complex<double> autocovariance(const ModelSpec& model, long lag)
{
    if (model.kind() == ModelKind::white_noise) {
        return lag == 0 ? 1.0 : 0.0;
    }
    const double th = model.theta();
    const long k = lag < 0 ? -lag : lag;
    return std::pow(th, static_cast<double>(k)) / (1.0 - th * th);
}

TimeSeriesPanel simulate_panel(const ModelSpec& model, Eigen::Index M, Eigen::Index N,
                               std::uint64_t seed)
{
    if (M < 1 || N < 1) {
        throw InvalidArgument("panel dimensions must be positive");
    }
    TimeSeriesPanel panel{PanelMatrix(M, N), model, seed};
    const double th = model.theta();
    const double stationary_variance = 1.0 / (1.0 - th * th);

#pragma omp parallel for schedule(static)
    for (Eigen::Index m = 0; m < M; ++m) {
        Engine engine = make_stream(seed, static_cast<std::uint64_t>(m));
        ComplexNormal innovation(1.0);
        auto row = panel.data.row(m);
        if (model.kind() == ModelKind::white_noise) {
            for (Eigen::Index n = 0; n < N; ++n) {
                row(n) = innovation(engine);
            }
            continue;
        }
        // Exact stationary start: y_1 ~ N_C(0, 1 / (1 - theta^2)).
        row(0) = innovation(engine) * std::sqrt(stationary_variance);
        for (Eigen::Index n = 1; n < N; ++n) {
            row(n) = th * row(n - 1) + innovation(engine);
        }
    }
    return panel;
}

} // namespace coherlss
