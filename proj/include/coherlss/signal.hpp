#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace coherlss {

/// Row-major; one time series per row.
using PanelMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ModelKind { white_noise, ar1 };

/// Generating model of each scalar series. Only white noise and AR(1) with a
/// real coefficient are provided; new kinds extend the enum.
class ModelSpec {
public:
    static ModelSpec white_noise(int gamma0 = 3);
    /// Throws InvalidArgument unless |theta| < 1 and gamma0 >= 3.
    static ModelSpec ar1(double theta, int gamma0 = 3);

    ModelKind kind() const noexcept { return kind_; }
    /// AR coefficient; 0 for white noise.
    double theta() const noexcept { return theta_; }
    int gamma0() const noexcept { return gamma0_; }

    /// Lower and upper bounds of the spectral density over [0, 1).
    double density_lower_bound() const noexcept;
    double density_upper_bound() const noexcept;

    std::string describe() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

private:
    ModelSpec(ModelKind kind, double theta, int gamma0);

    ModelKind kind_;
    double theta_;
    int gamma0_;
};

struct TimeSeriesPanel {
    PanelMatrix data; // M x N
    ModelSpec model;
    std::uint64_t seed = 0;

    Eigen::Index series_count() const noexcept { return data.rows(); }
    Eigen::Index sample_count() const noexcept { return data.cols(); }
};

/// s(nu) = 1 / |1 - theta e^{-2 i pi nu}|^2.
double spectral_density(const ModelSpec& model, double nu);

/// ds/dnu = -4 pi theta sin(2 pi nu) / (1 - 2 theta cos(2 pi nu) + theta^2)^2.
double spectral_density_derivative(const ModelSpec& model, double nu);

/// r_u = E[y_{n+u} conj(y_n)]; theta^{|u|} / (1 - theta^2) for AR(1).
std::complex<double> autocovariance(const ModelSpec& model, long lag);

/// M independent stationary series of length N. Row m draws from stream
/// (seed, m), so the result does not depend on how rows are scheduled.
TimeSeriesPanel simulate_panel(const ModelSpec& model, Eigen::Index M, Eigen::Index N,
                               std::uint64_t seed);

} // namespace coherlss
