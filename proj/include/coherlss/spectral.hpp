#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coherlss/signal.hpp"

namespace coherlss {

enum class SpectralKind { smoothed_periodogram, coherency };

/// Hermitian M x M estimate at one frequency.
struct SpectralMatrix {
    Eigen::MatrixXcd values;
    double nu = 0.0;
    int B = 0;
    SpectralKind kind = SpectralKind::smoothed_periodogram;

    Eigen::Index dimension() const noexcept { return values.rows(); }
};

/// (1/sqrt(N)) sum_{n=1}^{N} y_n e^{-2 i pi (n-1) nu}.
std::complex<double> renormalized_dft(std::span<const std::complex<double>> y, double nu);

/// M x N table whose entry (m, k) is the renormalized DFT of row m at k/N.
Eigen::MatrixXcd dft_grid(const PanelMatrix& data);

/// Evaluates smoothed periodograms of one panel. The Fourier-grid table is
/// computed once at construction; frequencies on the grid k/N reuse it with
/// circular indexing, other frequencies fall back to direct sums.
///
/// Holds a reference to the panel data: the panel must outlive the estimator.
class SpectralEstimator {
public:
    explicit SpectralEstimator(const PanelMatrix& data);

    /// (1/(B+1)) sum_{b=-B/2}^{B/2} xi(nu + b/N) xi(nu + b/N)^*, with frequencies
    /// reduced mod 1. Throws InvalidArgument when B is odd or negative.
    SpectralMatrix smoothed_periodogram(double nu, int B) const;

    /// M x (B+1) matrix of the DFT vectors entering the average at nu.
    Eigen::MatrixXcd dft_vectors(double nu, int B) const;

    const Eigen::MatrixXcd& grid() const noexcept { return grid_; }
    Eigen::Index sample_count() const noexcept { return data_.cols(); }

private:
    const PanelMatrix& data_;
    Eigen::MatrixXcd grid_;
};

SpectralMatrix smoothed_periodogram(const TimeSeriesPanel& panel, double nu, int B);

/// diag(S)^{-1/2} S diag(S)^{-1/2}. Throws DegenerateEstimate if a diagonal
/// entry of S is not strictly positive.
SpectralMatrix coherency_matrix(const SpectralMatrix& S);

/// (1/N) sum_{n=1}^{N-l} y_{n+l} conj(y_n); zero for l >= N. Negative lags are
/// obtained by conjugation.
std::complex<double> biased_autocovariance(std::span<const std::complex<double>> y, long lag);

/// sum_{l=-L}^{L} rhat_l e^{-2 i pi l nu}. Real by conjugate symmetry; may be
/// negative since the rectangular lag window is not positive.
double lag_window_estimate(std::span<const std::complex<double>> y, int L, double nu);

/// d/dnu of lag_window_estimate, term by term.
double lag_window_derivative(std::span<const std::complex<double>> y, int L, double nu);

/// Biased autocovariances r_0..r_L of one series; estimate and derivative
/// cost O(L) per frequency.
class LagWindow {
public:
    LagWindow(std::span<const std::complex<double>> y, int L);

    double estimate(double nu) const;
    double derivative(double nu) const;
    int size() const noexcept { return static_cast<int>(acov_.size()) - 1; }

private:
    std::vector<std::complex<double>> acov_;
};

} // namespace coherlss
