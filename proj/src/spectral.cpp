#include "coherlss/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "coherlss/errors.hpp"

namespace coherlss {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

double wrap_unit(double x)
{
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

std::complex<double> unit_phase(double turns)
{
    const double a = -2.0 * std::numbers::pi * wrap_unit(turns);
    return {std::cos(a), std::sin(a)};
}

// Index k when nu = k/N up to rounding, -1 otherwise.
Eigen::Index fourier_index(double nu, Eigen::Index N)
{
    const double k = wrap_unit(nu) * static_cast<double>(N);
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9) {
        return -1;
    }
    return static_cast<Eigen::Index>(r) % N;
}

void require_even_span(int B)
{
    if (B < 0 || B % 2 != 0) {
        throw InvalidArgument("smoothing span B must be a non-negative even integer, got " +
                              std::to_string(B));
    }
}

} // namespace

std::complex<double> renormalized_dft(std::span<const std::complex<double>> y, double nu)
{
    if (y.empty()) {
        throw InvalidArgument("renormalized_dft needs at least one sample");
    }
    const double f = wrap_unit(nu);
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) {
        acc += y[n] * unit_phase(static_cast<double>(n) * f);
    }
    return acc / std::sqrt(static_cast<double>(y.size()));
}

Eigen::MatrixXcd dft_grid(const PanelMatrix& data)
{
    const Eigen::Index M = data.rows();
    const Eigen::Index N = data.cols();
    PanelMatrix in = data;
    PanelMatrix out(M, N);
    auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());

    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        const int n = static_cast<int>(N);
        plan = fftw_plan_many_dft(1, &n, static_cast<int>(M), in_ptr, nullptr, 1, n, out_ptr,
                                  nullptr, 1, n, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        throw NumericalFailure("FFTW could not build a plan");
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out / std::sqrt(static_cast<double>(N));
}

SpectralEstimator::SpectralEstimator(const PanelMatrix& data) : data_(data), grid_(dft_grid(data))
{}

Eigen::MatrixXcd SpectralEstimator::dft_vectors(double nu, int B) const
{
    require_even_span(B);
    const Eigen::Index M = data_.rows();
    const Eigen::Index N = data_.cols();
    const int half = B / 2;
    Eigen::MatrixXcd Z(M, B + 1);

    const Eigen::Index k0 = fourier_index(nu, N);
    if (k0 >= 0) {
        for (int b = -half; b <= half; ++b) {
            const Eigen::Index k = ((k0 + b) % N + N) % N;
            Z.col(b + half) = grid_.col(k);
        }
        return Z;
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    Eigen::VectorXcd phase(N);
    for (int b = -half; b <= half; ++b) {
        const double f = wrap_unit(nu + static_cast<double>(b) / static_cast<double>(N));
        for (Eigen::Index n = 0; n < N; ++n) {
            phase(n) = unit_phase(static_cast<double>(n) * f);
        }
        Z.col(b + half) = (data_ * phase) * scale;
    }
    return Z;
}

SpectralMatrix SpectralEstimator::smoothed_periodogram(double nu, int B) const
{
    const Eigen::MatrixXcd Z = dft_vectors(nu, B);
    Eigen::MatrixXcd S = Z * Z.adjoint() / static_cast<double>(B + 1);
    // Store the exactly Hermitian part.
    Eigen::MatrixXcd H = 0.5 * (S + S.adjoint());
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
        H(i, i) = H(i, i).real();
    }
    return {std::move(H), nu, B, SpectralKind::smoothed_periodogram};
}

SpectralMatrix smoothed_periodogram(const TimeSeriesPanel& panel, double nu, int B)
{
    require_even_span(B);
    return SpectralEstimator(panel.data).smoothed_periodogram(nu, B);
}

SpectralMatrix coherency_matrix(const SpectralMatrix& S)
{
    const Eigen::Index M = S.values.rows();
    Eigen::VectorXd inv_sqrt(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        const double d = S.values(i, i).real();
        if (!(d > 0.0)) {
            throw DegenerateEstimate("coherency: diagonal entry " + std::to_string(i) +
                                     " of the spectral estimate is not positive "
                                     "(smoothing span too small or zero-power series)");
        }
        inv_sqrt(i) = 1.0 / std::sqrt(d);
    }
    Eigen::MatrixXcd C = inv_sqrt.asDiagonal() * S.values * inv_sqrt.asDiagonal();
    for (Eigen::Index i = 0; i < M; ++i) {
        C(i, i) = 1.0;
    }
    return {std::move(C), S.nu, S.B, SpectralKind::coherency};
}

std::complex<double> biased_autocovariance(std::span<const std::complex<double>> y, long lag)
{
    if (lag < 0) {
        return std::conj(biased_autocovariance(y, -lag));
    }
    const auto N = static_cast<long>(y.size());
    if (lag >= N) {
        return 0.0;
    }
    std::complex<double> acc = 0.0;
    for (long n = 0; n + lag < N; ++n) {
        acc += y[n + lag] * std::conj(y[n]);
    }
    return acc / static_cast<double>(N);
}

LagWindow::LagWindow(std::span<const std::complex<double>> y, int L)
{
    if (L < 0 || static_cast<std::size_t>(L) >= y.size()) {
        throw InvalidArgument("lag window size must satisfy 0 <= L < N");
    }
    acov_.reserve(static_cast<std::size_t>(L) + 1);
    for (int l = 0; l <= L; ++l) {
        acov_.push_back(biased_autocovariance(y, l));
    }
}

double LagWindow::estimate(double nu) const
{
    std::complex<double> acc = acov_[0];
    for (std::size_t l = 1; l < acov_.size(); ++l) {
        const std::complex<double> e = unit_phase(static_cast<double>(l) * wrap_unit(nu));
        acc += acov_[l] * e + std::conj(acov_[l]) * std::conj(e);
    }
    if (std::abs(acc.imag()) > 1e-10 * (1.0 + std::abs(acc.real()))) {
        throw NumericalFailure("lag-window estimate has a non-negligible imaginary part");
    }
    return acc.real();
}

double LagWindow::derivative(double nu) const
{
    std::complex<double> acc = 0.0;
    for (std::size_t l = 1; l < acov_.size(); ++l) {
        const std::complex<double> e = unit_phase(static_cast<double>(l) * wrap_unit(nu));
        const std::complex<double> k(0.0, -2.0 * std::numbers::pi * static_cast<double>(l));
        // Lags +l and -l: (-2i pi l) r_l e + (2i pi l) conj(r_l) conj(e).
        acc += k * acov_[l] * e - k * std::conj(acov_[l]) * std::conj(e);
    }
    return acc.real();
}

double lag_window_estimate(std::span<const std::complex<double>> y, int L, double nu)
{
    return LagWindow(y, L).estimate(nu);
}

double lag_window_derivative(std::span<const std::complex<double>> y, int L, double nu)
{
    return LagWindow(y, L).derivative(nu);
}

} // namespace coherlss
