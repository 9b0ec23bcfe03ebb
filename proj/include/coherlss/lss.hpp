#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coherlss/rmt.hpp"
#include "coherlss/signal.hpp"
#include "coherlss/spectral.hpp"
#include "coherlss/spectral_function.hpp"

namespace coherlss {

/// Ascending eigenvalues of a Hermitian matrix. Throws InvalidArgument when
/// A deviates from A^* by more than 1e-10 relative to its largest entry.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& A);

/// (1/M) sum_i f(lambda_i(C)). For log, any eigenvalue <= 1e-12 raises a
/// DomainError carrying that eigenvalue.
double trace_functional(const SpectralMatrix& C, const SpectralFunction& f);
double trace_functional(std::span<const double> eigenvalues, const SpectralFunction& f);

/// (1/(B+1)) sum_{b=-B/2}^{B/2} (b/N)^2, summed directly.
double v_n(int B, long N);

/// 1/B + sqrt(B)/N + (B/N)^3.
double u_n(int B, long N);

/// ((1/M) sum_m s'_m(nu) / s_m(nu))^2 over per-row models.
double r_n_true(std::span<const ModelSpec> row_models, double nu);
/// Same for M identical rows: (s'(nu)/s(nu))^2.
double r_n_true(const ModelSpec& model, double nu);

/// round(N^{1/(2 gamma0 + 1)}), at least 1 and below N.
int default_lag_window(long N, int gamma0 = 3);

struct PluginEstimate {
    double value = 0.0;
    /// Rows whose lag-window density estimate was raised to the floor.
    int floored = 0;
};

/// Lag-window estimates of all rows of a panel, reusable across frequencies.
class PluginCorrection {
public:
    PluginCorrection(const PanelMatrix& data, int L);

    /// ((1/M) sum_m shat'_m / shat_m)^2 with each shat_m floored at
    /// 1e-6 * max_m shat_m. Throws DegenerateEstimate when every shat_m <= 0.
    PluginEstimate at(double nu) const;

    int lag_window() const noexcept { return L_; }

private:
    int L_;
    std::vector<LagWindow> rows_;
};

PluginEstimate r_n_hat(const TimeSeriesPanel& panel, int L, double nu);

enum class CorrectionMode { none, oracle, plugin };

std::string to_string(CorrectionMode mode);
CorrectionMode correction_mode_from_string(const std::string& text);

/// Sizes and choices for one corrected LSS evaluation.
struct LssConfig {
    long N = 0;
    int B = 0;
    long M = 0;
    /// Unset: log B / log N.
    std::optional<double> alpha;
    /// Lag-window size for the plug-in correction; 0 picks default_lag_window(N).
    int L = 0;
    SpectralFunction f = SpectralFunction::square_centered();
    CorrectionMode correction_mode = CorrectionMode::oracle;
    std::vector<double> grid;

    double ratio() const noexcept { return static_cast<double>(M) / (B + 1); }
    double effective_alpha() const;
    int effective_lag_window() const;
    /// The O((B/N)^2) correction is applied iff alpha > 2/3 strictly.
    bool correction_active() const;

    /// Throws ConfigError naming the violated invariant.
    void validate() const;
};

/// Fourier frequencies k*stride/N; stride 0 picks the smallest stride giving
/// at most 512 points.
std::vector<double> default_grid(long N, int stride = 0);

struct LssRecord {
    double nu = 0.0;
    /// (1/M) tr f(C(nu)) - int f dMP_{c_N}
    double lss_raw = 0.0;
    double v_n = 0.0;
    double u_n = 0.0;
    /// r_N(nu) or rhat_N(nu) according to the mode; 0 for none.
    double r_term = 0.0;
    double phi = 0.0;
    double psi = 0.0;
    int floored = 0;
};

/// lss_raw - r_term * phi * v_n * [alpha > 2/3], written once so every caller
/// assembles psi bit-identically.
double assemble_psi(double lss_raw, double r_term, double phi, double v, bool active);

/// Evaluates corrected statistics over one panel. The frequency-independent
/// pieces (int f dMP, phi_N(f), v_N, u_N, DFT grid, lag windows) are computed
/// once at construction.
///
/// Keeps a reference to the panel: it must outlive the evaluator.
class LssEvaluator {
public:
    /// `phi` may be supplied when the caller already computed phi_N(f) for c_N.
    LssEvaluator(const TimeSeriesPanel& panel, LssConfig config,
                 std::optional<double> phi = std::nullopt);

    /// C(nu) for this panel.
    SpectralMatrix coherency(double nu) const;

    /// Raw statistic (1/M) tr f(C(nu)) - int f dMP, sharing one C(nu).
    double lss_raw(double nu) const;

    double r_oracle(double nu) const;
    PluginEstimate r_plugin(double nu) const;

    LssRecord record(double nu, CorrectionMode mode) const;
    /// Record for a caller-provided coherency matrix.
    LssRecord record(const SpectralMatrix& C, CorrectionMode mode) const;
    /// Record around an already computed raw statistic.
    LssRecord record_with_raw(double nu, double raw, CorrectionMode mode) const;

    const LssConfig& config() const noexcept { return config_; }
    double phi() const noexcept { return phi_; }
    double mp_mean() const noexcept { return mp_mean_; }
    double v() const noexcept { return v_; }
    double u() const noexcept { return u_; }

private:
    const TimeSeriesPanel& panel_;
    LssConfig config_;
    MarchenkoPastur law_;
    double mp_mean_;
    double phi_;
    double v_;
    double u_;
    SpectralEstimator spectral_;
    std::optional<PluginCorrection> plugin_;
};

LssRecord psi_at(const TimeSeriesPanel& panel, const LssConfig& config, double nu);

struct SupResult {
    double sup_abs = 0.0;
    double argmax_nu = 0.0;
    /// max_nu psi (signed), reported alongside sup |psi|.
    double sup_signed = 0.0;
    std::vector<LssRecord> records;
};

/// Largest |psi| over config.grid; ties go to the smallest nu.
SupResult sup_over_grid(const TimeSeriesPanel& panel, const LssConfig& config, int threads = 0);
SupResult sup_over_records(std::vector<LssRecord> records);

} // namespace coherlss
