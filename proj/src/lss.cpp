#include "coherlss/lss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coherlss/errors.hpp"
#include "coherlss/parallel.hpp"

namespace coherlss {

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& A)
{
    if (A.rows() != A.cols()) {
        throw InvalidArgument("hermitian_eigenvalues needs a square matrix");
    }
    if (A.size() == 0) {
        return {};
    }
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double asym = (A - A.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-10 * scale)) {
        throw InvalidArgument("matrix is not Hermitian (max |A - A^*| = " + std::to_string(asym) +
                              ")");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(A, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("Hermitian eigensolver did not converge");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end());
    return out;
}

double trace_functional(std::span<const double> eigenvalues, const SpectralFunction& f)
{
    if (eigenvalues.empty()) {
        throw InvalidArgument("trace_functional of an empty spectrum");
    }
    double acc = 0.0;
    for (const double lambda : eigenvalues) {
        if (f.requires_positive_domain() && lambda <= 1e-12) {
            throw DomainError("eigenvalue " + std::to_string(lambda) + " is too small for " +
                                  f.name() + " (rank-deficient coherency matrix?)",
                              lambda);
        }
        acc += f(lambda);
    }
    return acc / static_cast<double>(eigenvalues.size());
}

double trace_functional(const SpectralMatrix& C, const SpectralFunction& f)
{
    return trace_functional(hermitian_eigenvalues(C.values), f);
}

double v_n(int B, long N)
{
    if (B < 0 || B % 2 != 0 || N < 1) {
        throw InvalidArgument("v_n needs an even B >= 0 and N >= 1");
    }
    const int half = B / 2;
    double acc = 0.0;
    for (int b = -half; b <= half; ++b) {
        const double x = static_cast<double>(b) / static_cast<double>(N);
        acc += x * x;
    }
    return acc / static_cast<double>(B + 1);
}

double u_n(int B, long N)
{
    if (B < 1 || N < 1) {
        throw InvalidArgument("u_n needs B >= 1 and N >= 1");
    }
    const double b = B;
    const double n = static_cast<double>(N);
    const double ratio = b / n;
    return 1.0 / b + std::sqrt(b) / n + ratio * ratio * ratio;
}

double r_n_true(std::span<const ModelSpec> row_models, double nu)
{
    if (row_models.empty()) {
        throw InvalidArgument("r_n_true needs at least one row model");
    }
    double acc = 0.0;
    for (const ModelSpec& model : row_models) {
        acc += spectral_density_derivative(model, nu) / spectral_density(model, nu);
    }
    acc /= static_cast<double>(row_models.size());
    return acc * acc;
}

double r_n_true(const ModelSpec& model, double nu)
{
    return r_n_true(std::span<const ModelSpec>(&model, 1), nu);
}

int default_lag_window(long N, int gamma0)
{
    const double L = std::round(std::pow(static_cast<double>(N), 1.0 / (2.0 * gamma0 + 1.0)));
    return static_cast<int>(std::clamp<double>(L, 1.0, std::max(1.0, static_cast<double>(N - 1))));
}

PluginCorrection::PluginCorrection(const PanelMatrix& data, int L) : L_(L)
{
    if (L < 1 || L >= data.cols()) {
        throw InvalidArgument("plug-in correction needs 1 <= L < N");
    }
    rows_.reserve(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index m = 0; m < data.rows(); ++m) {
        const auto row = data.row(m);
        rows_.emplace_back(std::span<const std::complex<double>>(row.data(), row.size()), L);
    }
}

PluginEstimate PluginCorrection::at(double nu) const
{
    std::vector<double> density(rows_.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < rows_.size(); ++m) {
        density[m] = rows_[m].estimate(nu);
        peak = std::max(peak, density[m]);
    }
    if (!(peak > 0.0)) {
        throw DegenerateEstimate("every lag-window density estimate is non-positive at this "
                                 "frequency");
    }
    const double floor = 1e-6 * peak;
    PluginEstimate out;
    double acc = 0.0;
    for (std::size_t m = 0; m < rows_.size(); ++m) {
        double s = density[m];
        if (s < floor) {
            s = floor;
            ++out.floored;
        }
        acc += rows_[m].derivative(nu) / s;
    }
    acc /= static_cast<double>(rows_.size());
    out.value = acc * acc;
    return out;
}

PluginEstimate r_n_hat(const TimeSeriesPanel& panel, int L, double nu)
{
    return PluginCorrection(panel.data, L).at(nu);
}

std::string to_string(CorrectionMode mode)
{
    switch (mode) {
    case CorrectionMode::none:
        return "none";
    case CorrectionMode::oracle:
        return "oracle";
    case CorrectionMode::plugin:
        return "plugin";
    }
    return "unknown";
}

CorrectionMode correction_mode_from_string(const std::string& text)
{
    if (text == "none") {
        return CorrectionMode::none;
    }
    if (text == "oracle") {
        return CorrectionMode::oracle;
    }
    if (text == "plugin") {
        return CorrectionMode::plugin;
    }
    throw InvalidArgument("unknown correction mode '" + text + "'");
}

double LssConfig::effective_alpha() const
{
    if (alpha) {
        return *alpha;
    }
    return std::log(static_cast<double>(B)) / std::log(static_cast<double>(N));
}

int LssConfig::effective_lag_window() const { return L > 0 ? L : default_lag_window(N); }

bool LssConfig::correction_active() const { return effective_alpha() > 2.0 / 3.0; }

void LssConfig::validate() const
{
    if (N < 2) {
        throw ConfigError("N: need at least 2 samples");
    }
    if (M < 1) {
        throw ConfigError("M: need at least one series");
    }
    if (B < 2 || B % 2 != 0) {
        throw ConfigError("B: smoothing span must be an even integer >= 2");
    }
    if (B + 1 > N) {
        throw ConfigError("B: smoothing span B+1 must not exceed N");
    }
    const double c = ratio();
    if (!(c > 0.0 && c < 1.0)) {
        throw ConfigError("M: c_N = M/(B+1) must lie in (0, 1), got " + std::to_string(c) +
                          (f.requires_positive_domain() ? " (log needs B+1 > M)" : ""));
    }
    const double a = effective_alpha();
    if (!(a > 0.5 && a < 1.0)) {
        throw ConfigError("alpha: must lie in (1/2, 1), got " + std::to_string(a));
    }
    const int lag = effective_lag_window();
    if (lag < 1 || lag >= N) {
        throw ConfigError("L: lag window must satisfy 1 <= L < N");
    }
    for (const double nu : grid) {
        if (!std::isfinite(nu)) {
            throw ConfigError("grid: frequencies must be finite");
        }
    }
}

std::vector<double> default_grid(long N, int stride)
{
    if (N < 1) {
        throw InvalidArgument("default_grid needs N >= 1");
    }
    if (stride <= 0) {
        stride = static_cast<int>((N + 511) / 512);
    }
    std::vector<double> grid;
    for (long k = 0; k < N; k += stride) {
        grid.push_back(static_cast<double>(k) / static_cast<double>(N));
    }
    return grid;
}

double assemble_psi(double lss_raw, double r_term, double phi, double v, bool active)
{
    return active ? lss_raw - r_term * phi * v : lss_raw;
}

LssEvaluator::LssEvaluator(const TimeSeriesPanel& panel, LssConfig config,
                           std::optional<double> phi)
    : panel_(panel),
      config_(std::move(config)),
      law_(config_.ratio()),
      mp_mean_(0.0),
      phi_(0.0),
      v_(0.0),
      u_(0.0),
      spectral_(panel.data)
{
    config_.validate();
    if (panel.series_count() != config_.M || panel.sample_count() != config_.N) {
        throw ConfigError("panel shape does not match the configured (M, N)");
    }
    if (config_.grid.empty()) {
        config_.grid = default_grid(config_.N);
    }
    mp_mean_ = mp_integral(law_, config_.f);
    phi_ = phi ? *phi : distribution_action(CorrectionTransform::p, law_, config_.f);
    v_ = v_n(config_.B, config_.N);
    u_ = u_n(config_.B, config_.N);
    plugin_.emplace(panel.data, config_.effective_lag_window());
}

SpectralMatrix LssEvaluator::coherency(double nu) const
{
    return coherency_matrix(spectral_.smoothed_periodogram(nu, config_.B));
}

double LssEvaluator::lss_raw(double nu) const
{
    return trace_functional(coherency(nu), config_.f) - mp_mean_;
}

double LssEvaluator::r_oracle(double nu) const { return r_n_true(panel_.model, nu); }

PluginEstimate LssEvaluator::r_plugin(double nu) const
{
    return plugin_->at(nu);
}

LssRecord LssEvaluator::record_with_raw(double nu, double raw, CorrectionMode mode) const
{
    LssRecord rec;
    rec.nu = nu;
    rec.lss_raw = raw;
    rec.v_n = v_;
    rec.u_n = u_;
    rec.phi = phi_;
    switch (mode) {
    case CorrectionMode::none:
        rec.r_term = 0.0;
        break;
    case CorrectionMode::oracle:
        rec.r_term = r_oracle(nu);
        break;
    case CorrectionMode::plugin: {
        const PluginEstimate est = r_plugin(nu);
        rec.r_term = est.value;
        rec.floored = est.floored;
        break;
    }
    }
    const bool active = mode != CorrectionMode::none && config_.correction_active();
    rec.psi = assemble_psi(rec.lss_raw, rec.r_term, rec.phi, rec.v_n, active);
    return rec;
}

LssRecord LssEvaluator::record(double nu, CorrectionMode mode) const
{
    return record_with_raw(nu, lss_raw(nu), mode);
}

LssRecord LssEvaluator::record(const SpectralMatrix& C, CorrectionMode mode) const
{
    if (C.kind != SpectralKind::coherency) {
        throw InvalidArgument("record() expects a coherency matrix");
    }
    return record_with_raw(C.nu, trace_functional(C, config_.f) - mp_mean_, mode);
}

LssRecord psi_at(const TimeSeriesPanel& panel, const LssConfig& config, double nu)
{
    return LssEvaluator(panel, config).record(nu, config.correction_mode);
}

SupResult sup_over_records(std::vector<LssRecord> records)
{
    if (records.empty()) {
        throw InvalidArgument("sup over an empty frequency grid");
    }
    SupResult out;
    out.sup_abs = -1.0;
    out.sup_signed = -std::numeric_limits<double>::infinity();
    for (const LssRecord& rec : records) {
        const double a = std::abs(rec.psi);
        if (a > out.sup_abs || (a == out.sup_abs && rec.nu < out.argmax_nu)) {
            out.sup_abs = a;
            out.argmax_nu = rec.nu;
        }
        out.sup_signed = std::max(out.sup_signed, rec.psi);
    }
    out.records = std::move(records);
    return out;
}

SupResult sup_over_grid(const TimeSeriesPanel& panel, const LssConfig& config, int threads)
{
    const LssEvaluator evaluator(panel, config);
    const std::vector<double>& grid = evaluator.config().grid;
    std::vector<LssRecord> records(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        records[i] = evaluator.record(grid[i], config.correction_mode);
    });
    return sup_over_records(std::move(records));
}

} // namespace coherlss
