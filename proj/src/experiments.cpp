#include "coherlss/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "coherlss/errors.hpp"
#include "coherlss/parallel.hpp"
#include "coherlss/random.hpp"
#include "coherlss/rmt.hpp"

namespace coherlss {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct ReplicateOutput {
    std::vector<SweepRow> rows;
    double sup_lss = 0.0;
    double sup_psi = 0.0;
    double sup_psi_hat = 0.0;
    long floored = 0;
};

ReplicateOutput run_replicate(const ModelSpec& model, const LssConfig& lss, double phi,
                              std::uint64_t seed, int threads)
{
    const TimeSeriesPanel panel = simulate_panel(model, lss.M, lss.N, seed);
    const LssEvaluator evaluator(panel, lss, phi);
    const std::vector<double>& grid = evaluator.config().grid;

    ReplicateOutput out;
    out.rows.resize(grid.size());
    std::vector<int> floored(grid.size(), 0);
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const double nu = grid[i];
        const double raw = evaluator.lss_raw(nu);
        const LssRecord oracle = evaluator.record_with_raw(nu, raw, CorrectionMode::oracle);
        const LssRecord plugin = evaluator.record_with_raw(nu, raw, CorrectionMode::plugin);
        SweepRow& row = out.rows[i];
        row.nu = nu;
        row.lss_raw = raw;
        row.v_n = oracle.v_n;
        row.r_oracle = oracle.r_term;
        row.r_plugin = plugin.r_term;
        row.phi = oracle.phi;
        row.psi = oracle.psi;
        row.psi_hat = plugin.psi;
        row.seed = seed;
        floored[i] = plugin.floored;
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const SweepRow& row = out.rows[i];
        out.sup_lss = std::max(out.sup_lss, std::abs(row.lss_raw));
        out.sup_psi = std::max(out.sup_psi, std::abs(row.psi));
        out.sup_psi_hat = std::max(out.sup_psi_hat, std::abs(row.psi_hat));
        out.floored += floored[i];
    }
    return out;
}

double phi_for(const LssConfig& lss)
{
    return distribution_action(CorrectionTransform::p, MarchenkoPastur(lss.ratio()), lss.f);
}

} // namespace

ModelSpec ExperimentConfig::model_spec() const
{
    if (model == "white_noise") {
        return ModelSpec::white_noise();
    }
    if (model == "ar1") {
        if (!(std::abs(theta) < 1.0)) {
            throw ConfigError("theta: AR(1) coefficient must satisfy |theta| < 1");
        }
        return ModelSpec::ar1(theta);
    }
    throw ConfigError("model: expected 'ar1' or 'white_noise', got '" + model + "'");
}

std::vector<double> ExperimentConfig::grid() const { return default_grid(N, grid_stride); }

LssConfig ExperimentConfig::lss_config() const
{
    LssConfig lss;
    lss.N = N;
    lss.B = B;
    lss.M = M;
    lss.alpha = alpha;
    lss.L = L;
    try {
        lss.f = SpectralFunction::from_name(f);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("f: ") + e.what());
    }
    lss.correction_mode = CorrectionMode::oracle;
    if (N >= 1 && grid_stride >= 0) {
        lss.grid = grid();
    }
    return lss;
}

void ExperimentConfig::validate() const
{
    model_spec();
    if (grid_stride < 0) {
        throw ConfigError("grid_stride: must be >= 0");
    }
    if (L < 0) {
        throw ConfigError("L: must be >= 0 (0 selects the default)");
    }
    lss_config().validate();
    if (replicates < 1) {
        throw ConfigError("replicates: need at least one replicate");
    }
    if (threads < 0) {
        throw ConfigError("threads: must be >= 0");
    }
    if (m_list.empty()) {
        throw ConfigError("m_list: must not be empty");
    }
    for (const long m : m_list) {
        if (m < 1) {
            throw ConfigError("m_list: every M must be >= 1");
        }
    }
    if (!(c_target > 0.0 && c_target < 1.0)) {
        throw ConfigError("c_target: must lie in (0, 1)");
    }
    if (!(scaling_alpha > 0.5 && scaling_alpha < 1.0)) {
        throw ConfigError("scaling_alpha: must lie in (1/2, 1)");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("epsilon: must be positive");
    }
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate)
{
    return derive_seed(master, replicate);
}

SweepResult frequency_sweep(const ExperimentConfig& cfg)
{
    const auto start = Clock::now();
    cfg.validate();
    const ModelSpec model = cfg.model_spec();
    const LssConfig lss = cfg.lss_config();
    const double phi = phi_for(lss);
    const std::size_t R = static_cast<std::size_t>(cfg.replicates);

    SweepResult result;
    std::vector<double> sup_lss;
    std::vector<double> sup_psi;
    std::vector<double> sup_psi_hat;
    for (std::size_t r = 0; r < R; ++r) {
        const std::uint64_t seed = replicate_seed(cfg.seed, r);
        ReplicateOutput rep = run_replicate(model, lss, phi, seed, cfg.threads);
        result.seeds.push_back(seed);
        sup_lss.push_back(rep.sup_lss);
        sup_psi.push_back(rep.sup_psi);
        sup_psi_hat.push_back(rep.sup_psi_hat);
        result.info.floored += rep.floored;
        result.rows.insert(result.rows.end(), rep.rows.begin(), rep.rows.end());
    }

    const std::size_t G = lss.grid.size();
    result.mean_rows.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
        SweepRow mean;
        mean.nu = lss.grid[g];
        for (std::size_t r = 0; r < R; ++r) {
            const SweepRow& row = result.rows[r * G + g];
            mean.lss_raw += row.lss_raw;
            mean.v_n += row.v_n;
            mean.r_oracle += row.r_oracle;
            mean.r_plugin += row.r_plugin;
            mean.phi += row.phi;
            mean.psi += row.psi;
            mean.psi_hat += row.psi_hat;
        }
        const double inv = 1.0 / static_cast<double>(R);
        mean.lss_raw *= inv;
        mean.v_n *= inv;
        mean.r_oracle *= inv;
        mean.r_plugin *= inv;
        mean.phi *= inv;
        mean.psi *= inv;
        mean.psi_hat *= inv;
        result.mean_rows[g] = mean;
    }
    std::size_t improved = 0;
    for (const SweepRow& row : result.mean_rows) {
        if (std::abs(row.psi) < std::abs(row.lss_raw)) {
            ++improved;
        }
    }
    result.fraction_improved = static_cast<double>(improved) / static_cast<double>(G);
    result.median_sup_lss = median(sup_lss);
    result.median_sup_psi = median(sup_psi);
    result.median_sup_psi_hat = median(sup_psi_hat);
    result.info.wall_seconds = seconds_since(start);
    return result;
}

ScalingGeometry scaling_geometry(long M, double alpha, double c_target)
{
    if (M < 1 || !(c_target > 0.0 && c_target < 1.0) || !(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("scaling geometry needs M >= 1, c_target in (0,1), alpha in (0,1]");
    }
    // Smallest even B with M <= c_target (B + 1).
    long B = static_cast<long>(std::ceil(static_cast<double>(M) / c_target - 1.0 - 1e-12));
    B = std::max(B, 2L);
    if (B % 2 != 0) {
        ++B;
    }
    const long N = std::lround(std::pow(static_cast<double>(B), 1.0 / alpha));
    return {static_cast<int>(B), N};
}

ScalingResult scaling_study(const ExperimentConfig& cfg)
{
    const auto start = Clock::now();
    cfg.validate();
    const ModelSpec model = cfg.model_spec();
    ScalingResult result;
    for (const long M : cfg.m_list) {
        const ScalingGeometry geo = scaling_geometry(M, cfg.scaling_alpha, cfg.c_target);
        ExperimentConfig local = cfg;
        local.M = M;
        local.B = geo.B;
        local.N = geo.N;
        local.L = 0;
        local.alpha = cfg.scaling_alpha;
        const LssConfig lss = local.lss_config();
        lss.validate();
        const double phi = phi_for(lss);
        const std::uint64_t master = derive_seed(cfg.seed, static_cast<std::uint64_t>(M));

        std::vector<double> sup_lss;
        std::vector<double> sup_psi;
        std::vector<double> sup_psi_hat;
        for (int r = 0; r < cfg.replicates; ++r) {
            const ReplicateOutput rep = run_replicate(
                model, lss, phi, replicate_seed(master, static_cast<std::size_t>(r)), cfg.threads);
            sup_lss.push_back(rep.sup_lss);
            sup_psi.push_back(rep.sup_psi);
            sup_psi_hat.push_back(rep.sup_psi_hat);
            result.info.floored += rep.floored;
        }
        ScalingRow row;
        row.M = M;
        row.B = geo.B;
        row.N = geo.N;
        row.L = lss.effective_lag_window();
        row.median_sup_lss = median(sup_lss);
        row.median_sup_psi = median(sup_psi);
        row.median_sup_psi_hat = median(sup_psi_hat);
        const double ratio = static_cast<double>(geo.N) / static_cast<double>(geo.B);
        row.scale2 = ratio * ratio;
        row.scale3 = ratio * ratio * ratio;
        result.rows.push_back(row);
    }
    result.info.wall_seconds = seconds_since(start);
    return result;
}

Quantiles quantiles(std::vector<double> sample)
{
    if (sample.empty()) {
        throw InvalidArgument("quantiles of an empty sample");
    }
    std::sort(sample.begin(), sample.end());
    Quantiles q;
    const double last = static_cast<double>(sample.size() - 1);
    for (std::size_t i = 0; i < Quantiles::levels.size(); ++i) {
        const double pos = Quantiles::levels[i] * last;
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, sample.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        q.values[i] = sample[lo] + frac * (sample[hi] - sample[lo]);
    }
    return q;
}

double median(std::vector<double> sample) { return quantiles(std::move(sample)).values[2]; }

HistogramResult histogram_study(const ExperimentConfig& cfg, int replicates)
{
    const auto start = Clock::now();
    if (replicates < 1) {
        throw InvalidArgument("histogram study needs at least one replicate");
    }
    cfg.validate();
    const ModelSpec model = cfg.model_spec();
    const LssConfig lss = cfg.lss_config();
    const double phi = phi_for(lss);
    HistogramResult result;
    for (int r = 0; r < replicates; ++r) {
        const ReplicateOutput rep = run_replicate(
            model, lss, phi, replicate_seed(cfg.seed, static_cast<std::size_t>(r)), cfg.threads);
        result.sup_lss.push_back(rep.sup_lss);
        result.sup_psi.push_back(rep.sup_psi);
        result.sup_psi_hat.push_back(rep.sup_psi_hat);
        result.info.floored += rep.floored;
    }
    result.q_lss = quantiles(result.sup_lss);
    result.q_psi = quantiles(result.sup_psi);
    result.q_psi_hat = quantiles(result.sup_psi_hat);
    result.info.wall_seconds = seconds_since(start);
    return result;
}

LocalizationResult eigenvalue_localization_check(const ExperimentConfig& cfg, int replicates,
                                                 double epsilon)
{
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("localization check needs epsilon > 0");
    }
    cfg.validate();
    const ModelSpec model = cfg.model_spec();
    const LssConfig lss = cfg.lss_config();
    const MarchenkoPastur law(lss.ratio());
    const double lo = law.lambda_minus();
    const double hi = law.lambda_plus();

    LocalizationResult result;
    for (int r = 0; r < replicates; ++r) {
        const std::uint64_t seed = replicate_seed(cfg.seed, static_cast<std::size_t>(r));
        const TimeSeriesPanel panel = simulate_panel(model, lss.M, lss.N, seed);
        const SpectralEstimator spectral(panel.data);
        std::vector<double> excursion(lss.grid.size(), 0.0);
        std::vector<long> violations(lss.grid.size(), 0);
        parallel_for(lss.grid.size(), cfg.threads, [&](std::size_t i) {
            const SpectralMatrix C =
                coherency_matrix(spectral.smoothed_periodogram(lss.grid[i], lss.B));
            for (const double ev : hermitian_eigenvalues(C.values)) {
                const double out = std::max({lo - ev, ev - hi, 0.0});
                excursion[i] = std::max(excursion[i], out);
                if (out > epsilon) {
                    ++violations[i];
                }
            }
        });
        for (std::size_t i = 0; i < lss.grid.size(); ++i) {
            result.eigenvalues_checked += lss.M;
            result.violations += violations[i];
            if (excursion[i] > result.worst_excursion) {
                result.worst_excursion = excursion[i];
                result.worst_nu = lss.grid[i];
                result.worst_seed = seed;
            }
        }
    }
    result.pass = result.violations == 0;
    return result;
}

namespace {

// e^{2 i pi j k / N} with the exponent reduced exactly in integers.
std::complex<double> root_of_unity(long j, long k, long N)
{
    long e = (j % N) * (k % N) % N;
    if (e < 0) {
        e += N;
    }
    const double a = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(N);
    return {std::cos(a), std::sin(a)};
}

// sum_{j=first}^{first+count-1} e^{2 i pi j k / N}
std::complex<double> geometric_sum(long first, long count, long k, long N)
{
    if (count <= 0) {
        return 0.0;
    }
    if (k % N == 0) {
        return static_cast<double>(count);
    }
    const std::complex<double> q = root_of_unity(1, k, N);
    return root_of_unity(first, k, N) * (1.0 - root_of_unity(count, k, N)) / (1.0 - q);
}

} // namespace

std::complex<double> exact_dft_covariance(const ModelSpec& model, long N, double nu1, double nu2)
{
    if (N < 1) {
        throw InvalidArgument("exact_dft_covariance needs N >= 1");
    }
    const double shift = (nu2 - nu1) * static_cast<double>(N);
    const double k_real = std::round(shift);
    if (std::abs(shift - k_real) > 1e-9) {
        throw InvalidArgument("nu2 - nu1 must be a multiple of 1/N");
    }
    long k = static_cast<long>(k_real) % N;
    if (k < 0) {
        k += N;
    }
    // E = (1/N) sum_u r_u e^{-2 i pi u nu1} sum_{n2} e^{2 i pi n2 (nu2 - nu1)}, with n2 over
    // [0, N-1-u] for u >= 0 and [-u, N-1] for u < 0.
    std::complex<double> acc = 0.0;
    for (long u = -(N - 1); u <= N - 1; ++u) {
        const std::complex<double> r = autocovariance(model, u);
        if (u != 0 && std::abs(r) < 1e-16) {
            continue;
        }
        const double turns = static_cast<double>(u) * nu1;
        const double a = -2.0 * std::numbers::pi * (turns - std::floor(turns));
        const std::complex<double> phase(std::cos(a), std::sin(a));
        const long first = u >= 0 ? 0 : -u;
        const long count = N - (u >= 0 ? u : -u);
        acc += r * (u == 0 ? 1.0 : phase) * geometric_sum(first, count, k, N);
    }
    return acc / static_cast<double>(N);
}

std::vector<CovarianceRow> dft_covariance_check(const ModelSpec& model,
                                                const std::vector<long>& N_list, double nu1,
                                                double nu2)
{
    std::vector<CovarianceRow> rows;
    for (const long N : N_list) {
        const std::complex<double> e = exact_dft_covariance(model, N, nu1, nu2);
        const double shift = (nu2 - nu1) * static_cast<double>(N);
        const bool same = std::lround(shift) % N == 0;
        const double target = same ? spectral_density(model, nu1) : 0.0;
        CovarianceRow row;
        row.N = N;
        row.deviation = std::abs(e - target);
        row.scaled = row.deviation * static_cast<double>(N);
        rows.push_back(row);
    }
    return rows;
}

} // namespace coherlss
