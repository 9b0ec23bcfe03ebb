#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coherlss/lss.hpp"
#include "coherlss/signal.hpp"

namespace coherlss {

/// Flat run configuration shared by every study. Defaults are the desk-scale
/// geometry: alpha ~ 0.73, c_N ~ 0.5, AR(1) rows with theta = 0.4.
struct ExperimentConfig {
    long N = 2048;
    int B = 256;
    long M = 128;
    /// 0: round(N^{1/7}).
    int L = 0;
    std::string model = "ar1";
    double theta = 0.4;
    std::string f = "square_centered";
    std::optional<double> alpha;
    /// 0: smallest stride keeping the grid at <= 512 points.
    int grid_stride = 0;
    int replicates = 20;
    std::uint64_t seed = 7;
    int threads = 0;

    // scaling study
    std::vector<long> m_list = {40, 80, 160};
    double c_target = 0.5;
    double scaling_alpha = 0.8;

    // eigenvalue localization
    double epsilon = 0.5;

    ModelSpec model_spec() const;
    LssConfig lss_config() const;
    std::vector<double> grid() const;
    /// Throws ConfigError naming the violated invariant.
    void validate() const;
};

/// Seed of replicate r: derive_seed(master, r).
std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate);

struct RunInfo {
    double wall_seconds = 0.0;
    long floored = 0;
};

struct SweepRow {
    double nu = 0.0;
    double lss_raw = 0.0;
    double v_n = 0.0;
    double r_oracle = 0.0;
    double r_plugin = 0.0;
    double phi = 0.0;
    double psi = 0.0;
    double psi_hat = 0.0;
    std::uint64_t seed = 0;
};

struct SweepResult {
    /// replicate-major, then grid order.
    std::vector<SweepRow> rows;
    /// One row per grid frequency, averaged over replicates (seed = 0).
    std::vector<SweepRow> mean_rows;
    std::vector<std::uint64_t> seeds;
    /// Share of grid frequencies whose replicate-averaged |psi| is below the
    /// replicate-averaged |lss_raw|.
    double fraction_improved = 0.0;
    double median_sup_lss = 0.0;
    double median_sup_psi = 0.0;
    double median_sup_psi_hat = 0.0;
    RunInfo info;
};

/// lss_raw with both the oracle and the plug-in correction at every grid
/// frequency, for cfg.replicates replicates.
SweepResult frequency_sweep(const ExperimentConfig& cfg);

struct ScalingRow {
    long M = 0;
    int B = 0;
    long N = 0;
    int L = 0;
    double median_sup_lss = 0.0;
    double median_sup_psi = 0.0;
    double median_sup_psi_hat = 0.0;
    /// (N/B)^2 and (N/B)^3
    double scale2 = 0.0;
    double scale3 = 0.0;
};

/// Sizes used by the scaling study for one M: B is the smallest even integer
/// with M/(B+1) <= c_target and N = round(B^{1/alpha}).
struct ScalingGeometry {
    int B;
    long N;
};
ScalingGeometry scaling_geometry(long M, double alpha, double c_target);

struct ScalingResult {
    std::vector<ScalingRow> rows;
    RunInfo info;
};

/// Medians over cfg.replicates of the three sup statistics for each M in
/// cfg.m_list, at alpha = cfg.scaling_alpha and c_N <= cfg.c_target.
ScalingResult scaling_study(const ExperimentConfig& cfg);

struct Quantiles {
    static constexpr std::array<double, 5> levels = {0.05, 0.25, 0.5, 0.75, 0.95};
    std::array<double, 5> values{};
};

/// Linear-interpolation sample quantiles at Quantiles::levels.
Quantiles quantiles(std::vector<double> sample);
double median(std::vector<double> sample);

struct HistogramResult {
    std::vector<double> sup_lss;
    std::vector<double> sup_psi;
    std::vector<double> sup_psi_hat;
    Quantiles q_lss;
    Quantiles q_psi;
    Quantiles q_psi_hat;
    RunInfo info;
};

/// `replicates` draws of sup|lss_raw|, sup|psi| and sup|psihat|.
HistogramResult histogram_study(const ExperimentConfig& cfg, int replicates);

struct LocalizationResult {
    bool pass = true;
    /// Largest distance of an eigenvalue outside [lambda-, lambda+] (0 if none).
    double worst_excursion = 0.0;
    double worst_nu = 0.0;
    std::uint64_t worst_seed = 0;
    long eigenvalues_checked = 0;
    long violations = 0;
};

/// Checks that every eigenvalue of C(nu) over all replicates and grid
/// frequencies lies in [(1-sqrt c)^2 - epsilon, (1+sqrt c)^2 + epsilon].
LocalizationResult eigenvalue_localization_check(const ExperimentConfig& cfg, int replicates,
                                                 double epsilon);

struct CovarianceRow {
    long N = 0;
    /// |E[xi(nu1) xi(nu2)^*] - s(nu1) [nu1 == nu2]|
    double deviation = 0.0;
    double scaled = 0.0; // deviation * N
};

/// Exact expectation of xi(nu1) xi(nu2)^* from the model autocovariance.
std::complex<double> exact_dft_covariance(const ModelSpec& model, long N, double nu1, double nu2);

/// nu2 - nu1 must be a multiple of 1/N for every N in the list.
std::vector<CovarianceRow> dft_covariance_check(const ModelSpec& model,
                                                const std::vector<long>& N_list, double nu1,
                                                double nu2);

} // namespace coherlss
