#include "coherlss/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coherlss/errors.hpp"
#include "coherlss/experiments.hpp"
#include "coherlss/report.hpp"
#include "coherlss/rmt.hpp"

namespace coherlss::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
    std::string config_path;
    std::string out_dir = "results";
    std::uint64_t seed = 0;
    int threads = 0;
    int grid_stride = 0;
    int replicates = 0;
    bool quick = false;
    long N = 0;
    int B = 0;
    long M = 0;
    int L = 0;
    double theta = 0.0;
    double alpha = 0.0;
    std::string f;
    std::string model;
    std::vector<long> m_list;
    double c_target = 0.0;
    double epsilon = 0.0;
};

void apply_quick_preset(ExperimentConfig& cfg, const std::string& command)
{
    if (command == "validate") {
        cfg.replicates = 2;
        cfg.grid_stride = 16;
        return;
    }
    cfg.N = 256;
    cfg.B = 80;
    cfg.M = 40;
    cfg.replicates = command == "histogram" ? 20 : 4;
    cfg.m_list = {10, 20};
    if (command == "scaling") {
        cfg.replicates = 3;
    }
}

int parse_threads_env()
{
    const char* env = std::getenv("COHERLSS_THREADS");
    if (env == nullptr || *env == '\0') {
        return -1;
    }
    try {
        std::size_t used = 0;
        const int n = std::stoi(env, &used);
        if (used != std::string(env).size() || n < 0) {
            throw std::invalid_argument("bad");
        }
        return n;
    } catch (const std::exception&) {
        throw ConfigError(std::string("COHERLSS_THREADS must be a non-negative integer, got '") +
                          env + "'");
    }
}

ExperimentConfig resolve_config(const CLI::App& app, const Flags& flags,
                                const std::string& command)
{
    ExperimentConfig cfg;
    if (flags.quick) {
        apply_quick_preset(cfg, command);
    }
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            throw ConfigError("cannot open config file '" + flags.config_path + "'");
        }
        Json doc;
        try {
            doc = Json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config file '" + flags.config_path + "' is not valid JSON: " +
                              e.what());
        }
        cfg = config_from_json(doc, cfg);
    }
    auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
    if (given("--seed")) cfg.seed = flags.seed;
    if (given("--grid-stride")) cfg.grid_stride = flags.grid_stride;
    if (given("--replicates")) cfg.replicates = flags.replicates;
    if (given("--N")) cfg.N = flags.N;
    if (given("--B")) cfg.B = flags.B;
    if (given("--M")) cfg.M = flags.M;
    if (given("--L")) cfg.L = flags.L;
    if (given("--theta")) cfg.theta = flags.theta;
    if (given("--alpha")) cfg.alpha = flags.alpha;
    if (given("--f")) cfg.f = flags.f;
    if (given("--model")) cfg.model = flags.model;
    if (given("--m-list")) cfg.m_list = flags.m_list;
    if (given("--c-target")) cfg.c_target = flags.c_target;
    if (given("--epsilon")) cfg.epsilon = flags.epsilon;
    if (given("--threads")) {
        cfg.threads = flags.threads;
    } else if (const int env = parse_threads_env(); env >= 0) {
        cfg.threads = env;
    }
    cfg.validate();
    return cfg;
}

fs::path prepare_out_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigError("cannot create output directory '" + dir + "'");
    }
    return fs::path(dir);
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    os << content;
}

template <class Fn>
std::string render(Fn&& fn)
{
    std::ostringstream os;
    fn(os);
    return os.str();
}

int run_sweep(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out)
{
    const SweepResult res = frequency_sweep(cfg);
    write_file(dir / "sweep.csv",
               render([&](std::ostream& os) { write_sweep_csv(os, cfg, res.rows, false); }));
    write_file(dir / "sweep_mean.csv",
               render([&](std::ostream& os) { write_sweep_csv(os, cfg, res.mean_rows, true); }));
    Json summary = summary_header(cfg);
    summary["grid_points"] = res.mean_rows.size();
    summary["seeds"] = res.seeds;
    summary["fraction_improved"] = res.fraction_improved;
    summary["median_sup_lss"] = res.median_sup_lss;
    summary["median_sup_psi"] = res.median_sup_psi;
    summary["median_sup_psi_hat"] = res.median_sup_psi_hat;
    summary["floored"] = res.info.floored;
    write_file(dir / "sweep_summary.json", summary.dump(2) + "\n");
    out << "sweep: " << res.mean_rows.size() << " frequencies x " << res.seeds.size()
        << " replicates in " << std::fixed << std::setprecision(2) << res.info.wall_seconds
        << " s\n"
        << std::defaultfloat << std::setprecision(6)
        << "  median sup|lss_raw| = " << res.median_sup_lss
        << "\n  median sup|psi|     = " << res.median_sup_psi
        << "\n  median sup|psi_hat| = " << res.median_sup_psi_hat
        << "\n  fraction |psi| < |lss_raw| (replicate means) = " << res.fraction_improved << "\n"
        << "  wrote " << (dir / "sweep.csv").string() << "\n";
    return 0;
}

int run_scaling(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out)
{
    const ScalingResult res = scaling_study(cfg);
    write_file(dir / "scaling.csv",
               render([&](std::ostream& os) { write_scaling_csv(os, cfg, res); }));
    Json summary = summary_header(cfg);
    Json rows = Json::array();
    for (const ScalingRow& r : res.rows) {
        Json row;
        row["M"] = r.M;
        row["B"] = r.B;
        row["N"] = r.N;
        row["L"] = r.L;
        row["median_sup_lss"] = r.median_sup_lss;
        row["median_sup_psi"] = r.median_sup_psi;
        row["median_sup_psi_hat"] = r.median_sup_psi_hat;
        row["scale2"] = r.scale2;
        row["scale3"] = r.scale3;
        rows.push_back(row);
    }
    summary["rows"] = rows;
    write_file(dir / "scaling_summary.json", summary.dump(2) + "\n");
    out << "scaling: " << res.rows.size() << " sizes in " << std::fixed << std::setprecision(2)
        << res.info.wall_seconds << " s\n"
        << std::defaultfloat << std::setprecision(6);
    for (const ScalingRow& r : res.rows) {
        out << "  M=" << r.M << " B=" << r.B << " N=" << r.N
            << "  sup|lss|(N/B)^2=" << r.median_sup_lss * r.scale2
            << "  sup|psi|(N/B)^2=" << r.median_sup_psi * r.scale2
            << "  sup|psi|(N/B)^3=" << r.median_sup_psi * r.scale3 << "\n";
    }
    return 0;
}

int run_histogram(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out)
{
    const HistogramResult res = histogram_study(cfg, cfg.replicates);
    write_file(dir / "histogram.csv",
               render([&](std::ostream& os) { write_histogram_csv(os, cfg, res); }));
    Json summary = summary_header(cfg);
    summary["replicates"] = res.sup_lss.size();
    summary["sup_lss"] = quantiles_to_json(res.q_lss);
    summary["sup_psi"] = quantiles_to_json(res.q_psi);
    summary["sup_psi_hat"] = quantiles_to_json(res.q_psi_hat);
    summary["floored"] = res.info.floored;
    write_file(dir / "histogram_summary.json", summary.dump(2) + "\n");
    out << "histogram: " << res.sup_lss.size() << " replicates in " << std::fixed
        << std::setprecision(2) << res.info.wall_seconds << " s\n"
        << std::defaultfloat << std::setprecision(6)
        << "  median sup|lss_raw| = " << res.q_lss.values[2]
        << "\n  median sup|psi|     = " << res.q_psi.values[2]
        << "\n  median sup|psi_hat| = " << res.q_psi_hat.values[2] << "\n";
    return 0;
}

struct CheckLine {
    std::string name;
    std::string detail;
    bool pass;
};

int run_validate(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out)
{
    std::vector<CheckLine> lines;
    auto num = [](double x) {
        std::ostringstream os;
        os << std::setprecision(8) << x;
        return os.str();
    };

    const SpectralFunction square = SpectralFunction::square_centered();
    for (const double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const MarchenkoPastur law(c);
        const double inv =
            distribution_action(CorrectionTransform::p, law, square, ActionMethod::inversion);
        const double con =
            distribution_action(CorrectionTransform::p, law, square, ActionMethod::contour);
        lines.push_back({"phi((λ−1)²)=c", "c=" + num(c) + " inversion=" + num(inv) +
                                              " contour=" + num(con),
                         std::abs(inv - c) <= 1e-3 && std::abs(con - c) <= 1e-3});
        const double mean = mp_integral(law, square);
        lines.push_back({"∫(λ−1)² dMP=c", "c=" + num(c) + " value=" + num(mean),
                         std::abs(mean - c) <= 1e-6});
    }
    const SpectralFunction logf = SpectralFunction::log();
    for (const double c : {0.25, 0.5}) {
        const MarchenkoPastur law(c);
        const double inv =
            distribution_action(CorrectionTransform::p_tilde, law, logf, ActionMethod::inversion);
        const double con =
            distribution_action(CorrectionTransform::p_tilde, law, logf, ActionMethod::contour);
        lines.push_back({"phi~(log)=−1", "c=" + num(c) + " inversion=" + num(inv) +
                                             " contour=" + num(con),
                         std::abs(inv + 1.0) <= 1e-3 && std::abs(con + 1.0) <= 1e-3});
    }

    const auto cov = dft_covariance_check(ModelSpec::ar1(0.4), {256, 512, 1024}, 0.25, 0.25);
    double lo = cov.front().scaled;
    double hi = cov.front().scaled;
    std::string detail;
    for (const CovarianceRow& r : cov) {
        lo = std::min(lo, r.scaled);
        hi = std::max(hi, r.scaled);
        detail += "N=" + std::to_string(r.N) + ":" + num(r.scaled) + " ";
    }
    lines.push_back({"DFT covariance O(1/N)", "deviation*N " + detail, hi <= 3.0 * lo});

    const LocalizationResult loc =
        eigenvalue_localization_check(cfg, cfg.replicates, cfg.epsilon);
    lines.push_back({"eigenvalue localization",
                     "eps=" + num(cfg.epsilon) + " worst excursion=" + num(loc.worst_excursion) +
                         " eigenvalues=" + std::to_string(loc.eigenvalues_checked),
                     loc.pass});

    bool all = true;
    Json summary = summary_header(cfg);
    Json checks = Json::array();
    for (const CheckLine& line : lines) {
        out << (line.pass ? "PASS  " : "FAIL  ") << line.name << "  "
            << line.detail << "\n";
        all = all && line.pass;
        checks.push_back({{"check", line.name}, {"detail", line.detail}, {"pass", line.pass}});
    }
    summary["checks"] = checks;
    summary["all_pass"] = all;
    write_file(dir / "validate_summary.json", summary.dump(2) + "\n");
    out << (all ? "all checks passed\n" : "some checks FAILED\n");
    return all ? 0 : 1;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"coherlss: corrected linear spectral statistics of spectral coherency "
                 "matrices"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Flags flags;
    app.add_option("--config", flags.config_path, "JSON config file (flat keys)");
    app.add_option("--seed", flags.seed, "master seed");
    app.add_option("--out-dir", flags.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", flags.threads, "worker threads (0: runtime default)");
    app.add_option("--grid-stride", flags.grid_stride, "frequency grid stride k (nu = k*j/N)");
    app.add_option("--replicates", flags.replicates, "number of replicates");
    app.add_flag("--quick", flags.quick, "small preset for smoke runs");
    app.add_option("--N", flags.N, "sample size");
    app.add_option("--B", flags.B, "smoothing span (even)");
    app.add_option("--M", flags.M, "number of series");
    app.add_option("--L", flags.L, "lag-window size (0: default)");
    app.add_option("--theta", flags.theta, "AR(1) coefficient");
    app.add_option("--alpha", flags.alpha, "regime exponent override");
    app.add_option("--f", flags.f, "square_centered | log | identity");
    app.add_option("--model", flags.model, "ar1 | white_noise");
    app.add_option("--m-list", flags.m_list, "series counts for the scaling study");
    app.add_option("--c-target", flags.c_target, "target c_N for the scaling study");
    app.add_option("--epsilon", flags.epsilon, "localization margin");

    app.add_subcommand("sweep", "per-frequency LSS with oracle and plug-in corrections");
    app.add_subcommand("scaling", "sup statistics as functions of M");
    app.add_subcommand("histogram", "replicate distribution of sup statistics");
    app.add_subcommand("validate", "golden values, DFT covariance and localization checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const ExperimentConfig cfg = resolve_config(app, flags, command);
        const fs::path dir = prepare_out_dir(flags.out_dir);
        if (command == "sweep") {
            return run_sweep(cfg, dir, out);
        }
        if (command == "scaling") {
            return run_scaling(cfg, dir, out);
        }
        if (command == "histogram") {
            return run_histogram(cfg, dir, out);
        }
        return run_validate(cfg, dir, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace coherlss::cli
