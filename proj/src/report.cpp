#include "coherlss/report.hpp"

#include <cstdio>
#include <string>
#include <type_traits>

#include "coherlss/errors.hpp"
#include "coherlss/version.hpp"

namespace coherlss {

namespace {

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
T read_key(const Json& doc, const std::string& key)
{
    const Json& v = doc.at(key);
    bool ok = false;
    if constexpr (std::is_same_v<T, std::string>) {
        ok = v.is_string();
    } else if constexpr (std::is_same_v<T, std::vector<long>>) {
        ok = v.is_array();
        for (const auto& e : v) {
            ok = ok && e.is_number_integer();
        }
    } else if constexpr (std::is_integral_v<T>) {
        ok = v.is_number_integer() && (std::is_signed_v<T> || !v.is_number_float());
        if constexpr (std::is_unsigned_v<T>) {
            ok = ok && (v.is_number_unsigned() || v.get<long long>() >= 0);
        }
    } else {
        ok = v.is_number();
    }
    if (!ok) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
    return v.get<T>();
}

} // namespace

Json config_to_json(const ExperimentConfig& cfg)
{
    Json j;
    j["N"] = cfg.N;
    j["B"] = cfg.B;
    j["M"] = cfg.M;
    j["L"] = cfg.L;
    j["model"] = cfg.model;
    j["theta"] = cfg.theta;
    j["f"] = cfg.f;
    j["alpha"] = cfg.alpha ? Json(*cfg.alpha) : Json(nullptr);
    j["grid_stride"] = cfg.grid_stride;
    j["replicates"] = cfg.replicates;
    j["seed"] = cfg.seed;
    j["m_list"] = cfg.m_list;
    j["c_target"] = cfg.c_target;
    j["scaling_alpha"] = cfg.scaling_alpha;
    j["epsilon"] = cfg.epsilon;
    return j;
}

ExperimentConfig config_from_json(const Json& doc, ExperimentConfig base)
{
    if (!doc.is_object()) {
        throw ConfigError("config file must hold a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "N") {
            base.N = read_key<long>(doc, key);
        } else if (key == "B") {
            base.B = read_key<int>(doc, key);
        } else if (key == "M") {
            base.M = read_key<long>(doc, key);
        } else if (key == "L") {
            base.L = read_key<int>(doc, key);
        } else if (key == "model") {
            base.model = read_key<std::string>(doc, key);
        } else if (key == "theta") {
            base.theta = read_key<double>(doc, key);
        } else if (key == "f") {
            base.f = read_key<std::string>(doc, key);
        } else if (key == "alpha") {
            if (value.is_null()) {
                base.alpha.reset();
            } else {
                base.alpha = read_key<double>(doc, key);
            }
        } else if (key == "grid_stride") {
            base.grid_stride = read_key<int>(doc, key);
        } else if (key == "replicates") {
            base.replicates = read_key<int>(doc, key);
        } else if (key == "seed") {
            base.seed = read_key<std::uint64_t>(doc, key);
        } else if (key == "threads") {
            base.threads = read_key<int>(doc, key);
        } else if (key == "m_list") {
            base.m_list = read_key<std::vector<long>>(doc, key);
        } else if (key == "c_target") {
            base.c_target = read_key<double>(doc, key);
        } else if (key == "scaling_alpha") {
            base.scaling_alpha = read_key<double>(doc, key);
        } else if (key == "epsilon") {
            base.epsilon = read_key<double>(doc, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return base;
}

void write_metadata_block(std::ostream& os, const ExperimentConfig& cfg)
{
    os << "# coherlss " << kVersion << "\n";
    os << "# config: " << config_to_json(cfg).dump() << "\n";
}

void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg,
                     const std::vector<SweepRow>& rows, bool averaged)
{
    write_metadata_block(os, cfg);
    os << "nu,lss_raw,v_n,r_oracle,r_plugin,phi,psi,psi_hat,seed\n";
    for (const SweepRow& r : rows) {
        os << fmt(r.nu) << ',' << fmt(r.lss_raw) << ',' << fmt(r.v_n) << ',' << fmt(r.r_oracle)
           << ',' << fmt(r.r_plugin) << ',' << fmt(r.phi) << ',' << fmt(r.psi) << ','
           << fmt(r.psi_hat) << ',';
        if (averaged) {
            os << "mean";
        } else {
            os << r.seed;
        }
        os << '\n';
    }
}

void write_scaling_csv(std::ostream& os, const ExperimentConfig& cfg, const ScalingResult& result)
{
    write_metadata_block(os, cfg);
    os << "M,B,N,L,sup_lss,sup_psi,sup_psi_hat,sup_lss_x2,sup_psi_x2,sup_psi_hat_x2,"
          "sup_psi_x3,sup_psi_hat_x3\n";
    for (const ScalingRow& r : result.rows) {
        os << r.M << ',' << r.B << ',' << r.N << ',' << r.L << ',' << fmt(r.median_sup_lss) << ','
           << fmt(r.median_sup_psi) << ',' << fmt(r.median_sup_psi_hat) << ','
           << fmt(r.median_sup_lss * r.scale2) << ',' << fmt(r.median_sup_psi * r.scale2) << ','
           << fmt(r.median_sup_psi_hat * r.scale2) << ',' << fmt(r.median_sup_psi * r.scale3)
           << ',' << fmt(r.median_sup_psi_hat * r.scale3) << '\n';
    }
}

void write_histogram_csv(std::ostream& os, const ExperimentConfig& cfg,
                         const HistogramResult& result)
{
    write_metadata_block(os, cfg);
    os << "replicate,sup_lss,sup_psi,sup_psi_hat\n";
    for (std::size_t i = 0; i < result.sup_lss.size(); ++i) {
        os << i << ',' << fmt(result.sup_lss[i]) << ',' << fmt(result.sup_psi[i]) << ','
           << fmt(result.sup_psi_hat[i]) << '\n';
    }
}

Json summary_header(const ExperimentConfig& cfg)
{
    Json j;
    j["version"] = std::string(kVersion);
    j["config"] = config_to_json(cfg);
    return j;
}

Json quantiles_to_json(const Quantiles& q)
{
    Json j;
    for (std::size_t i = 0; i < Quantiles::levels.size(); ++i) {
        const int pct = static_cast<int>(Quantiles::levels[i] * 100.0 + 0.5);
        j["q" + std::to_string(pct)] = q.values[i];
    }
    return j;
}

} // namespace coherlss
