#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "coherlss/experiments.hpp"

namespace coherlss {

using Json = nlohmann::ordered_json;

/// Flat JSON echo of every resolved configuration field.
Json config_to_json(const ExperimentConfig& cfg);

/// Applies the keys of `doc` on top of `base`. Unknown keys and wrongly typed
/// values raise ConfigError naming the key.
ExperimentConfig config_from_json(const Json& doc, ExperimentConfig base = {});

/// "# coherlss <version>" and "# config: <json>" lines that open every CSV.
void write_metadata_block(std::ostream& os, const ExperimentConfig& cfg);

/// Columns: nu, lss_raw, v_n, r_oracle, r_plugin, phi, psi, psi_hat, seed.
/// With `averaged` the seed column reads "mean".
void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg,
                     const std::vector<SweepRow>& rows, bool averaged);

void write_scaling_csv(std::ostream& os, const ExperimentConfig& cfg, const ScalingResult& result);

void write_histogram_csv(std::ostream& os, const ExperimentConfig& cfg,
                         const HistogramResult& result);

/// Summary document starting with "version" and "config".
Json summary_header(const ExperimentConfig& cfg);

Json quantiles_to_json(const Quantiles& q);

} // namespace coherlss
