#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ltccp/data/cohort.hpp"
#include "ltccp/data/features.hpp"
#include "ltccp/eval/metrics.hpp"
#include "ltccp/models/baselines.hpp"
#include "ltccp/models/ltccp.hpp"
#include "ltccp/synth/synthgen.hpp"

namespace ltccp::cli {

/// Parses the subset of TOML the run configs use: [section] headers,
/// key = value lines, # comments, and values that are strings, booleans,
/// integers, floats or single-line arrays of those. Returns one JSON object
/// per section (top-level keys at the root). Throws ConfigError with the
/// line number on anything else.
nlohmann::json parse_toml_subset(std::string_view text);

/// Everything a run needs. One global seed drives generation, the split and
/// training.
struct RunConfig {
    std::uint64_t seed = 0;
    synth::SynthParams synth;
    data::CohortConfig cohort;
    data::FeatureConfig features;
    data::SplitConfig split;
    bool skip_malformed = false;
    models::TrainConfig train;
    models::CartConfig cart;
    eval::EvalConfig eval;
    std::size_t histogram_bins = 30;
};

/// Command-line overrides; unset fields leave the document's value.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> epochs;
    std::optional<double> epsilon;
    std::optional<int> train_years;
    std::optional<int> horizon;
};

/// Builds and validates a config from a parsed document. Unknown sections or
/// keys, wrong value types and a missing seed are ConfigErrors.
RunConfig resolve_config(const nlohmann::json& doc, const Overrides& overrides = {});

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// Fully resolved config, every key explicit.
nlohmann::json to_json(const RunConfig& config);

}  // namespace ltccp::cli
