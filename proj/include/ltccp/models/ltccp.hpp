#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "ltccp/data/cohort.hpp"
#include "ltccp/data/features.hpp"
#include "ltccp/nn/adam.hpp"
#include "ltccp/nn/batch_gradient.hpp"
#include "ltccp/nn/bins.hpp"
#include "ltccp/nn/stacked_model.hpp"
#include "ltccp/parallel.hpp"
#include "ltccp/prediction.hpp"

namespace ltccp::models {

struct TrainConfig {
    int epochs = 50;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double clip_norm = 5.0;
    std::size_t hidden_dim = 32;  // both layers
    int patience = 10;            // epochs without validation improvement; 0 disables early stopping
    nn::BinConfig bins;
    data::FeatureConfig features;
    std::optional<std::uint64_t> seed;  // required

    /// Throws ConfigError on non-positive sizes or a missing seed.
    void validate() const;
};

/// Network plus the data contract it was trained under.
struct LtccpModel {
    nn::StackedModelParams params;
    data::FeatureConfig features;
    int horizon = 0;

    bool operator==(const LtccpModel&) const = default;
};

struct EpochLog {
    int epoch = 0;  // 0 is the untrained model
    double train_loss = 0.0;
    double validation_loss = 0.0;   // NaN without a validation set
    double validation_mape = 0.0;   // mean over horizons, NaN without a validation set
};

struct TrainResult {
    LtccpModel model;  // best epoch by validation MAPE (last epoch without a validation set)
    std::vector<EpochLog> curve;
    int best_epoch = 0;
};

/// Teacher-forced training sequence: observed then future features as input,
/// step s supervised with the bin of cumulative[s + 1] for s >= train_years.
nn::SequenceExample make_example(const data::Sample& sample, std::span<const double> bin_edges);

/// Mini-batch Adam on mean cross-entropy. Deterministic in the config seed;
/// exec only selects how per-sequence gradients are computed.
/// Throws UsageError on an empty training set, StructuralError when sample
/// features do not match the configured dimension, and TrainingError (with
/// epoch and step) on a non-finite loss or gradient.
TrainResult train_ltccp(std::span<const data::Sample> train, std::span<const data::Sample> validation,
                        const TrainConfig& config, Execution exec = Execution::parallel);

/// Rolls the network through the observed window, then feeds its own point
/// forecasts back as features for the remaining horizon steps. Only
/// paper_id, observed_features and observed_cumulative are read.
/// Throws StructuralError on a feature-dimension mismatch.
Prediction predict_ltccp(const LtccpModel& model, const data::Sample& sample, int horizon,
                         bool keep_distribution = false);

std::vector<Prediction> predict_ltccp_batch(const LtccpModel& model, std::span<const data::Sample> samples,
                                            int horizon, Execution exec = Execution::parallel);

void save_ltccp(const std::filesystem::path& path, const LtccpModel& model, const nlohmann::json& extra = {});
LtccpModel load_ltccp(const std::filesystem::path& path);

}  // namespace ltccp::models
