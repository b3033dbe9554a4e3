#include "ltccp/models/ltccp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ltccp/errors.hpp"
#include "ltccp/eval/metrics.hpp"
#include "ltccp/nn/checkpoint.hpp"

namespace ltccp::models {
namespace {

int train_years_of(const data::Sample& s) { return static_cast<int>(s.observed_features.size()) - 1; }

void check_sample(const data::Sample& s, std::size_t dim) {
    if (s.observed_features.empty()) throw StructuralError("paper " + s.paper_id + ": empty observed window");
    auto check = [&](const data::FeatureVector& x) {
        if (x.size() != dim) {
            throw StructuralError("paper " + s.paper_id + ": feature dimension " + std::to_string(x.size()) +
                                  " but the model expects " + std::to_string(dim));
        }
    };
    std::for_each(s.observed_features.begin(), s.observed_features.end(), check);
    std::for_each(s.future_features.begin(), s.future_features.end(), check);
}

double mean_validation_mape(const LtccpModel& model, std::span<const data::Sample> validation, Execution exec) {
    const auto preds = predict_ltccp_batch(model, validation, model.horizon, exec);
    double sum = 0.0;
    for (int t = 0; t < model.horizon; ++t) {
        std::vector<eval::Pair> pairs;
        pairs.reserve(preds.size());
        for (std::size_t i = 0; i < preds.size(); ++i) {
            pairs.push_back({preds[i].predicted[static_cast<std::size_t>(t)],
                             validation[i].targets[static_cast<std::size_t>(t)], validation[i].paper_id});
        }
        sum += eval::mape(pairs);
    }
    return sum / model.horizon;
}

}  // namespace

void TrainConfig::validate() const {
    if (!seed) throw ConfigError("train: seed is required");
    if (epochs < 0) throw ConfigError("train: epochs must be non-negative");
    if (batch_size == 0) throw ConfigError("train: batch_size must be positive");
    if (!(learning_rate > 0)) throw ConfigError("train: learning_rate must be positive");
    if (hidden_dim == 0) throw ConfigError("train: hidden_dim must be positive");
    if (patience < 0) throw ConfigError("train: patience must be non-negative");
    if (bins.num_bins < 2 || !(bins.low > 0) || !(bins.high > bins.low)) throw ConfigError("train: bad bin config");
    features.validate();
}

nn::SequenceExample make_example(const data::Sample& sample, std::span<const double> bin_edges) {
    const int train_years = train_years_of(sample);
    const std::size_t horizon = sample.targets.size();
    if (horizon == 0) throw StructuralError("paper " + sample.paper_id + ": no targets");
    if (sample.future_features.size() + 1 != horizon) {
        throw StructuralError("paper " + sample.paper_id + ": future features do not match the horizon");
    }
    nn::SequenceExample ex;
    ex.inputs = sample.observed_features;
    ex.inputs.insert(ex.inputs.end(), sample.future_features.begin(), sample.future_features.end());
    const std::size_t steps = ex.inputs.size();
    ex.targets.bins.assign(steps, 0);
    ex.targets.supervised.assign(steps, false);
    for (std::size_t k = 0; k < horizon; ++k) {
        const std::size_t s = static_cast<std::size_t>(train_years) + k;
        ex.targets.bins[s] = nn::bin_index(bin_edges, sample.targets[k]);
        ex.targets.supervised[s] = true;
    }
    return ex;
}

TrainResult train_ltccp(std::span<const data::Sample> train, std::span<const data::Sample> validation,
                        const TrainConfig& config, Execution exec) {
    config.validate();
    if (train.empty()) throw UsageError("train: empty training set");
    const std::size_t dim = config.features.dim();
    const std::size_t horizon = train.front().targets.size();
    for (const auto* set : {&train, &validation}) {
        for (const auto& s : *set) {
            check_sample(s, dim);
            if (s.targets.size() != horizon) throw StructuralError("paper " + s.paper_id + ": inconsistent horizon");
            if (train_years_of(s) != config.features.train_years) {
                throw StructuralError("paper " + s.paper_id + ": observed window differs from train_years");
            }
        }
    }

    const auto edges = nn::log_bin_edges(config.bins);
    LtccpModel model{nn::init_model(dim, config.hidden_dim, config.hidden_dim, edges, *config.seed), config.features,
                     static_cast<int>(horizon)};

    std::vector<nn::SequenceExample> train_ex, val_ex;
    for (const auto& s : train) train_ex.push_back(make_example(s, edges));
    for (const auto& s : validation) val_ex.push_back(make_example(s, edges));

    const auto nan = std::numeric_limits<double>::quiet_NaN();
    auto evaluate = [&](int epoch) {
        EpochLog log{epoch, nn::batch_loss(model.params, train_ex, exec) / static_cast<double>(train_ex.size()), nan, nan};
        if (!val_ex.empty()) {
            log.validation_loss = nn::batch_loss(model.params, val_ex, exec) / static_cast<double>(val_ex.size());
            log.validation_mape = mean_validation_mape(model, validation, exec);
        }
        if (!std::isfinite(log.train_loss)) throw TrainingError("non-finite training loss after epoch " + std::to_string(epoch));
        return log;
    };

    TrainResult result;
    result.curve.push_back(evaluate(0));
    LtccpModel best = model;
    double best_mape = result.curve.back().validation_mape;
    int since_best = 0;

    nn::AdamState adam;
    const nn::AdamHyper hyper{config.learning_rate, 0.9, 0.999, 1e-8, config.clip_norm};
    std::mt19937_64 rng(*config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(train_ex.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<nn::SequenceExample> batch;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            batch.clear();
            for (std::size_t i = start; i < end; ++i) batch.push_back(train_ex[order[i]]);
            auto bg = nn::batch_gradient(model.params, batch, exec);
            const std::string where = "epoch " + std::to_string(epoch) + ", step " + std::to_string(adam.step + 1);
            if (!std::isfinite(bg.loss_sum)) throw TrainingError("non-finite loss at " + where);
            bg.grad.scale(1.0 / static_cast<double>(batch.size()));
            try {
                nn::adam_step(model.params, bg.grad, adam, hyper);
            } catch (const TrainingError& e) {
                throw TrainingError(std::string(e.what()) + " (" + where + ")");
            }
        }
        result.curve.push_back(evaluate(epoch));
        if (val_ex.empty()) continue;
        if (result.curve.back().validation_mape < best_mape) {
            best_mape = result.curve.back().validation_mape;
            best = model;
            result.best_epoch = epoch;
            since_best = 0;
        } else if (config.patience > 0 && ++since_best >= config.patience) {
            break;
        }
    }
    if (val_ex.empty()) {
        best = model;
        result.best_epoch = result.curve.back().epoch;
    }
    result.model = std::move(best);
    return result;
}

Prediction predict_ltccp(const LtccpModel& model, const data::Sample& sample, int horizon, bool keep_distribution) {
    if (horizon < 0) throw UsageError("predict: negative horizon");
    Prediction out;
    out.paper_id = sample.paper_id;
    if (horizon == 0) return out;
    check_sample(sample, model.params.input_dim());
    if (sample.observed_cumulative.empty()) throw StructuralError("paper " + sample.paper_id + ": no observed counts");

    const int train_years = train_years_of(sample);
    const auto reps = nn::bin_representatives(model.params.bin_edges);
    auto state = nn::initial_rollout_state(model.params);
    nn::Vector probs;
    for (const auto& x : sample.observed_features) probs = nn::stacked_step(model.params, x, state);

    double prev = sample.observed_cumulative.back();
    const double last_observed = prev;
    for (int t = 1; t <= horizon; ++t) {
        if (t > 1) {
            const double before = t > 2 ? out.predicted[static_cast<std::size_t>(t - 3)] : last_observed;
            const auto x = data::featurize_values(prev - before, prev, train_years + t - 1, model.features);
            probs = nn::stacked_step(model.params, x, state);
        }
        const double v = std::max({nn::expected_count(probs, reps), prev, last_observed, 0.0});
        out.predicted.push_back(v);
        if (keep_distribution) out.distribution.push_back(probs);
        prev = v;
    }
    return out;
}

std::vector<Prediction> predict_ltccp_batch(const LtccpModel& model, std::span<const data::Sample> samples, int horizon,
                                            Execution exec) {
    std::vector<Prediction> out(samples.size());
    for_each_index(samples.size(), exec, [&](std::size_t i) { out[i] = predict_ltccp(model, samples[i], horizon); });
    return out;
}

void save_ltccp(const std::filesystem::path& path, const LtccpModel& model, const nlohmann::json& extra) {
    nlohmann::json meta = extra.is_object() ? extra : nlohmann::json::object();
    meta["features"] = model.features.names();
    meta["train_years"] = model.features.train_years;
    meta["horizon"] = model.horizon;
    nn::save_checkpoint(path, model.params, meta);
}

LtccpModel load_ltccp(const std::filesystem::path& path) {
    auto loaded = nn::load_checkpoint(path);
    LtccpModel model;
    model.params = std::move(loaded.model);
    try {
        model.features.features.clear();
        for (const auto& name : loaded.metadata.at("features")) {
            model.features.features.push_back(data::feature_from_name(name.get<std::string>()));
        }
        model.features.train_years = loaded.metadata.at("train_years").get<int>();
        model.horizon = loaded.metadata.at("horizon").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string() + ": checkpoint metadata: " + e.what());
    }
    if (model.features.dim() != model.params.input_dim()) {
        throw StructuralError(path.string() + ": feature list does not match the network input dimension");
    }
    return model;
}

}  // namespace ltccp::models
