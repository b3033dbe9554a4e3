#include "ltccp/data/features.hpp"

#include <algorithm>
#include <cmath>

#include "ltccp/errors.hpp"

namespace ltccp::data {

std::string feature_name(Feature f) {
    switch (f) {
        case Feature::log_new: return "log_new";
        case Feature::log_cumulative: return "log_cumulative";
        case Feature::age: return "age";
    }
    return "unknown";
}

Feature feature_from_name(const std::string& name) {
    for (auto f : {Feature::log_new, Feature::log_cumulative, Feature::age}) {
        if (feature_name(f) == name) return f;
    }
    throw ConfigError("unknown feature '" + name + "' (expected log_new, log_cumulative or age)");
}

std::vector<std::string> FeatureConfig::names() const {
    std::vector<std::string> out;
    for (auto f : features) out.push_back(feature_name(f));
    return out;
}

void FeatureConfig::validate() const {
    if (features.empty()) throw ConfigError("feature config: no features selected");
    if (train_years <= 0) throw ConfigError("feature config: train_years must be positive");
    auto sorted = features;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ConfigError("feature config: duplicate feature");
    }
}

FeatureVector featurize_values(double new_citations, double cumulative, int t, const FeatureConfig& config) {
    FeatureVector x;
    x.reserve(config.dim());
    for (auto f : config.features) {
        switch (f) {
            case Feature::log_new: x.push_back(std::log1p(std::max(new_citations, 0.0))); break;
            case Feature::log_cumulative: x.push_back(std::log1p(std::max(cumulative, 0.0))); break;
            case Feature::age: x.push_back(static_cast<double>(t) / config.train_years); break;
        }
    }
    return x;
}

FeatureVector featurize(const CitationSequence& seq, int t, const FeatureConfig& config) {
    if (t < 0 || t > seq.last_offset()) {
        throw UsageError("featurize: offset " + std::to_string(t) + " outside [0, " +
                         std::to_string(seq.last_offset()) + "] for paper " + seq.paper_id);
    }
    const auto i = static_cast<std::size_t>(t);
    return featurize_values(static_cast<double>(seq.yearly_new[i]), static_cast<double>(seq.cumulative[i]), t, config);
}

}  // namespace ltccp::data
