#pragma once

#include <string>
#include <vector>

#include "ltccp/data/citations.hpp"
#include "ltccp/nn/matrix.hpp"

namespace ltccp::data {

using FeatureVector = nn::Vector;

enum class Feature {
    log_new,         // log(1 + new citations in year t)
    log_cumulative,  // log(1 + cumulative citations through year t)
    age,             // t / train_years
};

std::string feature_name(Feature f);
Feature feature_from_name(const std::string& name);

struct FeatureConfig {
    std::vector<Feature> features{Feature::log_new, Feature::log_cumulative, Feature::age};
    int train_years = 5;

    std::size_t dim() const { return features.size(); }
    std::vector<std::string> names() const;
    void validate() const;

    bool operator==(const FeatureConfig&) const = default;
};

/// Features of `seq` at year offset t. Throws UsageError if t is outside [0, T].
FeatureVector featurize(const CitationSequence& seq, int t, const FeatureConfig& config);

/// Features from (possibly predicted, real-valued) counts.
FeatureVector featurize_values(double new_citations, double cumulative, int t, const FeatureConfig& config);

}  // namespace ltccp::data
