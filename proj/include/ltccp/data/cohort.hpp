#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltccp/data/citations.hpp"
#include "ltccp/data/features.hpp"

namespace ltccp::data {

struct CohortConfig {
    std::int64_t min_citations = 5;
    int train_years = 5;
    int horizon = 5;
    bool strict = true;           // keep cumulative[train_years] > min_citations (>= when false)
    std::optional<int> end_year;  // defaults to the latest year any sequence reaches

    void validate() const;
};

/// Papers eligible for the train-then-forecast protocol.
struct Cohort {
    std::vector<CitationSequence> sequences;  // sorted by paper id
    int train_years = 5;
    int horizon = 5;
    std::int64_t min_citations = 5;
    int end_year = 0;

    std::size_t size() const { return sequences.size(); }
};

/// Keeps papers with more than min_citations citations by offset
/// train_years and at least train_years + horizon observed years before the
/// corpus end year. An empty result is not an error.
Cohort filter_cohort(std::span<const CitationSequence> sequences, const CohortConfig& config);
Cohort filter_cohort(const std::map<std::string, CitationSequence>& sequences, const CohortConfig& config);

/// Model-facing view of one cohort member.
struct Sample {
    std::string paper_id;
    std::vector<FeatureVector> observed_features;  // offsets 0..train_years
    std::vector<double> observed_cumulative;       // offsets 0..train_years
    std::vector<FeatureVector> future_features;    // offsets train_years+1 .. train_years+horizon-1
    std::vector<double> targets;                   // cumulative at train_years+1 .. train_years+horizon

    double last_observed() const { return observed_cumulative.back(); }
};

/// Throws StructuralError if a member lacks train_years + horizon years of history.
Sample make_sample(const CitationSequence& seq, int train_years, int horizon, const FeatureConfig& features);
std::vector<Sample> make_samples(const Cohort& cohort, const FeatureConfig& features);

struct SplitConfig {
    double train = 0.7;
    double validation = 0.1;
    double test = 0.2;
    std::uint64_t seed = 0;

    /// Throws ConfigError on negative fractions or fractions summing above 1.
    void validate() const;
};

/// Indices into the sample list, each block in ascending order.
struct Partition {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;

    bool operator==(const Partition&) const = default;
};

/// Seeded shuffle of [0, n) cut into train/validation/test blocks. When the
/// fractions sum to 1 the test block takes the rounding remainder.
Partition partition(std::size_t n, const SplitConfig& config);

}  // namespace ltccp::data
