#include "ltccp/data/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ltccp/errors.hpp"

namespace ltccp::data {

void CohortConfig::validate() const {
    if (train_years <= 0) throw ConfigError("cohort: train_years must be positive");
    if (horizon <= 0) throw ConfigError("cohort: horizon must be positive");
    if (min_citations < 0) throw ConfigError("cohort: min_citations must be non-negative");
}

Cohort filter_cohort(std::span<const CitationSequence> sequences, const CohortConfig& config) {
    config.validate();
    Cohort cohort;
    cohort.train_years = config.train_years;
    cohort.horizon = config.horizon;
    cohort.min_citations = config.min_citations;

    int end_year = 0;
    for (const auto& s : sequences) end_year = std::max(end_year, s.pub_year + s.last_offset());
    cohort.end_year = config.end_year.value_or(end_year);

    const int needed = config.train_years + config.horizon;
    for (const auto& s : sequences) {
        const int observed = std::min(s.last_offset(), cohort.end_year - s.pub_year);
        if (observed < needed) continue;
        const auto early = s.cumulative[static_cast<std::size_t>(config.train_years)];
        const bool enough = config.strict ? early > config.min_citations : early >= config.min_citations;
        if (enough) cohort.sequences.push_back(s);
    }
    std::sort(cohort.sequences.begin(), cohort.sequences.end(),
              [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
    return cohort;
}

Cohort filter_cohort(const std::map<std::string, CitationSequence>& sequences, const CohortConfig& config) {
    std::vector<CitationSequence> flat;
    flat.reserve(sequences.size());
    for (const auto& [id, s] : sequences) flat.push_back(s);
    return filter_cohort(flat, config);
}

Sample make_sample(const CitationSequence& seq, int train_years, int horizon, const FeatureConfig& features) {
    if (seq.last_offset() < train_years + horizon) {
        throw StructuralError("paper " + seq.paper_id + ": horizon exceeds available history");
    }
    Sample s;
    s.paper_id = seq.paper_id;
    for (int t = 0; t <= train_years; ++t) {
        s.observed_features.push_back(featurize(seq, t, features));
        s.observed_cumulative.push_back(static_cast<double>(seq.cumulative[static_cast<std::size_t>(t)]));
    }
    for (int t = train_years + 1; t < train_years + horizon; ++t) s.future_features.push_back(featurize(seq, t, features));
    for (int t = 1; t <= horizon; ++t) {
        s.targets.push_back(static_cast<double>(seq.cumulative[static_cast<std::size_t>(train_years + t)]));
    }
    return s;
}

std::vector<Sample> make_samples(const Cohort& cohort, const FeatureConfig& features) {
    features.validate();
    if (features.train_years != cohort.train_years) {
        throw ConfigError("feature config train_years differs from the cohort's");
    }
    std::vector<Sample> out;
    out.reserve(cohort.size());
    for (const auto& seq : cohort.sequences) out.push_back(make_sample(seq, cohort.train_years, cohort.horizon, features));
    return out;
}

void SplitConfig::validate() const {
    if (train < 0 || validation < 0 || test < 0) throw ConfigError("split: fractions must be non-negative");
    if (train + validation + test > 1.0 + 1e-9) throw ConfigError("split: fractions sum above 1");
}

Partition partition(std::size_t n, const SplitConfig& config) {
    config.validate();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto count = [n](double f) { return static_cast<std::size_t>(std::floor(f * static_cast<double>(n))); };
    const std::size_t n_train = count(config.train);
    const std::size_t n_val = count(config.validation);
    const bool exhaustive = std::abs(config.train + config.validation + config.test - 1.0) < 1e-9;
    const std::size_t n_test = exhaustive ? n - n_train - n_val : count(config.test);

    Partition p;
    auto take = [&](std::size_t begin, std::size_t len, std::vector<std::size_t>& dst) {
        dst.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                   order.begin() + static_cast<std::ptrdiff_t>(begin + len));
        std::sort(dst.begin(), dst.end());
    };
    take(0, n_train, p.train);
    take(n_train, n_val, p.validation);
    take(n_train + n_val, n_test, p.test);
    return p;
}

}  // namespace ltccp::data
