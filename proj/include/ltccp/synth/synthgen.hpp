#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ltccp/data/citations.hpp"
#include "ltccp/parallel.hpp"

namespace ltccp::synth {

/// Parameters of the synthetic citation process. Paper d draws a fitness
/// lambda_d ~ LogNormal(mu_lambda, sigma_lambda); its new citations in year
/// offset t are Poisson(lambda_d * A(t) * (m + n_{t-1})), where A(t) is the
/// mass of a LogNormal(mu_aging, sigma_aging) lifetime kernel over [t, t+1)
/// and n_{t-1} the count accumulated so far.
struct SynthParams {
    std::size_t num_papers = 2000;
    double mu_lambda = 0.3;
    double sigma_lambda = 0.6;
    double mu_aging = 1.0986122886681098;  // ln 3
    double sigma_aging = 1.0;
    double m = 10.0;
    int start_year = 1990;
    int max_years = 20;  // corpus spans start_year .. start_year + max_years - 1
    int pub_span = 12;   // publication years drawn from the first pub_span years
    bool constant_aging = false;         // A(t) = 1 for every t
    std::optional<double> fixed_lambda;  // bypass the fitness draw
    std::optional<std::uint64_t> seed;   // required

    /// Throws ConfigError on non-positive scales, an empty span or a missing seed.
    void validate() const;
    int end_year() const { return start_year + max_years - 1; }
};

/// A(t) for the parameters above (1 under constant_aging).
double aging_mass(const SynthParams& params, int t);

struct SynthCorpus {
    std::vector<data::CitationSequence> sequences;  // ids "P000000", "P000001", ...
    std::vector<double> lambda;                     // ground-truth fitness, same order
    int end_year = 0;
};

/// Deterministic in params (seed included). Each paper has its own generator
/// seeded from (seed, index), so the parallel path reproduces the serial one.
SynthCorpus gen_corpus(const SynthParams& params, Execution exec = Execution::parallel);

/// Realizes the counts as a raw corpus. For each year y, citer stub k
/// (id "S<y>_<k>") cites every focal paper with more than k new citations
/// in y, so ingesting the records recovers the sequences exactly.
std::vector<data::PaperRecord> to_records(const SynthCorpus& corpus);

struct HistogramBin {
    std::int64_t low = 0;   // inclusive
    std::int64_t high = 0;  // inclusive
    std::size_t papers = 0;
};

struct CorpusStats {
    std::size_t papers = 0;
    double mean_final = 0.0;
    double median_final = 0.0;
    double gini = 0.0;
    double top10_share = 0.0;     // citation share of the most cited 10% of papers
    double bottom50_share = 0.0;  // share of the least cited 50%
    std::vector<HistogramBin> histogram;  // [0,0], [1,1], [2,3], [4,7], ...
};

/// Final-count summary. Throws UsageError on an empty input.
CorpusStats corpus_stats(std::span<const data::CitationSequence> sequences);

/// Gini coefficient of non-negative values; 0 when all are zero.
double gini(std::vector<double> values);

}  // namespace ltccp::synth
