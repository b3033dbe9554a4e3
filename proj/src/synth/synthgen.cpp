#include "ltccp/synth/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "ltccp/errors.hpp"

namespace ltccp::synth {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::string paper_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "P%06zu", i);
    return buf;
}

std::mt19937_64 paper_rng(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(std::uint64_t{index} >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

void SynthParams::validate() const {
    if (!seed) throw ConfigError("synth: seed is required");
    if (num_papers == 0) throw ConfigError("synth: num_papers must be positive");
    if (!(sigma_lambda > 0)) throw ConfigError("synth: sigma_lambda must be positive");
    if (!(sigma_aging > 0)) throw ConfigError("synth: sigma_aging must be positive");
    if (!(m > 0)) throw ConfigError("synth: m must be positive");
    if (!std::isfinite(mu_lambda) || !std::isfinite(mu_aging)) throw ConfigError("synth: non-finite location");
    if (max_years <= 0 || pub_span <= 0 || pub_span > max_years) {
        throw ConfigError("synth: need 0 < pub_span <= max_years");
    }
    if (start_year < data::kMinYear || end_year() > data::kMaxYear) throw ConfigError("synth: years out of range");
    if (fixed_lambda && !(*fixed_lambda >= 0)) throw ConfigError("synth: fixed_lambda must be non-negative");
}

double aging_mass(const SynthParams& p, int t) {
    if (p.constant_aging) return 1.0;
    const double hi = normal_cdf((std::log(t + 1.0) - p.mu_aging) / p.sigma_aging);
    const double lo = t == 0 ? 0.0 : normal_cdf((std::log(static_cast<double>(t)) - p.mu_aging) / p.sigma_aging);
    return hi - lo;
}

SynthCorpus gen_corpus(const SynthParams& params, Execution exec) {
    params.validate();
    const std::uint64_t seed = *params.seed;
    const int end = params.end_year();

    std::vector<double> aging(static_cast<std::size_t>(params.max_years));
    for (int t = 0; t < params.max_years; ++t) aging[static_cast<std::size_t>(t)] = aging_mass(params, t);

    SynthCorpus corpus;
    corpus.end_year = end;
    corpus.sequences.resize(params.num_papers);
    corpus.lambda.resize(params.num_papers);

    for_each_index(params.num_papers, exec, [&](std::size_t i) {
        auto rng = paper_rng(seed, i);
        const int year = std::uniform_int_distribution<int>(params.start_year, params.start_year + params.pub_span - 1)(rng);
        const double lambda = params.fixed_lambda
                                  ? *params.fixed_lambda
                                  : std::lognormal_distribution<double>(params.mu_lambda, params.sigma_lambda)(rng);
        std::vector<std::int64_t> yearly(static_cast<std::size_t>(end - year + 1));
        double total = 0.0;
        for (std::size_t t = 0; t < yearly.size(); ++t) {
            const double rate = lambda * aging[t] * (params.m + total);
            if (!(rate < 1e15)) throw Error("synth: citation rate overflow for paper " + paper_id(i));
            std::int64_t k = 0;
            if (rate > 0) k = std::poisson_distribution<std::int64_t>(rate)(rng);
            yearly[t] = k;
            total += static_cast<double>(k);
        }
        corpus.lambda[i] = lambda;
        corpus.sequences[i] = data::CitationSequence::from_yearly(paper_id(i), year, std::move(yearly));
    });
    return corpus;
}

std::vector<data::PaperRecord> to_records(const SynthCorpus& corpus) {
    std::vector<data::PaperRecord> records;
    records.reserve(corpus.sequences.size());
    int first_year = corpus.end_year;
    for (const auto& s : corpus.sequences) {
        records.push_back({s.paper_id, s.pub_year, {}});
        first_year = std::min(first_year, s.pub_year);
    }
    for (int y = first_year; y <= corpus.end_year; ++y) {
        std::vector<std::vector<std::string>> stubs;
        for (const auto& s : corpus.sequences) {
            const int t = y - s.pub_year;
            if (t < 0 || t > s.last_offset()) continue;
            const auto k = static_cast<std::size_t>(s.yearly_new[static_cast<std::size_t>(t)]);
            if (stubs.size() < k) stubs.resize(k);
            for (std::size_t j = 0; j < k; ++j) stubs[j].push_back(s.paper_id);
        }
        for (std::size_t j = 0; j < stubs.size(); ++j) {
            records.push_back({"S" + std::to_string(y) + "_" + std::to_string(j), y, std::move(stubs[j])});
        }
    }
    return records;
}

double gini(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        total += values[i];
        weighted += static_cast<double>(i + 1) * values[i];
    }
    if (total <= 0) return 0.0;
    return 2.0 * weighted / (n * total) - (n + 1.0) / n;
}

CorpusStats corpus_stats(std::span<const data::CitationSequence> sequences) {
    if (sequences.empty()) throw UsageError("corpus_stats: no sequences");
    std::vector<double> finals;
    finals.reserve(sequences.size());
    for (const auto& s : sequences) finals.push_back(static_cast<double>(s.total()));
    std::sort(finals.begin(), finals.end());

    CorpusStats st;
    st.papers = finals.size();
    const double total = std::accumulate(finals.begin(), finals.end(), 0.0);
    const std::size_t n = finals.size();
    st.mean_final = total / static_cast<double>(n);
    st.median_final = n % 2 ? finals[n / 2] : 0.5 * (finals[n / 2 - 1] + finals[n / 2]);
    st.gini = gini(finals);
    if (total > 0) {
        const std::size_t top = std::max<std::size_t>(1, n / 10);
        st.top10_share = std::accumulate(finals.end() - static_cast<std::ptrdiff_t>(top), finals.end(), 0.0) / total;
        st.bottom50_share = std::accumulate(finals.begin(), finals.begin() + static_cast<std::ptrdiff_t>(n / 2), 0.0) / total;
    }

    // Bin b holds [2^(b-1), 2^b - 1]; bin 0 holds zero.
    for (const double v : finals) {
        const auto c = static_cast<std::uint64_t>(v);
        const std::size_t b = c == 0 ? 0 : static_cast<std::size_t>(std::bit_width(c));
        if (st.histogram.size() <= b) {
            const std::size_t old = st.histogram.size();
            st.histogram.resize(b + 1);
            for (std::size_t k = old; k <= b; ++k) {
                st.histogram[k].low = k == 0 ? 0 : std::int64_t{1} << (k - 1);
                st.histogram[k].high = k == 0 ? 0 : (std::int64_t{1} << k) - 1;
            }
        }
        ++st.histogram[b].papers;
    }
    return st;
}

}  // namespace ltccp::synth
