#pragma once

// Brute-force references for the data pipeline. Deliberately quadratic and
// written without any of the library's ingestion code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ltccp/data/citations.hpp"

namespace ltccp::testing {

/// Random corpus with self-citations, repeated references, dangling ids and
/// references to papers published later than the citer.
inline std::vector<data::PaperRecord> random_corpus(std::size_t n, std::uint64_t seed, int first_year = 1990,
                                                    int span = 25) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> year(first_year, first_year + span - 1);
    std::vector<data::PaperRecord> records(n);
    for (std::size_t i = 0; i < n; ++i) {
        records[i].id = "p" + std::to_string(i);
        records[i].year = year(rng);
    }
    // Skew toward a few popular targets so some papers clear the cohort bar.
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    std::uniform_int_distribution<std::size_t> popular(0, std::max<std::size_t>(n / 20, 1) - 1);
    std::uniform_int_distribution<int> nrefs(0, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& refs = records[i].references;
        const int k = nrefs(rng);
        for (int r = 0; r < k; ++r) {
            const double roll = u(rng);
            if (roll < 0.03) {
                refs.push_back(records[i].id);
            } else if (roll < 0.08) {
                refs.push_back("missing" + std::to_string(any(rng)));
            } else if (roll < 0.55) {
                refs.push_back(records[popular(rng)].id);
            } else {
                refs.push_back(records[any(rng)].id);
            }
            if (u(rng) < 0.05 && !refs.empty()) refs.push_back(refs.back());
        }
    }
    return records;
}

/// Number of distinct papers, other than `cited` itself, published in
/// `year` that list `cited` among their references.
inline std::int64_t brute_force_citers(const std::vector<data::PaperRecord>& records, const std::string& cited,
                                       int year) {
    std::set<std::string> citers;
    for (const auto& r : records) {
        if (r.id == cited || r.year != year) continue;
        if (std::find(r.references.begin(), r.references.end(), cited) != r.references.end()) citers.insert(r.id);
    }
    return static_cast<std::int64_t>(citers.size());
}

/// Yearly new-citation counts for every paper, offsets 0..end_year-pub_year.
inline std::map<std::string, std::vector<std::int64_t>> brute_force_yearly(
    const std::vector<data::PaperRecord>& records) {
    int end_year = 0;
    for (const auto& r : records) end_year = std::max(end_year, r.year);
    std::map<std::string, std::vector<std::int64_t>> out;
    for (const auto& d : records) {
        std::vector<std::set<std::string>> citers(static_cast<std::size_t>(end_year - d.year + 1));
        for (const auto& r : records) {
            if (r.id == d.id || r.year < d.year) continue;
            if (std::find(r.references.begin(), r.references.end(), d.id) != r.references.end()) {
                citers[static_cast<std::size_t>(r.year - d.year)].insert(r.id);
            }
        }
        std::vector<std::int64_t> yearly;
        for (const auto& c : citers) yearly.push_back(static_cast<std::int64_t>(c.size()));
        out[d.id] = yearly;
    }
    return out;
}

/// Ids of papers with more than `min_citations` distinct citers dated within
/// offsets [0, window] and whose publication year leaves window + horizon
/// years before the corpus end.
inline std::set<std::string> brute_force_cohort(const std::vector<data::PaperRecord>& records, int min_citations,
                                                int window, int horizon) {
    int end_year = 0;
    for (const auto& r : records) end_year = std::max(end_year, r.year);
    std::set<std::string> ids;
    for (const auto& d : records) {
        if (d.year + window + horizon > end_year) continue;
        std::set<std::string> citers;
        for (const auto& r : records) {
            if (r.id == d.id || r.year < d.year || r.year > d.year + window) continue;
            if (std::find(r.references.begin(), r.references.end(), d.id) != r.references.end()) citers.insert(r.id);
        }
        if (static_cast<int>(citers.size()) > min_citations) ids.insert(d.id);
    }
    return ids;
}

}  // namespace ltccp::testing
