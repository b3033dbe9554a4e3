#include "ltccp/data/citations.hpp"

#include <algorithm>
#include <unordered_map>

#include "ltccp/errors.hpp"

namespace ltccp::data {

void PaperRecord::validate() const {
    if (id.empty()) throw SchemaError("paper record: empty id");
    if (year < kMinYear || year > kMaxYear) {
        throw SchemaError("paper record " + id + ": year " + std::to_string(year) + " outside [1800, 2100]");
    }
}

CitationSequence CitationSequence::from_yearly(std::string id, int pub_year, std::vector<std::int64_t> yearly_new) {
    CitationSequence s{std::move(id), pub_year, std::move(yearly_new), {}};
    s.cumulative.resize(s.yearly_new.size());
    std::int64_t running = 0;
    for (std::size_t t = 0; t < s.yearly_new.size(); ++t) {
        running += s.yearly_new[t];
        s.cumulative[t] = running;
    }
    return s;
}

void CitationSequence::validate() const {
    if (yearly_new.size() != cumulative.size()) throw StructuralError("sequence " + paper_id + ": length mismatch");
    std::int64_t running = 0;
    for (std::size_t t = 0; t < yearly_new.size(); ++t) {
        if (yearly_new[t] < 0) throw StructuralError("sequence " + paper_id + ": negative yearly count");
        running += yearly_new[t];
        if (cumulative[t] != running) throw StructuralError("sequence " + paper_id + ": cumulative is not a running sum");
    }
}

IngestResult ingest(std::span<const PaperRecord> records) {
    IngestResult out;
    out.anomalies.records = records.size();

    struct Paper {
        int year;
        std::vector<std::string> references;
    };
    std::unordered_map<std::string, Paper> papers;
    papers.reserve(records.size());
    for (const auto& r : records) {
        r.validate();
        auto [it, inserted] = papers.try_emplace(r.id, Paper{r.year, {}});
        if (!inserted) {
            if (it->second.year != r.year) {
                throw IngestError("duplicate paper id " + r.id + " with conflicting years " +
                                  std::to_string(it->second.year) + " and " + std::to_string(r.year));
            }
            ++out.anomalies.duplicate_records;
        }
        auto& refs = it->second.references;
        refs.insert(refs.end(), r.references.begin(), r.references.end());
        out.end_year = std::max(out.end_year, r.year);
    }

    std::unordered_map<std::string, std::vector<std::int64_t>> yearly;
    yearly.reserve(papers.size());
    for (const auto& [id, paper] : papers) {
        yearly[id].assign(static_cast<std::size_t>(out.end_year - paper.year + 1), 0);
    }

    for (auto& [citer_id, citer] : papers) {
        auto& refs = citer.references;
        std::sort(refs.begin(), refs.end());
        const auto last = std::unique(refs.begin(), refs.end());
        out.anomalies.repeated_references += static_cast<std::size_t>(refs.end() - last);
        refs.erase(last, refs.end());
        for (const auto& cited_id : refs) {
            if (cited_id == citer_id) {
                ++out.anomalies.self_citations;
                continue;
            }
            const auto cited = papers.find(cited_id);
            if (cited == papers.end()) {
                ++out.anomalies.dangling_references;
                continue;
            }
            const int offset = citer.year - cited->second.year;
            if (offset < 0) {
                ++out.anomalies.citations_before_publication;
                continue;
            }
            ++yearly[cited_id][static_cast<std::size_t>(offset)];
            ++out.counted_citations;
        }
    }

    for (auto& [id, counts] : yearly) {
        const int year = papers.at(id).year;
        out.sequences.emplace(id, CitationSequence::from_yearly(id, year, std::move(counts)));
    }
    return out;
}

}  // namespace ltccp::data
