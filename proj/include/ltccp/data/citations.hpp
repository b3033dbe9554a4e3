#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ltccp::data {

inline constexpr int kMinYear = 1800;
inline constexpr int kMaxYear = 2100;

/// One paper of the raw corpus and the ids it cites.
struct PaperRecord {
    std::string id;
    int year = 0;
    std::vector<std::string> references;

    /// Throws SchemaError on an empty id or a year outside [1800, 2100].
    void validate() const;

    bool operator==(const PaperRecord&) const = default;
};

/// Yearly new citations of one paper, offsets 0..T from its publication year,
/// with the running total alongside.
struct CitationSequence {
    std::string paper_id;
    int pub_year = 0;
    std::vector<std::int64_t> yearly_new;
    std::vector<std::int64_t> cumulative;

    static CitationSequence from_yearly(std::string id, int pub_year, std::vector<std::int64_t> yearly_new);

    /// Last observed offset T.
    int last_offset() const { return static_cast<int>(yearly_new.size()) - 1; }
    std::int64_t total() const { return cumulative.empty() ? 0 : cumulative.back(); }

    /// Throws StructuralError unless counts are non-negative and cumulative is
    /// the running sum of yearly_new.
    void validate() const;

    bool operator==(const CitationSequence&) const = default;
};

struct AnomalyReport {
    std::size_t records = 0;
    std::size_t duplicate_records = 0;      // same id and year seen again; references merged
    std::size_t self_citations = 0;
    std::size_t dangling_references = 0;    // cited id absent from the corpus
    std::size_t repeated_references = 0;    // same citer -> cited pair listed twice
    std::size_t citations_before_publication = 0;
    std::size_t skipped_malformed = 0;      // set by lenient readers

    bool operator==(const AnomalyReport&) const = default;
};

struct IngestResult {
    std::map<std::string, CitationSequence> sequences;  // ordered by paper id
    AnomalyReport anomalies;
    int end_year = 0;                 // latest publication year in the corpus
    std::size_t counted_citations = 0;  // distinct, non-self, in-window citation edges
};

/// Builds per-paper citation sequences. A citation from paper A to paper B is
/// dated at A's publication year and counted once per distinct citer.
/// Self-citations, dangling references and citations dated before the cited
/// paper's publication are dropped and tallied in the anomaly report. Every
/// sequence runs from its publication year to the corpus end year.
/// Throws IngestError if one id appears with two different years.
IngestResult ingest(std::span<const PaperRecord> records);

}  // namespace ltccp::data
