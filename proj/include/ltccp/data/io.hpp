#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ltccp/data/citations.hpp"
#include "ltccp/data/cohort.hpp"

namespace ltccp::data {

/// Reads text lines from a plain or gzip-compressed file (detected from the
/// content, not the name).
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    /// False at end of file. Strips the trailing newline (and CR).
    bool next(std::string& line);
    std::size_t line_number() const { return line_number_; }

private:
    void* handle_ = nullptr;  // gzFile
    std::filesystem::path path_;
    std::size_t line_number_ = 0;
};

/// Writes text, gzip-compressed when the path ends in ".gz". The gzip
/// header carries no timestamp, so identical content gives identical bytes.
class OutputFile {
public:
    explicit OutputFile(const std::filesystem::path& path);
    ~OutputFile();
    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;

    void write(std::string_view text);
    void close();

private:
    void* gz_ = nullptr;
    std::FILE* plain_ = nullptr;
    std::filesystem::path path_;
};

struct ReadOptions {
    bool skip_malformed = false;  // count and skip bad lines instead of throwing
};

/// Parses one NDJSON line {"id", "year", "references"}. A missing
/// "references" field means no references.
PaperRecord parse_record(const nlohmann::json& j);

std::vector<PaperRecord> read_records(const std::filesystem::path& path, const ReadOptions& options = {},
                                      std::size_t* skipped = nullptr);
void write_records(const std::filesystem::path& path, const std::vector<PaperRecord>& records);

/// Cohort file: one {"paper_id", "pub_year", "yearly_new"} object per line.
void write_sequences(const std::filesystem::path& path, const std::vector<CitationSequence>& sequences);
std::vector<CitationSequence> read_sequences(const std::filesystem::path& path);

nlohmann::json to_json(const AnomalyReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// Formats a double so that parsing it back yields the same bits.
std::string format_double(double v);

}  // namespace ltccp::data
