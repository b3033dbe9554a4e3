#include "ltccp/data/io.hpp"

#include <charconv>
#include <fstream>

#include <zlib.h>

#include "ltccp/errors.hpp"

namespace ltccp::data {

using nlohmann::json;

LineReader::LineReader(const std::filesystem::path& path) : path_(path) {
    if (!std::filesystem::exists(path)) throw MissingInputError("input file not found: " + path.string());
    handle_ = gzopen(path.c_str(), "rb");
    if (!handle_) throw MissingInputError("cannot open " + path.string());
    gzbuffer(static_cast<gzFile>(handle_), 1 << 17);
}

LineReader::~LineReader() {
    if (handle_) gzclose(static_cast<gzFile>(handle_));
}

bool LineReader::next(std::string& line) {
    line.clear();
    char buf[8192];
    bool any = false;
    while (gzgets(static_cast<gzFile>(handle_), buf, sizeof buf) != nullptr) {
        any = true;
        line.append(buf);
        if (!line.empty() && line.back() == '\n') break;
    }
    if (!any) {
        int err = 0;
        gzerror(static_cast<gzFile>(handle_), &err);
        if (err != Z_OK && err != Z_BUF_ERROR) throw SchemaError("corrupt compressed input: " + path_.string());
        return false;
    }
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    ++line_number_;
    return true;
}

OutputFile::OutputFile(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    if (path.extension() == ".gz") {
        gz_ = gzopen(path.c_str(), "wb6");
        if (!gz_) throw Error("cannot open " + path.string() + " for writing");
    } else {
        plain_ = std::fopen(path.c_str(), "wb");
        if (!plain_) throw Error("cannot open " + path.string() + " for writing");
    }
}

OutputFile::~OutputFile() {
    try {
        close();
    } catch (...) {
    }
}

void OutputFile::write(std::string_view text) {
    if (text.empty()) return;
    if (gz_) {
        if (gzwrite(static_cast<gzFile>(gz_), text.data(), static_cast<unsigned>(text.size())) == 0) {
            throw Error("write failed: " + path_.string());
        }
    } else if (plain_) {
        if (std::fwrite(text.data(), 1, text.size(), plain_) != text.size()) throw Error("write failed: " + path_.string());
    }
}

void OutputFile::close() {
    if (gz_) {
        const int rc = gzclose(static_cast<gzFile>(gz_));
        gz_ = nullptr;
        if (rc != Z_OK) throw Error("close failed: " + path_.string());
    }
    if (plain_) {
        const int rc = std::fclose(plain_);
        plain_ = nullptr;
        if (rc != 0) throw Error("close failed: " + path_.string());
    }
}

PaperRecord parse_record(const json& j) {
    if (!j.is_object()) throw SchemaError("record is not a JSON object");
    PaperRecord r;
    const auto id = j.find("id");
    if (id == j.end()) throw SchemaError("record without id");
    if (id->is_string()) {
        r.id = id->get<std::string>();
    } else if (id->is_number_integer()) {
        r.id = std::to_string(id->get<long long>());
    } else {
        throw SchemaError("record id must be a string");
    }
    const auto year = j.find("year");
    if (year == j.end() || !year->is_number_integer()) throw SchemaError("record " + r.id + ": missing integer year");
    r.year = year->get<int>();
    const auto refs = j.find("references");
    if (refs != j.end() && !refs->is_null()) {
        if (!refs->is_array()) throw SchemaError("record " + r.id + ": references must be an array");
        r.references.reserve(refs->size());
        for (const auto& ref : *refs) {
            if (ref.is_string()) {
                r.references.push_back(ref.get<std::string>());
            } else if (ref.is_number_integer()) {
                r.references.push_back(std::to_string(ref.get<long long>()));
            } else {
                throw SchemaError("record " + r.id + ": non-string reference");
            }
        }
    }
    r.validate();
    return r;
}

std::vector<PaperRecord> read_records(const std::filesystem::path& path, const ReadOptions& options,
                                      std::size_t* skipped) {
    LineReader reader(path);
    std::vector<PaperRecord> out;
    std::size_t bad = 0;
    std::string line;
    while (reader.next(line)) {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(parse_record(json::parse(line)));
        } catch (const std::exception& e) {
            if (options.skip_malformed) {
                ++bad;
                continue;
            }
            throw SchemaError(path.string() + ":" + std::to_string(reader.line_number()) + ": " + e.what());
        }
    }
    if (skipped) *skipped = bad;
    return out;
}

void write_records(const std::filesystem::path& path, const std::vector<PaperRecord>& records) {
    OutputFile out(path);
    for (const auto& r : records) {
        json j{{"id", r.id}, {"year", r.year}, {"references", r.references}};
        out.write(j.dump());
        out.write("\n");
    }
    out.close();
}

void write_sequences(const std::filesystem::path& path, const std::vector<CitationSequence>& sequences) {
    OutputFile out(path);
    for (const auto& s : sequences) {
        json j{{"paper_id", s.paper_id}, {"pub_year", s.pub_year}, {"yearly_new", s.yearly_new}};
        out.write(j.dump());
        out.write("\n");
    }
    out.close();
}

std::vector<CitationSequence> read_sequences(const std::filesystem::path& path) {
    LineReader reader(path);
    std::vector<CitationSequence> out;
    std::string line;
    while (reader.next(line)) {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            const auto j = json::parse(line);
            auto s = CitationSequence::from_yearly(j.at("paper_id").get<std::string>(), j.at("pub_year").get<int>(),
                                                   j.at("yearly_new").get<std::vector<std::int64_t>>());
            s.validate();
            out.push_back(std::move(s));
        } catch (const json::exception& e) {
            throw SchemaError(path.string() + ":" + std::to_string(reader.line_number()) + ": " + e.what());
        } catch (const StructuralError& e) {
            throw SchemaError(path.string() + ":" + std::to_string(reader.line_number()) + ": " + e.what());
        }
    }
    return out;
}

json to_json(const AnomalyReport& r) {
    return json{{"records", r.records},
                {"duplicate_records", r.duplicate_records},
                {"self_citations", r.self_citations},
                {"dangling_references", r.dangling_references},
                {"repeated_references", r.repeated_references},
                {"citations_before_publication", r.citations_before_publication},
                {"skipped_malformed", r.skipped_malformed}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
    OutputFile out(path);
    out.write(doc.dump(2));
    out.write("\n");
    out.close();
}

json read_json(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingInputError("input file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace ltccp::data
