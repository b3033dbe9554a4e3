#include "ltccp/eval/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "ltccp/data/io.hpp"
#include "ltccp/errors.hpp"

namespace ltccp::eval {
namespace {

double relative_error(const Pair& p) {
    if (p.observed == 0) throw MetricError("observed count is zero for paper " + p.paper_id);
    return std::abs((p.predicted - p.observed) / p.observed);
}

double apply_rounding(double v, Rounding r) {
    switch (r) {
        case Rounding::nearest: return std::round(v);
        case Rounding::floor: return std::floor(v);
        case Rounding::ceil: return std::ceil(v);
        case Rounding::none: break;
    }
    return v;
}

double parse_double(std::string_view s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw SchemaError("report csv: bad number '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

double mape(std::span<const Pair> pairs) {
    if (pairs.empty()) throw UsageError("mape: no pairs");
    double sum = 0.0;
    for (const auto& p : pairs) sum += relative_error(p);
    return sum / static_cast<double>(pairs.size());
}

double acc(std::span<const Pair> pairs, double epsilon) {
    if (pairs.empty()) throw UsageError("acc: no pairs");
    std::size_t hits = 0;
    for (const auto& p : pairs) hits += relative_error(p) <= epsilon ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

Rounding rounding_from_name(std::string_view name) {
    if (name == "none") return Rounding::none;
    if (name == "nearest") return Rounding::nearest;
    if (name == "floor") return Rounding::floor;
    if (name == "ceil") return Rounding::ceil;
    throw ConfigError("unknown rounding mode '" + std::string(name) + "'");
}

std::string_view rounding_name(Rounding r) {
    switch (r) {
        case Rounding::nearest: return "nearest";
        case Rounding::floor: return "floor";
        case Rounding::ceil: return "ceil";
        case Rounding::none: break;
    }
    return "none";
}

void EvalConfig::validate() const {
    if (!(epsilon > 0)) throw ConfigError("eval: epsilon must be positive");
    if (horizons.empty()) throw ConfigError("eval: no horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] <= 0 || (i > 0 && horizons[i] <= horizons[i - 1])) {
            throw ConfigError("eval: horizons must be positive and increasing");
        }
    }
}

const ReportRow& EvalReport::at(std::string_view model, int t) const {
    for (const auto& r : rows) {
        if (r.model == model && r.t == t) return r;
    }
    throw UsageError("report has no row for " + std::string(model) + " t=" + std::to_string(t));
}

EvalReport build_report(std::span<const ModelPredictions> models, const GroundTruth& truth, const EvalConfig& config) {
    config.validate();
    if (models.empty()) throw UsageError("build_report: no models");
    if (truth.empty()) throw UsageError("build_report: empty ground truth");
    const int max_t = config.horizons.back();
    for (const auto& [id, obs] : truth) {
        if (static_cast<int>(obs.size()) < max_t) throw StructuralError("ground truth for " + id + " is shorter than the horizon");
    }

    EvalReport report;
    report.cohort_size = truth.size();
    report.config = config;
    for (const auto& m : models) {
        std::set<std::string> seen;
        for (const auto& p : m.predictions) {
            if (!truth.contains(p.paper_id)) {
                throw IdMismatchError("model " + m.model + " predicts paper " + p.paper_id + " absent from the ground truth");
            }
            if (!seen.insert(p.paper_id).second) throw IdMismatchError("model " + m.model + " predicts " + p.paper_id + " twice");
            if (static_cast<int>(p.predicted.size()) < max_t) {
                throw StructuralError("model " + m.model + ": prediction for " + p.paper_id + " is shorter than the horizon");
            }
        }
        if (seen.size() != truth.size()) {
            throw IdMismatchError("model " + m.model + " covers " + std::to_string(seen.size()) + " of " +
                                  std::to_string(truth.size()) + " test papers");
        }
        for (const int t : config.horizons) {
            std::vector<Pair> pairs;
            pairs.reserve(m.predictions.size());
            for (const auto& p : m.predictions) {
                const auto k = static_cast<std::size_t>(t - 1);
                pairs.push_back({apply_rounding(p.predicted[k], config.rounding), truth.at(p.paper_id)[k], p.paper_id});
            }
            // Score in paper-id order so the sums do not depend on input order.
            std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.paper_id < b.paper_id; });
            report.rows.push_back({m.model, t, mape(pairs), acc(pairs, config.epsilon)});
        }
    }
    return report;
}

std::string report_csv(const EvalReport& report) {
    std::string out = "model,t,MAPE,ACC\n";
    for (const auto& r : report.rows) {
        if (r.model.find_first_of(",\n\"") != std::string::npos) throw UsageError("model name not CSV-safe: " + r.model);
        out += r.model + "," + std::to_string(r.t) + "," + data::format_double(r.mape) + "," + data::format_double(r.acc) + "\n";
    }
    return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view csv) {
    std::vector<ReportRow> rows;
    bool header = true;
    while (!csv.empty()) {
        const auto nl = csv.find('\n');
        std::string_view line = csv.substr(0, nl);
        csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
        if (line.empty()) continue;
        if (header) {
            if (line != "model,t,MAPE,ACC") throw SchemaError("report csv: unexpected header");
            header = false;
            continue;
        }
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                cells.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (cells.size() != 4) throw SchemaError("report csv: expected 4 columns");
        ReportRow r;
        r.model = std::string(cells[0]);
        const auto res = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), r.t);
        if (res.ec != std::errc{}) throw SchemaError("report csv: bad horizon");
        r.mape = parse_double(cells[2]);
        r.acc = parse_double(cells[3]);
        rows.push_back(std::move(r));
    }
    return rows;
}

nlohmann::json report_json(const EvalReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) rows.push_back({{"model", r.model}, {"t", r.t}, {"MAPE", r.mape}, {"ACC", r.acc}});
    return {{"cohort_size", report.cohort_size},
            {"epsilon", report.config.epsilon},
            {"horizons", report.config.horizons},
            {"rounding", rounding_name(report.config.rounding)},
            {"rows", rows}};
}

std::vector<HistogramRow> distribution_export(std::span<const Prediction> predictions, const GroundTruth& truth, int t,
                                              std::size_t num_bins) {
    if (predictions.empty()) throw UsageError("distribution_export: no predictions");
    if (t <= 0 || num_bins == 0) throw UsageError("distribution_export: bad horizon or bin count");
    const auto k = static_cast<std::size_t>(t - 1);
    std::vector<double> predicted, real;
    for (const auto& p : predictions) {
        const auto it = truth.find(p.paper_id);
        if (it == truth.end()) throw IdMismatchError("no ground truth for paper " + p.paper_id);
        if (p.predicted.size() <= k || it->second.size() <= k) throw StructuralError("horizon beyond prediction length");
        predicted.push_back(p.predicted[k]);
        real.push_back(it->second[k]);
    }
    const double lo = 1.0;
    const double hi = std::max(2.0, *std::max_element(real.begin(), real.end()));
    std::vector<double> edges(num_bins + 1);
    for (std::size_t b = 0; b <= num_bins; ++b) {
        edges[b] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(b) / static_cast<double>(num_bins));
    }
    edges.front() = lo;
    edges.back() = hi;

    std::vector<HistogramRow> rows(num_bins);
    for (std::size_t b = 0; b < num_bins; ++b) {
        rows[b].bin_low = edges[b];
        rows[b].bin_high = edges[b + 1];
    }
    const auto bin_of = [&](double v) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), v);
        const auto idx = static_cast<std::ptrdiff_t>(it - edges.begin()) - 1;
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(num_bins) - 1));
    };
    for (const double v : predicted) ++rows[bin_of(v)].predicted_count;
    for (const double v : real) ++rows[bin_of(v)].real_count;
    return rows;
}

std::string distribution_csv(std::span<const HistogramRow> rows) {
    std::string out = "bin_low,bin_high,predicted_count,real_count\n";
    for (const auto& r : rows) {
        out += data::format_double(r.bin_low) + "," + data::format_double(r.bin_high) + "," +
               std::to_string(r.predicted_count) + "," + std::to_string(r.real_count) + "\n";
    }
    return out;
}

}  // namespace ltccp::eval
