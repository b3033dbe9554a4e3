#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ltccp/prediction.hpp"

namespace ltccp::eval {

/// One forecast scored against its observed cumulative count.
struct Pair {
    double predicted = 0.0;
    double observed = 0.0;
    std::string paper_id;
};

/// Mean absolute relative error. Throws MetricError naming the paper when an
/// observed count is zero, UsageError on an empty input.
double mape(std::span<const Pair> pairs);

/// Fraction of pairs with relative error <= epsilon (the boundary counts as correct).
double acc(std::span<const Pair> pairs, double epsilon = 0.3);

enum class Rounding { none, nearest, floor, ceil };

Rounding rounding_from_name(std::string_view name);
std::string_view rounding_name(Rounding r);

struct EvalConfig {
    double epsilon = 0.3;
    std::vector<int> horizons{1, 2, 3, 4, 5};
    Rounding rounding = Rounding::none;  // applied to predictions before scoring

    /// Throws ConfigError unless epsilon > 0 and horizons are positive and increasing.
    void validate() const;
    bool operator==(const EvalConfig&) const = default;
};

struct ModelPredictions {
    std::string model;
    std::vector<Prediction> predictions;
};

/// Observed cumulative counts at t = 1..H, keyed by paper id.
using GroundTruth = std::map<std::string, std::vector<double>>;

struct ReportRow {
    std::string model;
    int t = 0;
    double mape = 0.0;
    double acc = 0.0;

    bool operator==(const ReportRow&) const = default;
};

struct EvalReport {
    std::vector<ReportRow> rows;  // model order as given, then t ascending
    std::size_t cohort_size = 0;
    EvalConfig config;

    const ReportRow& at(std::string_view model, int t) const;
    bool operator==(const EvalReport&) const = default;
};

/// Scores every model at every configured horizon. Each model must cover
/// exactly the ground-truth papers (IdMismatchError otherwise) and forecast
/// at least the largest horizon (StructuralError).
EvalReport build_report(std::span<const ModelPredictions> models, const GroundTruth& truth, const EvalConfig& config);

/// Columns model,t,MAPE,ACC. Values use shortest round-trip formatting.
std::string report_csv(const EvalReport& report);
std::vector<ReportRow> parse_report_csv(std::string_view csv);
nlohmann::json report_json(const EvalReport& report);

/// Full-scale published reference values, kept for documentation and for the
/// ordering checks of the full-data mode.
struct ReferenceRow {
    std::string_view model;
    double mape[5];
    double acc[5];
};
inline constexpr ReferenceRow kReferenceTable[] = {
    {"RPP", {0.219, 0.381, 0.686, 0.904, 1.376}, {0.819, 0.661, 0.524, 0.433, 0.370}},
    {"SVR", {0.195, 0.252, 0.296, 0.331, 0.362}, {0.814, 0.664, 0.579, 0.528, 0.493}},
    {"LR", {0.136, 0.207, 0.269, 0.330, 0.386}, {0.924, 0.752, 0.629, 0.540, 0.482}},
    {"CART", {0.131, 0.202, 0.256, 0.297, 0.328}, {0.913, 0.758, 0.634, 0.549, 0.489}},
    {"LT-CCP", {0.123, 0.185, 0.234, 0.298, 0.317}, {0.940, 0.804, 0.703, 0.590, 0.551}},
};

struct HistogramRow {
    double bin_low = 0.0;
    double bin_high = 0.0;
    std::size_t predicted_count = 0;
    std::size_t real_count = 0;
};

/// Predicted and real counts at horizon t on one shared set of log-spaced
/// bins from 1 to the largest real count. Values outside the range land in
/// the first or last bin, so both columns sum to the number of papers.
std::vector<HistogramRow> distribution_export(std::span<const Prediction> predictions, const GroundTruth& truth, int t,
                                              std::size_t num_bins = 30);
std::string distribution_csv(std::span<const HistogramRow> rows);

}  // namespace ltccp::eval
