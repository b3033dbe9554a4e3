#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltccp/cli/config.hpp"
#include "ltccp/parallel.hpp"

namespace ltccp::cli {

/// Process exit codes, one per error family.
enum class ExitCode : int {
    ok = 0,
    other = 1,
    usage = 2,  // bad flags or config
    missing_input = 3,
    schema = 4,  // malformed records or files, inconsistent corpus
    structural = 5,
    id_mismatch = 6,
    metric = 7,
    training = 8,
};

ExitCode exit_code_for(const std::exception& e);

/// {"error": <kind>, "message": ..., "exit_code": n}
nlohmann::json error_json(const std::exception& e);

/// Model names as they appear in predictions files and reports.
inline constexpr const char* kLtccpName = "LT-CCP";
inline constexpr const char* kLrName = "LR";
inline constexpr const char* kCartName = "CART";

/// Fixed file names inside a run directory.
namespace files {
inline constexpr const char* corpus = "corpus.ndjson.gz";
inline constexpr const char* ground_truth = "ground_truth.json";
inline constexpr const char* corpus_stats = "corpus_stats.json";
inline constexpr const char* cohort = "cohort.ndjson";
inline constexpr const char* anomalies = "anomalies.json";
inline constexpr const char* split = "split.json";
inline constexpr const char* ltccp_model = "ltccp_model.json";
inline constexpr const char* lr_model = "lr_model.json";
inline constexpr const char* cart_model = "cart_model.json";
inline constexpr const char* training_curve = "training_curve.csv";
inline constexpr const char* predictions_ltccp = "predictions_ltccp.ndjson";
inline constexpr const char* predictions_lr = "predictions_lr.ndjson";
inline constexpr const char* predictions_cart = "predictions_cart.ndjson";
inline constexpr const char* report_csv = "report.csv";
inline constexpr const char* report_json = "report.json";
inline constexpr const char* table = "model_table.csv";
}  // namespace files

struct StageContext {
    RunConfig config;
    std::filesystem::path dir;
    Execution exec = Execution::parallel;
};

// Each stage reads the previous stages' files from ctx.dir, writes its own
// next to them, and finishes with <stage>.manifest.json holding the resolved
// config, the build version and CRC-32 checksums of its inputs and outputs.

void cmd_gen(const StageContext& ctx);
/// Reads `corpus` when given, else the run directory's generated corpus.
void cmd_ingest(const StageContext& ctx, const std::optional<std::filesystem::path>& corpus = {});
void cmd_train(const StageContext& ctx);
void cmd_predict(const StageContext& ctx);
void cmd_eval(const StageContext& ctx);
/// Wide table of every model and horizon, plus the predicted-vs-real
/// distribution of the LT-CCP forecasts at the largest horizon.
void cmd_report(const StageContext& ctx);

/// All stages in order; gen is skipped when an external corpus is given.
void cmd_pipeline(const StageContext& ctx, const std::optional<std::filesystem::path>& corpus = {});

std::string distribution_file_name(int t);

/// CRC-32 of a file's bytes as 8 lowercase hex digits.
std::string file_crc32(const std::filesystem::path& path);

/// Parses argv and runs one subcommand. Errors go to `err` as one JSON line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ltccp::cli
