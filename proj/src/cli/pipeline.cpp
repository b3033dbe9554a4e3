#include "ltccp/cli/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include <zlib.h>

#include "ltccp/data/io.hpp"
#include "ltccp/errors.hpp"
#include "ltccp/eval/metrics.hpp"
#include "ltccp/models/prediction_io.hpp"

namespace ltccp::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInputError("input file not found: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
    data::OutputFile out(path);
    out.write(text);
    out.close();
}

void require(const fs::path& path) {
    if (!fs::exists(path)) throw MissingInputError("input file not found: " + path.string());
}

void write_manifest(const StageContext& ctx, const std::string& stage, const std::vector<fs::path>& inputs,
                    const std::vector<std::string>& outputs) {
    json in = json::object(), out = json::object();
    for (const auto& p : inputs) in[p.filename().string()] = file_crc32(p);
    for (const auto& name : outputs) out[name] = file_crc32(ctx.dir / name);
    json m{{"stage", stage}, {"version", LTCCP_VERSION}, {"config", to_json(ctx.config)}, {"inputs", in},
           {"outputs", out}};
    data::write_json(ctx.dir / (stage + ".manifest.json"), m);
}

// Cohort members as samples, with the recorded split.
struct Splits {
    std::vector<data::Sample> train, validation, test;
};

Splits load_splits(const StageContext& ctx) {
    const auto cohort_path = ctx.dir / files::cohort;
    const auto split_path = ctx.dir / files::split;
    require(cohort_path);
    require(split_path);
    const auto& c = ctx.config;
    std::map<std::string, data::Sample> by_id;
    for (const auto& seq : data::read_sequences(cohort_path)) {
        by_id.emplace(seq.paper_id, data::make_sample(seq, c.cohort.train_years, c.cohort.horizon, c.features));
    }
    const auto split = data::read_json(split_path);
    Splits s;
    auto take = [&](const char* key, std::vector<data::Sample>& dst) {
        try {
            for (const auto& id : split.at(key)) {
                const auto it = by_id.find(id.get<std::string>());
                if (it == by_id.end()) throw SchemaError(split_path.string() + ": unknown paper " + id.dump());
                dst.push_back(it->second);
            }
        } catch (const json::exception& e) {
            throw SchemaError(split_path.string() + ": " + e.what());
        }
    };
    take("train", s.train);
    take("validation", s.validation);
    take("test", s.test);
    return s;
}

eval::GroundTruth truth_of(const std::vector<data::Sample>& samples) {
    eval::GroundTruth truth;
    for (const auto& s : samples) truth[s.paper_id] = s.targets;
    return truth;
}

struct NamedFile {
    const char* model;
    const char* file;
};
constexpr NamedFile kPredictionFiles[] = {
    {kLtccpName, files::predictions_ltccp},
    {kLrName, files::predictions_lr},
    {kCartName, files::predictions_cart},
};

}  // namespace

ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UsageError*>(&e)) return ExitCode::usage;
    if (dynamic_cast<const MissingInputError*>(&e)) return ExitCode::missing_input;
    if (dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const IngestError*>(&e)) return ExitCode::schema;
    if (dynamic_cast<const IdMismatchError*>(&e)) return ExitCode::id_mismatch;
    if (dynamic_cast<const StructuralError*>(&e)) return ExitCode::structural;
    if (dynamic_cast<const MetricError*>(&e)) return ExitCode::metric;
    if (dynamic_cast<const TrainingError*>(&e)) return ExitCode::training;
    return ExitCode::other;
}

json error_json(const std::exception& e) {
    static const std::map<ExitCode, const char*> kinds{
        {ExitCode::other, "error"},           {ExitCode::usage, "usage"},
        {ExitCode::missing_input, "missing_input"}, {ExitCode::schema, "schema"},
        {ExitCode::structural, "structural"}, {ExitCode::id_mismatch, "id_mismatch"},
        {ExitCode::metric, "metric"},         {ExitCode::training, "training"},
    };
    const auto code = exit_code_for(e);
    return {{"error", kinds.at(code)}, {"message", e.what()}, {"exit_code", static_cast<int>(code)}};
}

std::string file_crc32(const fs::path& path) {
    const auto bytes = read_text(path);
    const auto crc = crc32_z(0L, reinterpret_cast<const Bytef*>(bytes.data()), bytes.size());
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

std::string distribution_file_name(int t) { return "distribution_t" + std::to_string(t) + ".csv"; }

void cmd_gen(const StageContext& ctx) {
    fs::create_directories(ctx.dir);
    const auto corpus = synth::gen_corpus(ctx.config.synth, ctx.exec);
    data::write_records(ctx.dir / files::corpus, synth::to_records(corpus));

    json truth = json::object();
    for (std::size_t i = 0; i < corpus.sequences.size(); ++i) truth[corpus.sequences[i].paper_id] = corpus.lambda[i];
    data::write_json(ctx.dir / files::ground_truth, truth);

    const auto st = synth::corpus_stats(corpus.sequences);
    json hist = json::array();
    for (const auto& b : st.histogram) hist.push_back({{"low", b.low}, {"high", b.high}, {"papers", b.papers}});
    data::write_json(ctx.dir / files::corpus_stats, {{"papers", st.papers},
                                                     {"mean_final", st.mean_final},
                                                     {"median_final", st.median_final},
                                                     {"gini", st.gini},
                                                     {"top10_share", st.top10_share},
                                                     {"bottom50_share", st.bottom50_share},
                                                     {"end_year", corpus.end_year},
                                                     {"histogram", hist}});
    write_manifest(ctx, "gen", {}, {files::corpus, files::ground_truth, files::corpus_stats});
}

void cmd_ingest(const StageContext& ctx, const std::optional<fs::path>& corpus) {
    const auto corpus_path = corpus.value_or(ctx.dir / files::corpus);
    require(corpus_path);
    fs::create_directories(ctx.dir);
    std::size_t skipped = 0;
    const auto records = data::read_records(corpus_path, {ctx.config.skip_malformed}, &skipped);
    auto ingested = data::ingest(records);
    ingested.anomalies.skipped_malformed = skipped;

    const auto cohort = data::filter_cohort(ingested.sequences, ctx.config.cohort);
    data::write_sequences(ctx.dir / files::cohort, cohort.sequences);

    auto report = data::to_json(ingested.anomalies);
    report["papers"] = ingested.sequences.size();
    report["counted_citations"] = ingested.counted_citations;
    report["end_year"] = cohort.end_year;
    report["cohort_size"] = cohort.size();
    data::write_json(ctx.dir / files::anomalies, report);

    const auto part = data::partition(cohort.size(), ctx.config.split);
    auto ids = [&](const std::vector<std::size_t>& idx) {
        json a = json::array();
        for (const auto i : idx) a.push_back(cohort.sequences[i].paper_id);
        return a;
    };
    data::write_json(ctx.dir / files::split,
                     {{"train", ids(part.train)}, {"validation", ids(part.validation)}, {"test", ids(part.test)}});
    write_manifest(ctx, "ingest", {corpus_path}, {files::cohort, files::anomalies, files::split});
}

void cmd_train(const StageContext& ctx) {
    const auto s = load_splits(ctx);
    const auto result = models::train_ltccp(s.train, s.validation, ctx.config.train, ctx.exec);
    models::save_ltccp(ctx.dir / files::ltccp_model, result.model, {{"best_epoch", result.best_epoch}});
    data::write_json(ctx.dir / files::lr_model, models::to_json(models::train_lr(s.train)));
    data::write_json(ctx.dir / files::cart_model, models::to_json(models::train_cart(s.train, ctx.config.cart)));

    std::string curve = "epoch,train_loss,validation_loss,validation_mape\n";
    for (const auto& e : result.curve) {
        curve += std::to_string(e.epoch) + "," + data::format_double(e.train_loss) + "," +
                 data::format_double(e.validation_loss) + "," + data::format_double(e.validation_mape) + "\n";
    }
    write_text(ctx.dir / files::training_curve, curve);
    write_manifest(ctx, "train", {ctx.dir / files::cohort, ctx.dir / files::split},
                   {files::ltccp_model, files::lr_model, files::cart_model, files::training_curve});
}

void cmd_predict(const StageContext& ctx) {
    const auto s = load_splits(ctx);
    const int h = ctx.config.cohort.horizon;
    for (const auto* f : {files::ltccp_model, files::lr_model, files::cart_model}) require(ctx.dir / f);

    const auto ltccp = models::load_ltccp(ctx.dir / files::ltccp_model);
    const auto lr = models::lr_from_json(data::read_json(ctx.dir / files::lr_model));
    const auto cart = models::cart_from_json(data::read_json(ctx.dir / files::cart_model));
    if (ltccp.features != ctx.config.features) {
        throw StructuralError("LT-CCP checkpoint was trained with different features than the config");
    }

    const auto truth = truth_of(s.test);
    const auto p_ltccp = models::predict_ltccp_batch(ltccp, s.test, h, ctx.exec);
    std::vector<Prediction> p_lr, p_cart;
    for (const auto& x : s.test) {
        p_lr.push_back(models::predict_lr(lr, x, h));
        p_cart.push_back(models::predict_cart(cart, x, h));
    }
    models::write_predictions(ctx.dir / files::predictions_ltccp, p_ltccp, &truth);
    models::write_predictions(ctx.dir / files::predictions_lr, p_lr, &truth);
    models::write_predictions(ctx.dir / files::predictions_cart, p_cart, &truth);
    write_manifest(ctx, "predict",
                   {ctx.dir / files::cohort, ctx.dir / files::split, ctx.dir / files::ltccp_model,
                    ctx.dir / files::lr_model, ctx.dir / files::cart_model},
                   {files::predictions_ltccp, files::predictions_lr, files::predictions_cart});
}

void cmd_eval(const StageContext& ctx) {
    const auto s = load_splits(ctx);
    std::vector<eval::ModelPredictions> preds;
    std::vector<fs::path> inputs{ctx.dir / files::cohort, ctx.dir / files::split};
    for (const auto& f : kPredictionFiles) {
        require(ctx.dir / f.file);
        preds.push_back({f.model, models::read_predictions(ctx.dir / f.file)});
        inputs.push_back(ctx.dir / f.file);
    }
    const auto report = eval::build_report(preds, truth_of(s.test), ctx.config.eval);
    write_text(ctx.dir / files::report_csv, eval::report_csv(report));
    data::write_json(ctx.dir / files::report_json, eval::report_json(report));
    write_manifest(ctx, "eval", inputs, {files::report_csv, files::report_json});
}

void cmd_report(const StageContext& ctx) {
    const auto report_path = ctx.dir / files::report_csv;
    const auto rows = eval::parse_report_csv(read_text(report_path));
    const auto& horizons = ctx.config.eval.horizons;

    std::string table = "model";
    for (const char* metric : {"MAPE", "ACC"}) {
        for (const int t : horizons) table += std::string(",") + metric + "_t" + std::to_string(t);
    }
    table += "\n";
    // Reference model order; models without forecasts here keep empty cells.
    for (const auto& ref : eval::kReferenceTable) {
        table += std::string(ref.model);
        for (const bool is_mape : {true, false}) {
            for (const int t : horizons) {
                table += ",";
                const auto it = std::find_if(rows.begin(), rows.end(),
                                             [&](const auto& r) { return r.model == ref.model && r.t == t; });
                if (it != rows.end()) table += data::format_double(is_mape ? it->mape : it->acc);
            }
        }
        table += "\n";
    }
    write_text(ctx.dir / files::table, table);

    const auto s = load_splits(ctx);
    const auto pred_path = ctx.dir / files::predictions_ltccp;
    require(pred_path);
    const auto preds = models::read_predictions(pred_path);
    const int t = horizons.back();
    const auto dist_name = distribution_file_name(t);
    const auto hist = eval::distribution_export(preds, truth_of(s.test), t, ctx.config.histogram_bins);
    write_text(ctx.dir / dist_name, eval::distribution_csv(hist));
    write_manifest(ctx, "report", {report_path, ctx.dir / files::cohort, ctx.dir / files::split, pred_path},
                   {files::table, dist_name});
}

void cmd_pipeline(const StageContext& ctx, const std::optional<fs::path>& corpus) {
    if (!corpus) cmd_gen(ctx);
    cmd_ingest(ctx, corpus);
    cmd_train(ctx);
    cmd_predict(ctx);
    cmd_eval(ctx);
    cmd_report(ctx);
}

}  // namespace ltccp::cli
