#include <functional>

#include <CLI11.hpp>

#include "ltccp/cli/pipeline.hpp"
#include "ltccp/errors.hpp"
#include "ltccp/parallel.hpp"

namespace ltccp::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Long-term citation count forecasting"};
    app.name("ltccp");
    app.set_version_flag("--version", std::string("ltccp ") + LTCCP_VERSION
#ifdef LTCCP_HAVE_OPENMP
                                          + " (openmp)"
#endif
    );
    app.require_subcommand(1);

    std::string config_path;
    std::string dir = "run";
    std::string corpus;
    bool serial = false;
    Overrides ov;
    std::uint64_t seed = 0;
    int epochs = 0, train_years = 0, horizon = 0;
    double epsilon = 0.0;

    const std::vector<std::pair<std::string, std::string>> stages{
        {"gen", "generate a synthetic corpus"},
        {"ingest", "build citation sequences, the cohort and the split"},
        {"train", "fit LT-CCP and the LR and CART baselines"},
        {"predict", "forecast the test split with every model"},
        {"eval", "score the forecasts"},
        {"report", "write the model table and distribution export"},
        {"pipeline", "run every stage in order"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : stages) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run config (TOML)");
        sub->add_option("--dir", dir, "run directory")->capture_default_str();
        sub->add_option("--seed", seed, "global seed");
        sub->add_option("--epochs", epochs, "training epochs");
        sub->add_option("--epsilon", epsilon, "ACC tolerance");
        sub->add_option("--train-years", train_years, "observed years per paper");
        sub->add_option("--horizon", horizon, "forecast years");
        sub->add_flag("--serial", serial, "disable the parallel kernels");
        if (name == "ingest" || name == "pipeline") {
            sub->add_option("--corpus", corpus, "NDJSON corpus (plain or gzip) instead of the generated one");
        }
        subs.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << nlohmann::json{{"error", "usage"}, {"message", e.what()}, {"exit_code", int(ExitCode::usage)}}.dump()
            << "\n";
        return static_cast<int>(ExitCode::usage);
    }

    try {
        const auto* sub = app.get_subcommands().front();
        if (sub->count("--seed")) ov.seed = seed;
        if (sub->count("--epochs")) ov.epochs = epochs;
        if (sub->count("--epsilon")) ov.epsilon = epsilon;
        if (sub->count("--train-years")) ov.train_years = train_years;
        if (sub->count("--horizon")) ov.horizon = horizon;

        StageContext ctx;
        ctx.config = config_path.empty() ? resolve_config(nlohmann::json::object(), ov) : load_config(config_path, ov);
        ctx.dir = dir;
        ctx.exec = serial ? Execution::serial : Execution::parallel;
        std::optional<std::filesystem::path> corpus_path;
        if (!corpus.empty()) corpus_path = corpus;

        const std::string name = sub->get_name();
        if (name == "gen") cmd_gen(ctx);
        else if (name == "ingest") cmd_ingest(ctx, corpus_path);
        else if (name == "train") cmd_train(ctx);
        else if (name == "predict") cmd_predict(ctx);
        else if (name == "eval") cmd_eval(ctx);
        else if (name == "report") cmd_report(ctx);
        else cmd_pipeline(ctx, corpus_path);
        out << nlohmann::json{{"stage", name}, {"dir", ctx.dir.string()}, {"status", "ok"}}.dump() << "\n";
        return 0;
    } catch (const std::exception& e) {
        const auto j = error_json(e);
        err << j.dump() << "\n";
        return j.at("exit_code").get<int>();
    }
}

}  // namespace ltccp::cli
