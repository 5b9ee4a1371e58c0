// daqff: train / evaluate / predict / gradcheck / synth / run.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "daqff/data/csv.hpp"
#include "daqff/data/synth.hpp"
#include "daqff/eval/digest.hpp"
#include "daqff/eval/experiment.hpp"
#include "daqff/eval/run_config.hpp"
#include "daqff/model/checkpoint.hpp"
#include "daqff/model/gradient_suite.hpp"
#include "daqff/optim/trainer.hpp"

namespace fs = std::filesystem;
using namespace daqff;

namespace {

void banner(std::uint64_t seed, const std::string& digest)
{
    std::cerr << "daqff  seed " << seed << "  config " << digest << '\n';
}

int cmd_train(const fs::path& config_path, const std::string& out_dir)
{
    eval::RunConfig cfg = eval::load_run_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    banner(cfg.seed, cfg.digest());
    const eval::PreparedData prepared = eval::prepare_data(cfg);
    for (const auto& w : prepared.warnings) std::cerr << "warning: " << w << '\n';
    eval::TrainedModel trained = eval::train_model(cfg, prepared, &std::cerr);
    fs::create_directories(cfg.output_dir);
    model::save_checkpoint(cfg.output_dir / "checkpoint.txt", trained.spec, *trained.model, prepared.scale, cfg.source);
    eval::write_training_log(cfg.output_dir / "train_log.jsonl", trained.log);
    std::cout << "checkpoint " << (cfg.output_dir / "checkpoint.txt").string() << '\n';
    return 0;
}

int cmd_evaluate(const std::string& model_arg, const fs::path& config_path, const std::string& report_path,
                 const std::string& plot_path)
{
    eval::RunConfig cfg = eval::load_run_config(config_path);
    banner(cfg.seed, cfg.digest());
    std::unique_ptr<nn::Layer> net;
    std::string name;
    eval::PreparedData prepared;
    if (model_arg == "persistence") {
        cfg.kind = model::ModelKind::persistence;
        prepared = eval::prepare_data(cfg);
        net = model::build_model(eval::model_spec(cfg, prepared), nullptr);
        name = "persistence";
    } else {
        model::LoadedModel loaded = model::load_checkpoint(fs::path(model_arg));
        cfg.model.lookup = loaded.spec.shape.lookup;
        cfg.model.horizon = loaded.spec.shape.horizon;
        prepared = eval::prepare_data(cfg, &loaded.scale);
        const model::ModelSpec expected = eval::model_spec(cfg, prepared);
        if (expected.shape.branches != loaded.spec.shape.branches ||
            expected.shape.channels_per_branch != loaded.spec.shape.channels_per_branch)
            throw std::runtime_error("checkpoint input layout does not match the configured data");
        net = std::move(loaded.model);
        name = model::to_string(loaded.spec.kind);
    }
    const eval::Evaluation e = eval::evaluate_model(*net, name, cfg, prepared);
    eval::write_report(report_path, e.report);
    if (!plot_path.empty()) eval::write_plot_data(plot_path, e, prepared, name);
    for (const auto& b : e.report.buckets) std::printf("%s rmse %.4f mae %.4f\n", b.label.c_str(), b.rmse, b.mae);
    return 0;
}

int cmd_predict(const fs::path& model_path, const fs::path& input, std::size_t horizon)
{
    model::LoadedModel loaded = model::load_checkpoint(model_path);
    if (loaded.config.is_null() || !loaded.config.contains("data"))
        throw std::runtime_error("checkpoint carries no data schema");
    const auto& data_json = loaded.config.at("data");
    const data::CsvSchema schema =
        data_json.contains("schema") ? eval::schema_from_json(data_json.at("schema")) : data::CsvSchema::beijing();
    banner(loaded.config.value("seed", std::uint64_t{0}), eval::json_digest(loaded.config));
    const std::size_t spec_h = loaded.spec.shape.horizon;
    if (horizon != spec_h)
        throw std::runtime_error("model predicts " + std::to_string(spec_h) + " steps, --horizon asked for " + std::to_string(horizon));

    data::SeriesTable table = eval::clean_table(data::load_series_csv(input, schema), schema, nullptr);
    table = data::minmax_apply(std::move(table), loaded.scale);
    const std::size_t lookup = loaded.spec.shape.lookup;
    if (table.rows() < lookup)
        throw std::runtime_error("input has " + std::to_string(table.rows()) + " rows, lookup needs " + std::to_string(lookup));
    // Windows need a target after the input; forecast from the last `lookup` rows instead.
    const data::WindowLayout layout = data::window_layout(table);
    nn::Tensor x({1, layout.branches(), lookup, layout.channels()});
    const std::size_t start = table.rows() - lookup;
    double* dst = x.data();
    for (std::size_t b = 0; b < layout.branches(); ++b)
        for (std::size_t l = 0; l < lookup; ++l)
            for (std::size_t c : layout.branch_columns[b]) *dst++ = table.columns[c].values[start + l];
    const nn::Tensor y = loaded.model->forward(x, nn::Mode::eval);
    const data::ColumnScale& s = loaded.scale.at(table.target_column);
    const std::string last = data::format_hour(table.hours.back());
    for (std::size_t h = 0; h < horizon; ++h) std::printf("%zu %.6f\n", h + 1, data::minmax_invert(y[h], s));
    std::cerr << "forecast after " << last << '\n';
    return 0;
}

int cmd_gradcheck(bool full, std::uint64_t seed)
{
    model::GradientSuiteOptions opts;
    opts.seed = seed;
    opts.cases_per_layer = full ? 60 : 20;
    nlohmann::json digest_src{{"cases_per_layer", opts.cases_per_layer}, {"seed", seed}, {"tolerance", opts.tolerance}};
    banner(seed, eval::json_digest(digest_src));
    model::GradientSuiteResult result = model::run_layer_gradient_suite(opts);
    result.cases.push_back(model::run_daqff_gradient_check(seed % 1000 + 11, opts.tolerance));
    for (const auto& s : result.summary())
        std::printf("%-14s cases %3zu  max rel err %.3e  %s\n", s.layer.c_str(), s.cases, s.max_relative_error,
                    s.passed ? "PASS" : "FAIL");
    std::printf("overall max rel err %.3e (tolerance %.0e): %s\n", result.max_relative_error(), opts.tolerance,
                result.passed() ? "PASS" : "FAIL");
    return result.passed() ? 0 : 1;
}

int cmd_synth(const std::string& kind, std::size_t rows, std::size_t stations, std::uint64_t seed, const fs::path& out)
{
    data::SynthOptions o{data::parse_synth_kind(kind), rows, stations, seed};
    banner(seed, eval::json_digest({{"kind", kind}, {"rows", rows}, {"stations", stations}, {"seed", seed}}));
    data::write_series_csv(out, data::synth_table(o), 10);
    std::cout << "wrote " << rows << " rows to " << out.string() << '\n';
    return 0;
}

int cmd_run(const fs::path& config_path, const std::string& out_dir)
{
    eval::RunConfig cfg = eval::load_run_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const eval::ExperimentResult r = eval::run_experiment(cfg, &std::cerr);
    for (const auto& b : r.report.buckets) std::printf("%s rmse %.4f mae %.4f\n", b.label.c_str(), b.rmse, b.mae);
    std::cout << "outputs in " << cfg.output_dir.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DAQFF PM2.5 forecaster"};
    app.require_subcommand(1);

    std::string config, out, model_arg, report, plot, input, kind = "sine";
    std::size_t horizon = 1, rows = 1000, stations = 3;
    std::uint64_t seed = 7;
    bool full = false;

    auto* train = app.add_subcommand("train", "fit a model and write checkpoint + training log");
    train->add_option("--config", config, "run configuration (JSON)")->required();
    train->add_option("--out", out, "output directory (default: config output_dir)");

    auto* evaluate = app.add_subcommand("evaluate", "score a checkpoint (or 'persistence') on the test split");
    evaluate->add_option("--model", model_arg, "checkpoint file or 'persistence'")->required();
    evaluate->add_option("--config", config, "run configuration (JSON)")->required();
    evaluate->add_option("--report", report, "report output (JSON)")->required();
    evaluate->add_option("--plot-data", plot, "plot data output (CSV)");

    auto* predict = app.add_subcommand("predict", "forecast H steps after the last row of a CSV");
    predict->add_option("--model", model_arg, "checkpoint file")->required();
    predict->add_option("--input", input, "series CSV in the training schema")->required();
    predict->add_option("--horizon", horizon, "number of steps (must equal the model's)")->required();

    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient suite");
    gradcheck->add_flag("--full", full, "more random cases per layer");
    gradcheck->add_option("--seed", seed, "suite seed");

    auto* synth = app.add_subcommand("synth", "write a deterministic synthetic series");
    synth->add_option("--kind", kind, "constant, sine, linear or multistation")->required();
    synth->add_option("--rows", rows, "row count")->required();
    synth->add_option("--stations", stations, "stations (multistation)");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--out", out, "output CSV")->required();

    auto* run = app.add_subcommand("run", "full experiment: train, evaluate, write all outputs");
    run->add_option("--config", config, "run configuration (JSON)")->required();
    run->add_option("--out", out, "output directory (default: config output_dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*train) return cmd_train(config, out);
        if (*evaluate) return cmd_evaluate(model_arg, config, report, plot);
        if (*predict) return cmd_predict(model_arg, input, horizon);
        if (*gradcheck) return cmd_gradcheck(full, seed);
        if (*synth) return cmd_synth(kind, rows, stations, seed, out);
        if (*run) return cmd_run(config, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
