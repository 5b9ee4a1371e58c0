#include "daqff/eval/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "daqff/data/csv.hpp"
#include "daqff/eval/digest.hpp"
#include "daqff/model/checkpoint.hpp"

namespace daqff::eval {

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

} // namespace

data::SeriesTable clean_table(data::SeriesTable table, const data::CsvSchema& schema, std::vector<std::string>* warnings)
{
    table = data::impute_column_mean(std::move(table), warnings);
    return data::encode_categoricals(std::move(table), schema.categorical, schema.one_hot);
}

PreparedData prepare_data(const RunConfig& config, const data::ScaleParams* fixed_scale)
{
    PreparedData p;
    data::SeriesTable raw = stage("load", [&] { return data::load_series_csv(config.data_path, config.schema); });
    p.data_digest = file_sha256(config.data_path);
    p.table = stage("clean", [&] { return clean_table(std::move(raw), config.schema, &p.warnings); });
    p.split = stage("split", [&] { return data::split_chronological(p.table, config.split); });
    p.scale = stage("scale", [&] { return fixed_scale ? *fixed_scale : data::minmax_fit(p.table, p.split.train); });
    p.scaled = stage("scale", [&] { return data::minmax_apply(p.table, p.scale); });
    stage("window", [&] {
        p.layout = data::window_layout(p.scaled);
        const std::size_t l = config.model.lookup, h = config.model.horizon;
        p.train = data::make_windows(p.scaled, l, h, p.split.train);
        p.validation = data::make_windows(p.scaled, l, h, p.split.validation);
        p.test = data::make_windows(p.scaled, l, h, p.split.test);
        for (auto* w : {&p.train, &p.validation, &p.test}) w->scale = p.scale;
        return 0;
    });
    return p;
}

model::ModelSpec model_spec(const RunConfig& config, const PreparedData& prepared)
{
    model::ModelSpec spec;
    spec.kind = config.kind;
    spec.shape = config.model;
    spec.shape.branches = prepared.layout.branches();
    spec.shape.channels_per_branch = prepared.layout.channels();
    spec.target_channel = prepared.layout.target_channel;
    return spec;
}

namespace {

nn::Tensor invert_target(const nn::Tensor& scaled, const PreparedData& prepared)
{
    const data::ColumnScale& s = prepared.scale.at(prepared.table.target_column);
    nn::Tensor out(scaled.shape());
    for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = data::minmax_invert(scaled[i], s);
    return out;
}

nn::Tensor raw_targets(const data::SupervisedWindows& w, const PreparedData& prepared)
{
    const auto& target = prepared.table.columns[prepared.layout.target_column].values;
    nn::Tensor out({w.size(), w.horizon});
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t h = 0; h < w.horizon; ++h) out[i * w.horizon + h] = target[w.target_rows[i] + h];
    return out;
}

} // namespace

double windows_rmse(nn::Layer& model, const data::SupervisedWindows& windows, const PreparedData& prepared)
{
    const nn::Tensor pred = invert_target(optim::predict(model, windows.inputs), prepared);
    const nn::Tensor truth = raw_targets(windows, prepared);
    return rmse(pred.values(), truth.values());
}

Evaluation evaluate_model(nn::Layer& model, const std::string& model_name, const RunConfig& config,
                          const PreparedData& prepared)
{
    Evaluation e;
    e.predictions = invert_target(optim::predict(model, prepared.test.inputs), prepared);
    e.truths = raw_targets(prepared.test, prepared);
    e.target_rows = prepared.test.target_rows;
    e.report = horizon_metrics(e.predictions, e.truths, config.buckets);
    e.report.model = model_name;
    e.report.provenance = {config.seed, config.digest(), prepared.data_digest};
    return e;
}

TrainedModel train_model(const RunConfig& config, const PreparedData& prepared, std::ostream* progress)
{
    TrainedModel t;
    t.spec = model_spec(config, prepared);
    t.model = model::build_model(t.spec, std::make_shared<nn::Rng>(config.seed));
    if (t.spec.kind == model::ModelKind::persistence) return t;
    auto validate = [&](nn::Layer& m) -> std::optional<double> { return windows_rmse(m, prepared.validation, prepared); };
    auto report = [&](const optim::EpochRecord& r) {
        if (progress) *progress << optim::to_json_line(r) << std::endl;
    };
    t.log = optim::fit(*t.model, prepared.train, config.train, validate, report);
    return t;
}

void write_report(const std::filesystem::path& path, const MetricsReport& report)
{
    auto out = open_out(path);
    out << report.to_json().dump(2) << '\n';
}

void write_training_log(const std::filesystem::path& path, const std::vector<optim::EpochRecord>& log)
{
    auto out = open_out(path);
    for (const auto& r : log) out << optim::to_json_line(r) << '\n';
}

void write_plot_data(const std::filesystem::path& path, const Evaluation& e, const PreparedData& prepared,
                     const std::string& model_name)
{
    auto out = open_out(path);
    out << "timestamp,horizon,truth,prediction,model\n";
    const std::size_t horizon = e.predictions.dim(1);
    char buf[128];
    for (std::size_t i = 0; i < e.target_rows.size(); ++i) {
        for (std::size_t h = 0; h < horizon; ++h) {
            const std::string ts = data::format_hour(prepared.table.hours[e.target_rows[i] + h]);
            std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f,", h + 1, e.truths[i * horizon + h], e.predictions[i * horizon + h]);
            out << ts << buf << model_name << '\n';
        }
    }
}

ExperimentResult run_experiment(const RunConfig& config, std::ostream* progress)
{
    if (progress) *progress << "seed " << config.seed << "  config " << config.digest() << std::endl;
    const PreparedData prepared = prepare_data(config);
    if (progress)
        for (const auto& w : prepared.warnings) *progress << "warning: " << w << std::endl;
    TrainedModel trained = stage("train", [&] { return train_model(config, prepared, progress); });
    const std::string name = model::to_string(trained.spec.kind);
    Evaluation evaluation = stage("evaluate", [&] { return evaluate_model(*trained.model, name, config, prepared); });
    stage("write", [&] {
        std::filesystem::create_directories(config.output_dir);
        write_report(config.output_dir / "report.json", evaluation.report);
        model::save_checkpoint(config.output_dir / "checkpoint.txt", trained.spec, *trained.model, prepared.scale, config.source);
        write_training_log(config.output_dir / "train_log.jsonl", trained.log);
        write_plot_data(config.output_dir / "plot_data.csv", evaluation, prepared, name);
        return 0;
    });
    return {evaluation.report, trained.log};
}

} // namespace daqff::eval
