#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "daqff/data/preprocess.hpp"
#include "daqff/data/windows.hpp"
#include "daqff/eval/metrics.hpp"
#include "daqff/eval/run_config.hpp"
#include "daqff/model/baselines.hpp"
#include "daqff/optim/trainer.hpp"

namespace daqff::eval {

struct PreparedData {
    data::SeriesTable table;    // imputed and encoded, original units
    data::SeriesTable scaled;
    data::SplitRanges split;
    data::ScaleParams scale;
    data::WindowLayout layout;
    data::SupervisedWindows train;
    data::SupervisedWindows validation;
    data::SupervisedWindows test;
    std::string data_digest;
    std::vector<std::string> warnings;
};

/// Impute then encode categoricals per the schema.
data::SeriesTable clean_table(data::SeriesTable table, const data::CsvSchema& schema, std::vector<std::string>* warnings);

/// load -> impute -> encode -> split -> fit scale on train -> window each split.
/// With `fixed_scale` the stored scale is used instead of refitting.
PreparedData prepare_data(const RunConfig& config, const data::ScaleParams* fixed_scale = nullptr);

model::ModelSpec model_spec(const RunConfig& config, const PreparedData& prepared);

struct Evaluation {
    MetricsReport report;
    nn::Tensor predictions;            // N x H, original units
    nn::Tensor truths;                 // N x H, original units
    std::vector<std::size_t> target_rows;
};

/// Predicts the test windows in eval mode, inverts the scaling and scores
/// against the unscaled target column.
Evaluation evaluate_model(nn::Layer& model, const std::string& model_name, const RunConfig& config,
                          const PreparedData& prepared);

/// Original-unit RMSE over every horizon of `windows`.
double windows_rmse(nn::Layer& model, const data::SupervisedWindows& windows, const PreparedData& prepared);

struct TrainedModel {
    model::ModelSpec spec;
    std::unique_ptr<nn::Layer> model;
    std::vector<optim::EpochRecord> log;
};

/// Builds the model from the config seed and fits it; validation RMSE is
/// logged each epoch. `progress` receives one line per epoch.
TrainedModel train_model(const RunConfig& config, const PreparedData& prepared, std::ostream* progress = nullptr);

void write_report(const std::filesystem::path& path, const MetricsReport& report);
void write_training_log(const std::filesystem::path& path, const std::vector<optim::EpochRecord>& log);
/// Header timestamp,horizon,truth,prediction,model; timestamp is the target hour.
void write_plot_data(const std::filesystem::path& path, const Evaluation& evaluation, const PreparedData& prepared,
                     const std::string& model_name);

struct ExperimentResult {
    MetricsReport report;
    std::vector<optim::EpochRecord> log;
};

/// Full pipeline. Writes report.json, checkpoint.txt, train_log.jsonl and
/// plot_data.csv into config.output_dir. Stage failures are rethrown as
/// std::runtime_error prefixed with the stage name.
ExperimentResult run_experiment(const RunConfig& config, std::ostream* progress = nullptr);

} // namespace daqff::eval
