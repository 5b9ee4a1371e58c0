#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "daqff/data/csv.hpp"
#include "daqff/data/preprocess.hpp"
#include "daqff/eval/metrics.hpp"
#include "daqff/model/baselines.hpp"
#include "daqff/optim/trainer.hpp"

namespace daqff::eval {

/// A complete, validated experiment description. See README for the file format.
struct RunConfig {
    std::uint64_t seed = 0;
    std::filesystem::path data_path;
    data::CsvSchema schema;
    data::SplitSpec split;
    model::ModelKind kind = model::ModelKind::daqff;
    /// lookup, horizon and layer sizes; branches and channels come from the data.
    model::DaqffConfig model;
    optim::TrainConfig train;
    std::vector<HorizonBucket> buckets;
    std::filesystem::path output_dir;
    /// The parsed document, for digests and checkpoints.
    nlohmann::json source;

    /// SHA-256 of the key-sorted document.
    std::string digest() const;
};

/// Relative paths resolve against `base_dir`. Throws std::invalid_argument
/// naming the offending field ("config field 'model.lookup': ...").
RunConfig parse_run_config(const nlohmann::json& document, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json schema_to_json(const data::CsvSchema& schema);
data::CsvSchema schema_from_json(const nlohmann::json& j, const std::string& field = "data.schema");

} // namespace daqff::eval
