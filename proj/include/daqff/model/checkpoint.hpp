#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>

#include <json.hpp>

#include "daqff/data/preprocess.hpp"
#include "daqff/model/baselines.hpp"
#include "daqff/nn/layer.hpp"

namespace daqff::model {

nlohmann::json to_json(const ModelSpec& spec);
/// Throws std::invalid_argument naming the offending field.
ModelSpec model_spec_from_json(const nlohmann::json& j);

struct LoadedModel {
    ModelSpec spec;
    std::unique_ptr<nn::Layer> model;
    data::ScaleParams scale;
    nlohmann::json config;   // run configuration stored alongside, or null
};

/// Text format, one item per line:
///
///   daqff-checkpoint
///   format_version 1
///   kind <kind>
///   model <json ModelSpec>
///   config <json run config | null>
///   scale <json [{"name","min","max"}...]>
///   param <name> <rank> <dims...>
///   <values, %.17g, space separated>
///   ...
///   end
///
/// 17 significant digits make every double round-trip exactly.
void save_checkpoint(std::ostream& out, const ModelSpec& spec, nn::Layer& model, const data::ScaleParams& scale,
                     const nlohmann::json& config = nullptr);
void save_checkpoint(const std::filesystem::path& path, const ModelSpec& spec, nn::Layer& model,
                     const data::ScaleParams& scale, const nlohmann::json& config = nullptr);

/// Rebuilds the model from its spec, then overwrites every parameter by
/// name; a missing, extra or reshaped parameter is an error.
LoadedModel load_checkpoint(std::istream& in, const std::string& source = "<checkpoint>");
LoadedModel load_checkpoint(const std::filesystem::path& path);

} // namespace daqff::model
