#include "daqff/model/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace daqff::model {

using nlohmann::json;

json to_json(const ModelSpec& spec)
{
    const DaqffConfig& s = spec.shape;
    json convs = json::array();
    for (const auto& c : s.conv_specs) convs.push_back({c.filters, c.kernel});
    return json{{"kind", to_string(spec.kind)},
                {"branches", s.branches},
                {"channels_per_branch", s.channels_per_branch},
                {"lookup", s.lookup},
                {"horizon", s.horizon},
                {"conv_specs", convs},
                {"branch_projection_dim", s.branch_projection_dim},
                {"hidden", s.bilstm_hidden},
                {"dropout", s.dropout_p},
                {"target_channel", spec.target_channel}};
}

namespace {

std::size_t count_field(const json& j, const char* key)
{
    if (!j.contains(key)) throw std::invalid_argument(std::string("model spec lacks '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) throw std::invalid_argument(std::string("model spec field '") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

} // namespace

ModelSpec model_spec_from_json(const json& j)
{
    if (!j.is_object()) throw std::invalid_argument("model spec must be an object");
    ModelSpec spec;
    if (!j.contains("kind") || !j.at("kind").is_string()) throw std::invalid_argument("model spec lacks 'kind'");
    spec.kind = parse_model_kind(j.at("kind").get<std::string>());
    DaqffConfig& s = spec.shape;
    s.branches = count_field(j, "branches");
    s.channels_per_branch = count_field(j, "channels_per_branch");
    s.lookup = count_field(j, "lookup");
    s.horizon = count_field(j, "horizon");
    s.branch_projection_dim = count_field(j, "branch_projection_dim");
    s.bilstm_hidden = count_field(j, "hidden");
    spec.target_channel = count_field(j, "target_channel");
    if (!j.contains("dropout") || !j.at("dropout").is_number()) throw std::invalid_argument("model spec lacks 'dropout'");
    s.dropout_p = j.at("dropout").get<double>();
    s.conv_specs.clear();
    for (const auto& c : j.at("conv_specs")) {
        if (!c.is_array() || c.size() != 2) throw std::invalid_argument("model spec field 'conv_specs' entries must be [filters, kernel]");
        s.conv_specs.push_back({c[0].get<std::size_t>(), c[1].get<std::size_t>()});
    }
    if (spec.kind != ModelKind::persistence) s.validate();
    return spec;
}

void save_checkpoint(std::ostream& out, const ModelSpec& spec, nn::Layer& model, const data::ScaleParams& scale,
                     const json& config)
{
    json scale_json = json::array();
    for (const auto& c : scale.columns) scale_json.push_back({{"name", c.name}, {"min", c.min}, {"max", c.max}});
    out << "daqff-checkpoint\n";
    out << "format_version 1\n";
    out << "kind " << to_string(spec.kind) << '\n';
    out << "model " << to_json(spec).dump() << '\n';
    out << "config " << config.dump() << '\n';
    out << "scale " << scale_json.dump() << '\n';
    char buf[40];
    for (const auto& ref : model.named_parameters()) {
        const nn::Tensor& t = ref.param->value;
        out << "param " << ref.name << ' ' << t.rank();
        for (auto d : t.shape()) out << ' ' << d;
        out << '\n';
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", t[i]);
            if (i) out << ' ';
            out << buf;
        }
        out << '\n';
    }
    out << "end\n";
}

void save_checkpoint(const std::filesystem::path& path, const ModelSpec& spec, nn::Layer& model,
                     const data::ScaleParams& scale, const json& config)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint '" + path.string() + "'");
    save_checkpoint(out, spec, model, scale, config);
    if (!out) throw std::runtime_error("write failed for checkpoint '" + path.string() + "'");
}

namespace {

std::string expect_line(std::istream& in, const std::string& source, const std::string& key)
{
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(source + ": truncated, expected '" + key + "'");
    if (line.compare(0, key.size() + 1, key + " ") != 0) throw std::runtime_error(source + ": expected '" + key + "', got '" + line.substr(0, 40) + "'");
    return line.substr(key.size() + 1);
}

} // namespace

LoadedModel load_checkpoint(std::istream& in, const std::string& source)
{
    std::string line;
    if (!std::getline(in, line) || line != "daqff-checkpoint") throw std::runtime_error(source + ": not a checkpoint file");
    const std::string version = expect_line(in, source, "format_version");
    if (version != "1") throw std::runtime_error(source + ": unsupported format_version " + version);
    const std::string kind = expect_line(in, source, "kind");

    LoadedModel loaded;
    try {
        loaded.spec = model_spec_from_json(json::parse(expect_line(in, source, "model")));
        loaded.config = json::parse(expect_line(in, source, "config"));
        for (const auto& c : json::parse(expect_line(in, source, "scale")))
            loaded.scale.columns.push_back({c.at("name").get<std::string>(), c.at("min").get<double>(), c.at("max").get<double>()});
    } catch (const json::exception& e) {
        throw std::runtime_error(source + ": malformed header: " + e.what());
    }
    if (to_string(loaded.spec.kind) != kind) throw std::runtime_error(source + ": kind line disagrees with model spec");

    // Parameter initialization is overwritten below, so any seed will do.
    loaded.model = build_model(loaded.spec, std::make_shared<nn::Rng>(0));
    std::map<std::string, nn::Parameter*> by_name;
    for (const auto& ref : loaded.model->named_parameters()) by_name[ref.name] = ref.param;

    for (;;) {
        if (!std::getline(in, line)) throw std::runtime_error(source + ": truncated, missing 'end'");
        if (line == "end") break;
        std::istringstream head(line);
        std::string tag, name;
        std::size_t rank = 0;
        head >> tag >> name >> rank;
        if (tag != "param" || !head) throw std::runtime_error(source + ": expected a param record, got '" + line.substr(0, 40) + "'");
        nn::Shape shape(rank);
        for (auto& d : shape) head >> d;
        if (!head) throw std::runtime_error(source + ": bad shape for '" + name + "'");
        auto it = by_name.find(name);
        if (it == by_name.end()) throw std::runtime_error(source + ": unexpected parameter '" + name + "'");
        nn::Parameter& p = *it->second;
        if (p.value.shape() != shape) {
            throw std::runtime_error(source + ": parameter '" + name + "' has shape " + nn::shape_string(shape) +
                                     ", model expects " + nn::shape_string(p.value.shape()));
        }
        if (!std::getline(in, line)) throw std::runtime_error(source + ": missing values for '" + name + "'");
        const char* cur = line.data();
        const char* end = cur + line.size();
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            while (cur < end && *cur == ' ') ++cur;
            auto [ptr, ec] = std::from_chars(cur, end, p.value[i]);
            if (ec != std::errc()) throw std::runtime_error(source + ": bad value in '" + name + "' at index " + std::to_string(i));
            cur = ptr;
        }
        while (cur < end && *cur == ' ') ++cur;
        if (cur != end) throw std::runtime_error(source + ": too many values for '" + name + "'");
        by_name.erase(it);
    }
    if (!by_name.empty()) throw std::runtime_error(source + ": parameter '" + by_name.begin()->first + "' missing");
    return loaded;
}

LoadedModel load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint '" + path.string() + "'");
    return load_checkpoint(in, path.string());
}

} // namespace daqff::model
