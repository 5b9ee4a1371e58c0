#include "daqff/eval/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "daqff/eval/digest.hpp"

namespace daqff::eval {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why)
{
    throw std::invalid_argument("config field '" + field + "': " + why);
}

void allow_keys(const json& obj, const std::string& field, std::initializer_list<const char*> keys)
{
    if (!obj.is_object()) bad(field, "must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) bad(field.empty() ? k : field + "." + k, "unknown field");
}

// Literals built in code arrive as signed integers, parsed text as unsigned.
bool non_negative_integer(const json& v)
{
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::string join(const std::string& a, const char* b) { return a.empty() ? std::string(b) : a + "." + b; }

std::size_t get_count(const json& obj, const std::string& field, const char* key, std::size_t fallback, std::size_t min = 1)
{
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!non_negative_integer(v) || v.get<std::size_t>() < min)
        bad(join(field, key), "must be an integer >= " + std::to_string(min));
    return v.get<std::size_t>();
}

double get_real(const json& obj, const std::string& field, const char* key, double fallback)
{
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) bad(join(field, key), "must be a number");
    return obj.at(key).get<double>();
}

std::string get_string(const json& obj, const std::string& field, const char* key, const std::string& fallback)
{
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) bad(join(field, key), "must be a string");
    return obj.at(key).get<std::string>();
}

std::vector<std::string> get_strings(const json& obj, const std::string& field, const char* key,
                                     const std::vector<std::string>& fallback)
{
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) bad(join(field, key), "must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) bad(join(field, key), "must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

data::YearSplit parse_years(const json& y, const std::string& field)
{
    allow_keys(y, field, {"train", "validation", "test"});
    data::YearSplit s;
    auto pair = [&](const char* key, int& first, int& last) {
        if (!y.contains(key)) bad(join(field, key), "missing");
        const json& v = y.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
            bad(join(field, key), "must be [first_year, last_year]");
        first = v[0].get<int>();
        last = v[1].get<int>();
        if (first > last) bad(join(field, key), "first year after last year");
    };
    pair("train", s.train_first, s.train_last);
    pair("validation", s.validation_first, s.validation_last);
    pair("test", s.test_first, s.test_last);
    return s;
}

} // namespace

json schema_to_json(const data::CsvSchema& s)
{
    json stations = json::array();
    for (const auto& g : s.stations) stations.push_back(g);
    return {{"time_fields", s.time_fields}, {"target", s.target},           {"features", s.features},
            {"ignore", s.ignore},           {"categorical", s.categorical}, {"missing_token", s.missing_token},
            {"max_gap_fill", s.max_gap_fill}, {"one_hot", s.one_hot},      {"stations", s.station_count > 0 && s.stations.empty() ? json(s.station_count) : stations}};
}

data::CsvSchema schema_from_json(const json& j, const std::string& field)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "beijing") return data::CsvSchema::beijing();
        if (j.get<std::string>() == "synthetic") {
            data::CsvSchema s;
            s.categorical.clear();
            return s;
        }
        bad(field, "unknown preset '" + j.get<std::string>() + "' (expected \"beijing\", \"synthetic\" or an object)");
    }
    allow_keys(j, field,
               {"preset", "time_fields", "target", "features", "ignore", "categorical", "missing_token", "max_gap_fill",
                "one_hot", "stations"});
    data::CsvSchema s;
    if (j.contains("preset")) s = schema_from_json(j.at("preset"), join(field, "preset"));
    s.time_fields = get_strings(j, field, "time_fields", s.time_fields);
    if (s.time_fields.size() != 1 && s.time_fields.size() != 4) bad(join(field, "time_fields"), "must name 1 or 4 fields");
    s.target = get_string(j, field, "target", s.target);
    if (s.target.empty()) bad(join(field, "target"), "must not be empty");
    s.features = get_strings(j, field, "features", s.features);
    s.ignore = get_strings(j, field, "ignore", s.ignore);
    if (j.contains("categorical")) {
        const json& c = j.at("categorical");
        if (!c.is_object()) bad(join(field, "categorical"), "must map column names to category lists");
        s.categorical.clear();
        for (const auto& [name, order] : c.items()) {
            s.categorical[name] = get_strings(c, join(field, "categorical"), name.c_str(), {});
            if (s.categorical[name].empty()) bad(join(field, "categorical") + "." + name, "needs at least one category");
        }
    }
    s.missing_token = get_string(j, field, "missing_token", s.missing_token);
    s.max_gap_fill = get_count(j, field, "max_gap_fill", s.max_gap_fill, 0);
    if (j.contains("one_hot")) {
        if (!j.at("one_hot").is_boolean()) bad(join(field, "one_hot"), "must be true or false");
        s.one_hot = j.at("one_hot").get<bool>();
    }
    if (j.contains("stations")) {
        const json& st = j.at("stations");
        s.stations.clear();
        s.station_count = 0;
        if (non_negative_integer(st)) {
            s.station_count = st.get<std::size_t>();
        } else if (st.is_array()) {
            for (const auto& group : st) {
                std::vector<std::string> names;
                if (!group.is_array() || group.empty()) bad(join(field, "stations"), "each station must be a non-empty array of column names");
                for (const auto& name : group) {
                    if (!name.is_string()) bad(join(field, "stations"), "column names must be strings");
                    names.push_back(name.get<std::string>());
                }
                s.stations.push_back(std::move(names));
            }
        } else {
            bad(join(field, "stations"), "must be a station count or an array of column-name arrays");
        }
    }
    return s;
}

std::string RunConfig::digest() const { return json_digest(source); }

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir)
{
    allow_keys(doc, "", {"seed", "data", "split", "model", "train", "buckets", "output_dir"});
    RunConfig cfg;
    cfg.source = doc;

    if (!doc.contains("seed")) bad("seed", "missing (a seed is mandatory)");
    if (!non_negative_integer(doc.at("seed"))) bad("seed", "must be a non-negative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();

    if (!doc.contains("data")) bad("data", "missing");
    const json& d = doc.at("data");
    allow_keys(d, "data", {"path", "schema"});
    if (!d.contains("path") || !d.at("path").is_string()) bad("data.path", "missing or not a string");
    cfg.data_path = std::filesystem::path(d.at("path").get<std::string>());
    if (cfg.data_path.is_relative()) cfg.data_path = base_dir / cfg.data_path;
    cfg.schema = d.contains("schema") ? schema_from_json(d.at("schema")) : data::CsvSchema::beijing();

    if (!doc.contains("split") || (doc.at("split").is_string() && doc.at("split").get<std::string>() == "beijing")) {
        cfg.split = data::SplitSpec::beijing();
    } else {
        const json& s = doc.at("split");
        if (s.is_string()) bad("split", "unknown preset '" + s.get<std::string>() + "'");
        allow_keys(s, "split", {"years", "fractions"});
        if (s.contains("years")) {
            cfg.split.years = parse_years(s.at("years"), "split.years");
        } else if (s.contains("fractions")) {
            const json& f = s.at("fractions");
            if (!f.is_array() || f.size() != 3) bad("split.fractions", "must be [train, validation, test]");
            double sum = 0.0;
            for (int i = 0; i < 3; ++i) {
                if (!f[i].is_number() || f[i].get<double>() < 0.0) bad("split.fractions", "entries must be non-negative numbers");
                cfg.split.fractions[i] = f[i].get<double>();
                sum += cfg.split.fractions[i];
            }
            if (std::abs(sum - 1.0) > 1e-9) bad("split.fractions", "must sum to 1");
        } else {
            bad("split", "needs 'years' or 'fractions'");
        }
    }

    if (!doc.contains("model")) bad("model", "missing");
    const json& m = doc.at("model");
    allow_keys(m, "model", {"kind", "lookup", "horizon", "conv_specs", "branch_projection_dim", "hidden", "dropout"});
    try {
        cfg.kind = model::parse_model_kind(get_string(m, "model", "kind", "daqff"));
    } catch (const std::invalid_argument& e) {
        bad("model.kind", e.what());
    }
    cfg.model.lookup = get_count(m, "model", "lookup", 9);
    cfg.model.horizon = get_count(m, "model", "horizon", 1);
    cfg.model.branch_projection_dim = get_count(m, "model", "branch_projection_dim", cfg.model.branch_projection_dim);
    cfg.model.bilstm_hidden = get_count(m, "model", "hidden", cfg.model.bilstm_hidden);
    cfg.model.dropout_p = get_real(m, "model", "dropout", cfg.model.dropout_p);
    if (!(cfg.model.dropout_p >= 0.0 && cfg.model.dropout_p < 1.0)) bad("model.dropout", "must lie in [0, 1)");
    if (m.contains("conv_specs")) {
        const json& c = m.at("conv_specs");
        if (!c.is_array() || c.empty()) bad("model.conv_specs", "must be a non-empty array of [filters, kernel]");
        cfg.model.conv_specs.clear();
        for (const auto& e : c) {
            if (!e.is_array() || e.size() != 2 || !non_negative_integer(e[0]) || !non_negative_integer(e[1]) ||
                e[0].get<std::size_t>() == 0 || e[1].get<std::size_t>() == 0)
                bad("model.conv_specs", "entries must be [filters >= 1, kernel >= 1]");
            cfg.model.conv_specs.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
        }
    }

    const json t = doc.contains("train") ? doc.at("train") : json::object();
    allow_keys(t, "train", {"batch_size", "epochs", "learning_rate", "clip_norm"});
    cfg.train.batch_size = get_count(t, "train", "batch_size", cfg.train.batch_size);
    cfg.train.epochs = get_count(t, "train", "epochs", cfg.train.epochs, 0);
    cfg.train.learning_rate = get_real(t, "train", "learning_rate", cfg.train.learning_rate);
    if (!(cfg.train.learning_rate > 0.0)) bad("train.learning_rate", "must be > 0");
    cfg.train.clip_norm = get_real(t, "train", "clip_norm", 0.0);
    if (!(cfg.train.clip_norm >= 0.0)) bad("train.clip_norm", "must be >= 0");
    // The shuffle stream is kept apart from the initialization stream.
    cfg.train.seed = cfg.seed ^ 0x9E3779B97F4A7C15ull;

    if (doc.contains("buckets")) {
        for (const auto& label : get_strings(doc, "", "buckets", {})) {
            HorizonBucket b;
            try {
                b = parse_bucket(label);
            } catch (const std::invalid_argument& e) {
                bad("buckets", e.what());
            }
            if (b.last > cfg.model.horizon)
                bad("buckets", "bucket " + label + " exceeds horizon " + std::to_string(cfg.model.horizon));
            cfg.buckets.push_back(b);
        }
    } else {
        cfg.buckets = default_buckets(cfg.model.horizon);
    }

    cfg.output_dir = std::filesystem::path(get_string(doc, "", "output_dir", "out"));
    if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc, path.parent_path());
}

} // namespace daqff::eval
