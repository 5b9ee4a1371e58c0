#include "daqff/data/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace daqff::data {

CsvSchema CsvSchema::beijing()
{
    CsvSchema s;
    s.features = {"pm2.5", "DEWP", "TEMP", "PRES", "cbwd", "Iws", "Is", "Ir"};
    return s;
}

namespace {

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        std::string f = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto first = f.find_first_not_of(" \t");
        const auto last = f.find_last_not_of(" \t");
        fields.push_back(first == std::string::npos ? std::string() : f.substr(first, last - first + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool parse_double(const std::string& text, double& out)
{
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_uint(std::string_view text, unsigned& out)
{
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_int(std::string_view text, int& out)
{
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

HourStamp parse_timestamp(const std::string& text)
{
    // YYYY-MM-DD[ T]HH[:MM[:SS]]
    int y = 0;
    unsigned mo = 0, d = 0, h = 0;
    bool ok = text.size() >= 13 && text[4] == '-' && text[7] == '-' && (text[10] == ' ' || text[10] == 'T') &&
              parse_int(std::string_view(text).substr(0, 4), y) &&
              parse_uint(std::string_view(text).substr(5, 2), mo) &&
              parse_uint(std::string_view(text).substr(8, 2), d) &&
              parse_uint(std::string_view(text).substr(11, 2), h);
    if (ok && text.size() > 13) ok = text[13] == ':' && text.substr(14, 2) == "00" && (text.size() == 16 || text.substr(16) == ":00");
    if (!ok) throw std::invalid_argument("unparseable timestamp '" + text + "' (expected YYYY-MM-DD HH:00)");
    return hour_stamp(y, mo, d, h);
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what)
{
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

} // namespace

SeriesTable load_series_csv(const std::filesystem::path& path, const CsvSchema& schema)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open data file '" + path.string() + "'");
    return parse_series_csv(in, schema, path.string());
}

SeriesTable parse_series_csv(std::istream& in, const CsvSchema& schema, const std::string& source)
{
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) fail(source, 1, "empty file, header expected");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const std::vector<std::string> header = split_line(line);

    auto find = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) fail(source, 1, "header lacks column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };

    if (schema.time_fields.size() != 4 && schema.time_fields.size() != 1)
        throw std::invalid_argument("schema.time_fields must name 4 fields (year, month, day, hour) or 1 timestamp field");
    std::vector<std::size_t> time_idx;
    for (const auto& f : schema.time_fields) time_idx.push_back(find(f));

    std::vector<std::string> features = schema.features;
    if (features.empty()) {
        for (const auto& h : header) {
            const bool is_time = std::find(schema.time_fields.begin(), schema.time_fields.end(), h) != schema.time_fields.end();
            const bool ignored = std::find(schema.ignore.begin(), schema.ignore.end(), h) != schema.ignore.end();
            if (!is_time && !ignored) features.push_back(h);
        }
    }
    if (schema.target.empty()) throw std::invalid_argument("schema.target must name a column");
    if (std::find(features.begin(), features.end(), schema.target) == features.end()) features.insert(features.begin(), schema.target);

    SeriesTable table;
    table.target_column = schema.target;
    std::vector<std::size_t> feature_idx;
    for (const auto& f : features) {
        if (table.has_column(f)) throw std::invalid_argument("schema lists column '" + f + "' twice");
        feature_idx.push_back(find(f));
        Column c;
        c.name = f;
        c.categorical = schema.categorical.count(f) > 0;
        table.columns.push_back(std::move(c));
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size()) {
            fail(source, line_no, "row has " + std::to_string(fields.size()) + " fields, header has " +
                                      std::to_string(header.size()));
        }
        HourStamp stamp = 0;
        try {
            if (time_idx.size() == 1) {
                stamp = parse_timestamp(fields[time_idx[0]]);
            } else {
                int y = 0;
                unsigned parts[3] = {0, 0, 0};
                if (!parse_int(fields[time_idx[0]], y)) fail(source, line_no, "column '" + schema.time_fields[0] + "': bad integer '" + fields[time_idx[0]] + "'");
                for (int k = 0; k < 3; ++k) {
                    if (!parse_uint(fields[time_idx[k + 1]], parts[k]))
                        fail(source, line_no, "column '" + schema.time_fields[k + 1] + "': bad integer '" + fields[time_idx[k + 1]] + "'");
                }
                stamp = hour_stamp(y, parts[0], parts[1], parts[2]);
            }
        } catch (const std::invalid_argument& e) {
            fail(source, line_no, e.what());
        }

        if (!table.hours.empty()) {
            const HourStamp prev = table.hours.back();
            if (stamp <= prev) fail(source, line_no, "timestamp " + format_hour(stamp) + " does not increase");
            const HourStamp gap = stamp - prev - 1;
            if (gap > 0) {
                if (static_cast<std::size_t>(gap) > schema.max_gap_fill)
                    fail(source, line_no, "gap of " + std::to_string(gap) + " hour(s) before " + format_hour(stamp));
                for (HourStamp g = 1; g <= gap; ++g) {
                    table.hours.push_back(prev + g);
                    for (auto& c : table.columns) {
                        c.values.push_back(c.values.back());
                        c.missing.push_back(c.missing.back());
                        if (c.categorical) c.labels.push_back(c.labels.back());
                    }
                }
            }
        }
        table.hours.push_back(stamp);
        for (std::size_t k = 0; k < feature_idx.size(); ++k) {
            Column& c = table.columns[k];
            const std::string& cell = fields[feature_idx[k]];
            const bool missing = cell == schema.missing_token || cell.empty();
            c.missing.push_back(missing);
            if (c.categorical) {
                c.labels.push_back(missing ? std::string() : cell);
                c.values.push_back(nan);
            } else if (missing) {
                c.values.push_back(nan);
            } else {
                double v = 0.0;
                if (!parse_double(cell, v)) fail(source, line_no, "column '" + c.name + "': unparseable value '" + cell + "'");
                c.values.push_back(v);
            }
        }
    }
    if (table.hours.empty()) fail(source, line_no, "no data rows");

    if (!schema.stations.empty()) {
        for (const auto& group : schema.stations)
            for (const auto& name : group)
                if (!table.has_column(name)) throw std::invalid_argument("station grouping names unknown column '" + name + "'");
        table.stations = schema.stations;
    } else if (schema.station_count > 1) {
        const std::size_t n = schema.station_count;
        if (table.columns.size() % n != 0) {
            throw std::invalid_argument("cannot split " + std::to_string(table.columns.size()) + " columns into " +
                                        std::to_string(n) + " equal stations");
        }
        const std::size_t per = table.columns.size() / n;
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::string> group;
            for (std::size_t j = 0; j < per; ++j) group.push_back(table.columns[s * per + j].name);
            table.stations.push_back(std::move(group));
        }
    }
    table.validate();
    return table;
}

void write_series_csv(std::ostream& out, const SeriesTable& table, int precision, const std::string& missing_token)
{
    out << "No,year,month,day,hour";
    for (const auto& c : table.columns) out << ',' << c.name;
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const std::string iso = format_hour(table.hours[r]);
        // iso = YYYY-MM-DDTHH:00
        out << r + 1 << ',' << std::stoi(iso.substr(0, 4)) << ',' << std::stoi(iso.substr(5, 2)) << ','
            << std::stoi(iso.substr(8, 2)) << ',' << std::stoi(iso.substr(11, 2));
        for (const auto& c : table.columns) {
            out << ',';
            if (c.missing[r]) {
                out << missing_token;
            } else if (c.categorical) {
                out << c.labels[r];
            } else {
                std::snprintf(buf, sizeof buf, "%.*g", precision, c.values[r]);
                out << buf;
            }
        }
        out << '\n';
    }
}

void write_series_csv(const std::filesystem::path& path, const SeriesTable& table, int precision,
                      const std::string& missing_token)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_series_csv(out, table, precision, missing_token);
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace daqff::data
