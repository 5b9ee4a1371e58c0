#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace daqff::data {

/// Hours since 1970-01-01T00:00 (proleptic Gregorian, no time zone).
using HourStamp = std::int64_t;

HourStamp hour_stamp(int year, unsigned month, unsigned day, unsigned hour);
/// "YYYY-MM-DDTHH:00".
std::string format_hour(HourStamp stamp);
int year_of(HourStamp stamp);

struct Column {
    std::string name;
    std::vector<double> values;       // NaN where missing or not yet encoded
    std::vector<std::string> labels;  // raw strings for categorical columns, else empty
    std::vector<bool> missing;
    bool categorical = false;
};

/// Hourly multivariate series. Every column has one entry per timestamp.
struct SeriesTable {
    std::vector<HourStamp> hours;
    std::vector<Column> columns;
    std::string target_column;
    /// Column names per station, in channel order. Empty means one branch
    /// holding every column.
    std::vector<std::vector<std::string>> stations;

    std::size_t rows() const noexcept { return hours.size(); }
    std::size_t index_of(std::string_view name) const;   // throws if absent
    bool has_column(std::string_view name) const noexcept;
    const Column& column(std::string_view name) const { return columns[index_of(name)]; }
    Column& column(std::string_view name) { return columns[index_of(name)]; }
    bool has_missing() const noexcept;
    /// Throws std::invalid_argument unless lengths agree and hours step by exactly one.
    void validate() const;
};

} // namespace daqff::data
