#include "daqff/data/series_table.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace daqff::data {

namespace chr = std::chrono;

HourStamp hour_stamp(int year, unsigned month, unsigned day, unsigned hour)
{
    const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!ymd.ok() || hour > 23) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "invalid date %04d-%02u-%02u hour %u", year, month, day, hour);
        throw std::invalid_argument(buf);
    }
    return static_cast<HourStamp>(chr::sys_days{ymd}.time_since_epoch().count()) * 24 + hour;
}

namespace {

chr::year_month_day civil(HourStamp stamp, unsigned& hour)
{
    HourStamp days = stamp / 24;
    HourStamp rem = stamp % 24;
    if (rem < 0) {
        rem += 24;
        --days;
    }
    hour = static_cast<unsigned>(rem);
    return chr::year_month_day{chr::sys_days{chr::days{days}}};
}

} // namespace

std::string format_hour(HourStamp stamp)
{
    unsigned hour = 0;
    const auto ymd = civil(stamp, hour);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:00", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hour);
    return buf;
}

int year_of(HourStamp stamp)
{
    unsigned hour = 0;
    return static_cast<int>(civil(stamp, hour).year());
}

std::size_t SeriesTable::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    throw std::invalid_argument("unknown column '" + std::string(name) + "'");
}

bool SeriesTable::has_column(std::string_view name) const noexcept
{
    return std::any_of(columns.begin(), columns.end(), [&](const Column& c) { return c.name == name; });
}

bool SeriesTable::has_missing() const noexcept
{
    for (const auto& c : columns)
        if (std::find(c.missing.begin(), c.missing.end(), true) != c.missing.end()) return true;
    return false;
}

void SeriesTable::validate() const
{
    for (const auto& c : columns) {
        if (c.values.size() != rows() || c.missing.size() != rows() || (c.categorical && c.labels.size() != rows()))
            throw std::invalid_argument("column '" + c.name + "' length differs from the timestamp count");
    }
    for (std::size_t i = 1; i < hours.size(); ++i) {
        if (hours[i] != hours[i - 1] + 1)
            throw std::invalid_argument("timestamps not hourly consecutive at " + format_hour(hours[i]));
    }
    if (!target_column.empty()) (void)index_of(target_column);
}

} // namespace daqff::data
