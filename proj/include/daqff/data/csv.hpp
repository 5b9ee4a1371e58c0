#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "daqff/data/series_table.hpp"

namespace daqff::data {

/// How a CSV file maps onto a SeriesTable.
struct CsvSchema {
    /// Either {"year","month","day","hour"} or a single field holding
    /// "YYYY-MM-DD HH[:MM[:SS]]" (a 'T' separator also works).
    std::vector<std::string> time_fields{"year", "month", "day", "hour"};
    std::string target = "pm2.5";
    /// Feature columns in channel order. Empty: every column that is neither
    /// a time field nor ignored, in file order. The target is always kept.
    std::vector<std::string> features;
    std::vector<std::string> ignore{"No"};
    /// Categorical columns and their fixed category order.
    std::map<std::string, std::vector<std::string>> categorical{{"cbwd", {"NE", "NW", "SE", "cv"}}};
    std::string missing_token = "NA";
    /// Gaps of up to this many hours are filled by repeating the previous
    /// row; 0 makes any gap an error.
    std::size_t max_gap_fill = 0;
    bool one_hot = false;
    /// Explicit station grouping (column names per station) ...
    std::vector<std::vector<std::string>> stations;
    /// ... or, when > 0 and `stations` is empty, the features split into this
    /// many equal consecutive groups.
    std::size_t station_count = 0;

    /// The public Beijing PM2.5 file: No,year,month,day,hour,pm2.5,DEWP,TEMP,PRES,cbwd,Iws,Is,Ir.
    static CsvSchema beijing();
};

SeriesTable load_series_csv(const std::filesystem::path& path, const CsvSchema& schema);
/// `source` names the stream in error messages.
SeriesTable parse_series_csv(std::istream& in, const CsvSchema& schema, const std::string& source = "<input>");

/// Header No,year,month,day,hour,<columns...>; missing cells as `missing_token`.
void write_series_csv(const std::filesystem::path& path, const SeriesTable& table, int precision = 17,
                      const std::string& missing_token = "NA");
void write_series_csv(std::ostream& out, const SeriesTable& table, int precision = 17,
                      const std::string& missing_token = "NA");

} // namespace daqff::data
