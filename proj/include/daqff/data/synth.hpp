#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "daqff/data/csv.hpp"
#include "daqff/data/series_table.hpp"

namespace daqff::data {

enum class SynthKind { constant, sine, linear, multistation };

SynthKind parse_synth_kind(std::string_view name);

struct SynthOptions {
    SynthKind kind = SynthKind::sine;
    std::size_t rows = 1000;
    std::size_t stations = 3;   // multistation only
    std::uint64_t seed = 7;
};

/// Deterministic hourly fixtures starting 2010-01-01T00:00.
///
///   constant:     pm2.5 = 42, TEMP = 10
///   sine:         pm2.5 = 80 + 40 sin(2 pi t/24) + 15 sin(2 pi t/168) + N(0, 3^2), with TEMP and Iws
///   linear:       AR(1) drivers a, b; pm2.5 = 60 + 0.01 t + 8 a[t-6] + 5 b[t-6] + N(0, 1)
///   multistation: s<i>_pm25, s<i>_temp, s<i>_wind per station; station i runs 2i
///                 hours ahead of station 0, whose pm25 is the target
SeriesTable synth_table(const SynthOptions& options);

/// Schema that reads back what write_series_csv produced for `options`.
CsvSchema synth_schema(const SynthOptions& options);

} // namespace daqff::data
