#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daqff/data/series_table.hpp"

namespace daqff::data {

/// Half-open row interval [begin, end).
struct RowRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
    bool empty() const noexcept { return end <= begin; }
    friend bool operator==(const RowRange&, const RowRange&) = default;
};

/// Numeric NAs become the column mean of the observed cells; categorical NAs
/// become the most frequent label (ties: first in sorted order). An all-NA
/// column becomes 0 and a message is appended to `warnings`.
SeriesTable impute_column_mean(SeriesTable table, std::vector<std::string>* warnings = nullptr);

/// Replaces each categorical column by its index in the given ordering, or
/// with one_hot by one 0/1 column per category named "<col>_<category>".
/// Throws on a category absent from the ordering, naming it.
SeriesTable encode_categoricals(SeriesTable table, const std::map<std::string, std::vector<std::string>>& orderings,
                                bool one_hot = false);

struct ColumnScale {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    friend bool operator==(const ColumnScale&, const ColumnScale&) = default;
};

struct ScaleParams {
    std::vector<ColumnScale> columns;
    const ColumnScale& at(const std::string& name) const;
    friend bool operator==(const ScaleParams&, const ScaleParams&) = default;
};

ScaleParams minmax_fit(const SeriesTable& table, RowRange fit_rows);
/// (x - min) / (max - min), unclipped; constant columns map to 0.
SeriesTable minmax_apply(SeriesTable table, const ScaleParams& scale);
double minmax_apply(double value, const ColumnScale& scale);
double minmax_invert(double value, const ColumnScale& scale);
std::vector<double> minmax_invert(std::span<const double> values, const ScaleParams& scale, const std::string& column);

struct YearSplit {
    int train_first = 2010, train_last = 2012;
    int validation_first = 2013, validation_last = 2013;
    int test_first = 2014, test_last = 2014;
};

struct SplitSpec {
    /// Calendar years per partition; takes precedence over fractions.
    std::optional<YearSplit> years;
    /// train, validation, test; must sum to 1. Train and validation sizes are
    /// floored, test takes the remainder.
    double fractions[3] = {0.7, 0.15, 0.15};

    static SplitSpec beijing() { return SplitSpec{YearSplit{}, {0.7, 0.15, 0.15}}; }
};

struct SplitRanges {
    RowRange train, validation, test;
};

SplitRanges split_chronological(const SeriesTable& table, const SplitSpec& spec);

} // namespace daqff::data
