#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "daqff/data/preprocess.hpp"
#include "daqff/data/series_table.hpp"
#include "daqff/nn/tensor.hpp"

namespace daqff::data {

/// Which table columns feed which branch slot.
struct WindowLayout {
    std::vector<std::vector<std::size_t>> branch_columns; // n groups of D column indices
    std::size_t target_column = 0;                        // table column index
    std::size_t target_channel = 0;                       // branch * D + slot of the target, if present

    std::size_t branches() const noexcept { return branch_columns.size(); }
    std::size_t channels() const noexcept { return branch_columns.empty() ? 0 : branch_columns.front().size(); }
};

/// One branch of every column (table order) unless the table has a station
/// grouping. Stations must have equal width.
WindowLayout window_layout(const SeriesTable& table);

struct SupervisedWindows {
    nn::Tensor inputs;                    // N x n x L x D
    nn::Tensor targets;                   // N x H
    std::vector<std::size_t> target_rows; // first target row of each window
    ScaleParams scale;
    std::size_t lookup = 0;
    std::size_t horizon = 0;
    std::size_t target_channel = 0;

    std::size_t size() const noexcept { return target_rows.size(); }
};

/// Windows over the whole table: N = T - L - H + 1, inputs rows [t, t+L),
/// targets rows [t+L, t+L+H).
SupervisedWindows make_windows(const SeriesTable& scaled, std::size_t lookup, std::size_t horizon);

/// Windows whose targets all lie inside `targets`; inputs may start before
/// targets.begin (but not before row 0).
SupervisedWindows make_windows(const SeriesTable& scaled, std::size_t lookup, std::size_t horizon, RowRange targets);

} // namespace daqff::data
