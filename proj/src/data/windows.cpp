#include "daqff/data/windows.hpp"

#include <algorithm>
#include <stdexcept>

namespace daqff::data {

WindowLayout window_layout(const SeriesTable& table)
{
    WindowLayout layout;
    layout.target_column = table.index_of(table.target_column);
    if (table.stations.empty()) {
        std::vector<std::size_t> all(table.columns.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        layout.branch_columns.push_back(std::move(all));
    } else {
        for (const auto& group : table.stations) {
            std::vector<std::size_t> idx;
            for (const auto& name : group) idx.push_back(table.index_of(name));
            if (idx.empty()) throw std::invalid_argument("station grouping contains an empty station");
            if (!layout.branch_columns.empty() && idx.size() != layout.branch_columns.front().size())
                throw std::invalid_argument("stations must have the same number of columns");
            layout.branch_columns.push_back(std::move(idx));
        }
    }
    const std::size_t d = layout.channels();
    bool found = false;
    for (std::size_t b = 0; b < layout.branches() && !found; ++b) {
        for (std::size_t j = 0; j < d; ++j) {
            if (layout.branch_columns[b][j] == layout.target_column) {
                layout.target_channel = b * d + j;
                found = true;
                break;
            }
        }
    }
    if (!found) throw std::invalid_argument("target column '" + table.target_column + "' is not an input channel");
    return layout;
}

SupervisedWindows make_windows(const SeriesTable& scaled, std::size_t lookup, std::size_t horizon)
{
    return make_windows(scaled, lookup, horizon, RowRange{0, scaled.rows()});
}

SupervisedWindows make_windows(const SeriesTable& scaled, std::size_t lookup, std::size_t horizon, RowRange targets)
{
    if (lookup == 0 || horizon == 0) throw std::invalid_argument("make_windows: lookup and horizon must be >= 1");
    if (targets.end > scaled.rows() || targets.empty()) throw std::invalid_argument("make_windows: invalid target range");
    const std::size_t first = targets.begin > lookup ? targets.begin - lookup : 0;
    if (targets.end < first + lookup + horizon) {
        throw std::invalid_argument("make_windows: need at least " + std::to_string(lookup + horizon) +
                                    " rows (lookup " + std::to_string(lookup) + " + horizon " + std::to_string(horizon) +
                                    "), have " + std::to_string(targets.end - first));
    }
    const std::size_t count = targets.end - first - lookup - horizon + 1;
    const WindowLayout layout = window_layout(scaled);
    const std::size_t n = layout.branches(), d = layout.channels();

    SupervisedWindows w;
    w.lookup = lookup;
    w.horizon = horizon;
    w.target_channel = layout.target_channel;
    w.inputs = nn::Tensor({count, n, lookup, d});
    w.targets = nn::Tensor({count, horizon});
    w.target_rows.resize(count);
    const auto& target = scaled.columns[layout.target_column].values;
    double* in = w.inputs.data();
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t t = first + k;
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t l = 0; l < lookup; ++l)
                for (std::size_t j = 0; j < d; ++j) *in++ = scaled.columns[layout.branch_columns[b][j]].values[t + l];
        std::copy_n(target.begin() + static_cast<std::ptrdiff_t>(t + lookup), horizon, w.targets.data() + k * horizon);
        w.target_rows[k] = t + lookup;
    }
    return w;
}

} // namespace daqff::data
