#include "daqff/data/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace daqff::data {

SeriesTable impute_column_mean(SeriesTable table, std::vector<std::string>* warnings)
{
    for (auto& c : table.columns) {
        const std::size_t n = c.values.size();
        if (std::find(c.missing.begin(), c.missing.end(), true) == c.missing.end()) continue;
        if (c.categorical) {
            std::map<std::string, std::size_t> counts;
            for (std::size_t r = 0; r < n; ++r)
                if (!c.missing[r]) ++counts[c.labels[r]];
            if (counts.empty()) throw std::invalid_argument("categorical column '" + c.name + "' has no observed value");
            auto best = counts.begin();
            for (auto it = counts.begin(); it != counts.end(); ++it)
                if (it->second > best->second) best = it;
            for (std::size_t r = 0; r < n; ++r)
                if (c.missing[r]) c.labels[r] = best->first;
        } else {
            double sum = 0.0;
            std::size_t seen = 0;
            for (std::size_t r = 0; r < n; ++r) {
                if (!c.missing[r]) {
                    sum += c.values[r];
                    ++seen;
                }
            }
            double fill = 0.0;
            if (seen > 0) {
                fill = sum / static_cast<double>(seen);
            } else if (warnings) {
                warnings->push_back("column '" + c.name + "' has no observed value; filled with 0");
            }
            for (std::size_t r = 0; r < n; ++r)
                if (c.missing[r]) c.values[r] = fill;
        }
        std::fill(c.missing.begin(), c.missing.end(), false);
    }
    return table;
}

SeriesTable encode_categoricals(SeriesTable table, const std::map<std::string, std::vector<std::string>>& orderings,
                                bool one_hot)
{
    std::vector<Column> out;
    std::map<std::string, std::vector<std::string>> renamed;
    for (auto& c : table.columns) {
        if (!c.categorical) {
            out.push_back(std::move(c));
            continue;
        }
        auto it = orderings.find(c.name);
        if (it == orderings.end()) throw std::invalid_argument("no category ordering for column '" + c.name + "'");
        const auto& order = it->second;
        std::vector<std::size_t> index(c.labels.size());
        for (std::size_t r = 0; r < c.labels.size(); ++r) {
            if (c.missing[r]) throw std::invalid_argument("column '" + c.name + "' still has missing cells; impute first");
            auto pos = std::find(order.begin(), order.end(), c.labels[r]);
            if (pos == order.end())
                throw std::invalid_argument("column '" + c.name + "': category '" + c.labels[r] + "' not in ordering");
            index[r] = static_cast<std::size_t>(pos - order.begin());
        }
        if (!one_hot) {
            for (std::size_t r = 0; r < index.size(); ++r) c.values[r] = static_cast<double>(index[r]);
            c.labels.clear();
            c.categorical = false;
            out.push_back(std::move(c));
            continue;
        }
        for (std::size_t k = 0; k < order.size(); ++k) {
            Column oh;
            oh.name = c.name + "_" + order[k];
            oh.values.resize(index.size());
            for (std::size_t r = 0; r < index.size(); ++r) oh.values[r] = index[r] == k ? 1.0 : 0.0;
            oh.missing.assign(index.size(), false);
            renamed[c.name].push_back(oh.name);
            out.push_back(std::move(oh));
        }
    }
    table.columns = std::move(out);
    for (auto& group : table.stations) {
        std::vector<std::string> expanded;
        for (const auto& name : group) {
            auto it = renamed.find(name);
            if (it == renamed.end()) expanded.push_back(name);
            else expanded.insert(expanded.end(), it->second.begin(), it->second.end());
        }
        group = std::move(expanded);
    }
    if (renamed.count(table.target_column)) throw std::invalid_argument("the target column cannot be one-hot encoded");
    return table;
}

const ColumnScale& ScaleParams::at(const std::string& name) const
{
    for (const auto& c : columns)
        if (c.name == name) return c;
    throw std::invalid_argument("no scale for column '" + name + "'");
}

ScaleParams minmax_fit(const SeriesTable& table, RowRange fit_rows)
{
    if (fit_rows.empty()) throw std::invalid_argument("minmax_fit: empty fit range");
    if (fit_rows.end > table.rows()) throw std::invalid_argument("minmax_fit: fit range exceeds the table");
    ScaleParams scale;
    for (const auto& c : table.columns) {
        if (c.categorical) throw std::invalid_argument("minmax_fit: column '" + c.name + "' is not encoded yet");
        const auto first = c.values.begin() + static_cast<std::ptrdiff_t>(fit_rows.begin);
        const auto last = c.values.begin() + static_cast<std::ptrdiff_t>(fit_rows.end);
        const auto [lo, hi] = std::minmax_element(first, last);
        if (!std::isfinite(*lo) || !std::isfinite(*hi)) throw std::invalid_argument("minmax_fit: column '" + c.name + "' is not finite");
        scale.columns.push_back({c.name, *lo, *hi});
    }
    return scale;
}

double minmax_apply(double value, const ColumnScale& s)
{
    return s.max == s.min ? 0.0 : (value - s.min) / (s.max - s.min);
}

double minmax_invert(double value, const ColumnScale& s) { return value * (s.max - s.min) + s.min; }

SeriesTable minmax_apply(SeriesTable table, const ScaleParams& scale)
{
    if (scale.columns.size() != table.columns.size())
        throw std::invalid_argument("minmax_apply: scale has " + std::to_string(scale.columns.size()) +
                                    " columns, table has " + std::to_string(table.columns.size()));
    for (auto& c : table.columns) {
        const ColumnScale& s = scale.at(c.name);
        for (double& v : c.values) v = minmax_apply(v, s);
    }
    return table;
}

std::vector<double> minmax_invert(std::span<const double> values, const ScaleParams& scale, const std::string& column)
{
    const ColumnScale& s = scale.at(column);
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = minmax_invert(values[i], s);
    return out;
}

namespace {

RowRange year_rows(const SeriesTable& table, int first, int last, const char* part)
{
    if (first > last) throw std::invalid_argument(std::string("split: ") + part + " years are reversed");
    const int have_first = year_of(table.hours.front());
    const int have_last = year_of(table.hours.back());
    if (first < have_first || last > have_last) {
        throw std::invalid_argument(std::string("split: ") + part + " years " + std::to_string(first) + "-" +
                                    std::to_string(last) + " outside the table span " + std::to_string(have_first) +
                                    "-" + std::to_string(have_last));
    }
    RowRange r{table.rows(), 0};
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const int y = year_of(table.hours[i]);
        if (y >= first && y <= last) {
            r.begin = std::min(r.begin, i);
            r.end = i + 1;
        }
    }
    if (r.empty()) throw std::invalid_argument(std::string("split: ") + part + " partition is empty");
    return r;
}

} // namespace

SplitRanges split_chronological(const SeriesTable& table, const SplitSpec& spec)
{
    if (table.rows() == 0) throw std::invalid_argument("split: empty table");
    SplitRanges s;
    if (spec.years) {
        const YearSplit& y = *spec.years;
        s.train = year_rows(table, y.train_first, y.train_last, "train");
        s.validation = year_rows(table, y.validation_first, y.validation_last, "validation");
        s.test = year_rows(table, y.test_first, y.test_last, "test");
        if (s.train.end > s.validation.begin || s.validation.end > s.test.begin)
            throw std::invalid_argument("split: partitions overlap or are out of chronological order");
        return s;
    }
    const double* f = spec.fractions;
    for (int i = 0; i < 3; ++i)
        if (!(f[i] >= 0.0)) throw std::invalid_argument("split: fractions must be non-negative");
    if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) throw std::invalid_argument("split: fractions must sum to 1");
    const std::size_t t = table.rows();
    const auto n_train = static_cast<std::size_t>(std::floor(f[0] * static_cast<double>(t)));
    const auto n_val = static_cast<std::size_t>(std::floor(f[1] * static_cast<double>(t)));
    s.train = {0, n_train};
    s.validation = {n_train, n_train + n_val};
    s.test = {n_train + n_val, t};
    if (s.train.empty() || s.validation.empty() || s.test.empty())
        throw std::invalid_argument("split: a partition is empty for " + std::to_string(t) + " rows");
    return s;
}

} // namespace daqff::data
