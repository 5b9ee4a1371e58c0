#include "daqff/data/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "daqff/nn/rng.hpp"

namespace daqff::data {

SynthKind parse_synth_kind(std::string_view name)
{
    if (name == "constant") return SynthKind::constant;
    if (name == "sine") return SynthKind::sine;
    if (name == "linear") return SynthKind::linear;
    if (name == "multistation") return SynthKind::multistation;
    throw std::invalid_argument("unknown synth kind '" + std::string(name) +
                                "' (expected constant, sine, linear or multistation)");
}

namespace {

Column make_column(std::string name, std::vector<double> values)
{
    Column c;
    c.name = std::move(name);
    c.missing.assign(values.size(), false);
    c.values = std::move(values);
    return c;
}

// Rounded so the written CSV reads back to the same doubles at any precision >= 6.
double r6(double v) { return std::round(v * 1e4) / 1e4; }

} // namespace

SeriesTable synth_table(const SynthOptions& o)
{
    if (o.rows == 0) throw std::invalid_argument("synth: rows must be >= 1");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const std::size_t t_count = o.rows;
    nn::Rng rng(o.seed);
    SeriesTable table;
    const HourStamp start = hour_stamp(2010, 1, 1, 0);
    for (std::size_t t = 0; t < t_count; ++t) table.hours.push_back(start + static_cast<HourStamp>(t));

    switch (o.kind) {
    case SynthKind::constant:
        table.columns.push_back(make_column("pm2.5", std::vector<double>(t_count, 42.0)));
        table.columns.push_back(make_column("TEMP", std::vector<double>(t_count, 10.0)));
        table.target_column = "pm2.5";
        break;
    case SynthKind::sine: {
        std::vector<double> pm(t_count), temp(t_count), wind(t_count);
        double w = 5.0;
        for (std::size_t t = 0; t < t_count; ++t) {
            const double x = static_cast<double>(t);
            pm[t] = r6(80.0 + 40.0 * std::sin(two_pi * x / 24.0) + 15.0 * std::sin(two_pi * x / 168.0) + 3.0 * rng.normal());
            temp[t] = r6(10.0 + 8.0 * std::sin(two_pi * (x - 3.0) / 24.0) + 0.5 * rng.normal());
            w = 0.9 * w + 0.1 * 5.0 + rng.normal();
            wind[t] = r6(std::abs(w));
        }
        table.columns.push_back(make_column("pm2.5", std::move(pm)));
        table.columns.push_back(make_column("TEMP", std::move(temp)));
        table.columns.push_back(make_column("Iws", std::move(wind)));
        table.target_column = "pm2.5";
        break;
    }
    case SynthKind::linear: {
        std::vector<double> a(t_count), b(t_count), pm(t_count);
        double av = 0.0, bv = 0.0;
        for (std::size_t t = 0; t < t_count; ++t) {
            av = 0.9 * av + rng.normal();
            bv = 0.8 * bv + rng.normal();
            a[t] = r6(av);
            b[t] = r6(bv);
        }
        for (std::size_t t = 0; t < t_count; ++t) {
            const double lagged = t >= 6 ? 8.0 * a[t - 6] + 5.0 * b[t - 6] : 0.0;
            pm[t] = r6(60.0 + 0.01 * static_cast<double>(t) + lagged + rng.normal());
        }
        table.columns.push_back(make_column("pm2.5", std::move(pm)));
        table.columns.push_back(make_column("a", std::move(a)));
        table.columns.push_back(make_column("b", std::move(b)));
        table.target_column = "pm2.5";
        break;
    }
    case SynthKind::multistation: {
        if (o.stations == 0) throw std::invalid_argument("synth: stations must be >= 1");
        for (std::size_t s = 0; s < o.stations; ++s) {
            const double lead = 2.0 * static_cast<double>(s);
            std::vector<double> pm(t_count), temp(t_count), wind(t_count);
            double w = 4.0;
            for (std::size_t t = 0; t < t_count; ++t) {
                const double x = static_cast<double>(t) + lead;
                pm[t] = r6(80.0 + 40.0 * std::sin(two_pi * x / 24.0) + 15.0 * std::sin(two_pi * x / 168.0) + 3.0 * rng.normal());
                temp[t] = r6(10.0 + 8.0 * std::sin(two_pi * (x - 3.0) / 24.0) + 0.5 * rng.normal());
                w = 0.9 * w + 0.4 + rng.normal();
                wind[t] = r6(std::abs(w));
            }
            const std::string p = "s" + std::to_string(s) + "_";
            table.columns.push_back(make_column(p + "pm25", std::move(pm)));
            table.columns.push_back(make_column(p + "temp", std::move(temp)));
            table.columns.push_back(make_column(p + "wind", std::move(wind)));
            table.stations.push_back({p + "pm25", p + "temp", p + "wind"});
        }
        table.target_column = "s0_pm25";
        break;
    }
    }
    return table;
}

CsvSchema synth_schema(const SynthOptions& o)
{
    CsvSchema s;
    s.categorical.clear();
    s.target = o.kind == SynthKind::multistation ? "s0_pm25" : "pm2.5";
    if (o.kind == SynthKind::multistation) s.station_count = o.stations;
    return s;
}

} // namespace daqff::data
