#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "daqff/data/csv.hpp"
#include "daqff/data/preprocess.hpp"
#include "daqff/data/synth.hpp"
#include "daqff/data/windows.hpp"
#include "daqff/nn/rng.hpp"

using namespace daqff::data;

namespace {

const std::string kHeader = "No,year,month,day,hour,pm2.5,DEWP,TEMP,PRES,cbwd,Iws,Is,Ir\n";

SeriesTable parse(const std::string& text, const CsvSchema& schema = CsvSchema::beijing())
{
    std::istringstream in(text);
    return parse_series_csv(in, schema, "fixture");
}

std::string expect_error(const std::string& text, const CsvSchema& schema = CsvSchema::beijing())
{
    try {
        parse(text, schema);
    } catch (const std::exception& e) {
        return e.what();
    }
    ADD_FAILURE() << "no error";
    return {};
}

SeriesTable numeric_table(std::vector<std::vector<double>> columns)
{
    SeriesTable t;
    for (std::size_t r = 0; r < columns.front().size(); ++r) t.hours.push_back(hour_stamp(2010, 1, 1, 0) + static_cast<HourStamp>(r));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        Column col;
        col.name = "c" + std::to_string(c);
        col.missing.assign(columns[c].size(), false);
        for (std::size_t r = 0; r < columns[c].size(); ++r)
            if (std::isnan(columns[c][r])) col.missing[r] = true;
        col.values = std::move(columns[c]);
        t.columns.push_back(std::move(col));
    }
    t.target_column = "c0";
    return t;
}

const double NA = std::nan("");

} // namespace

TEST(Csv, MissingTokenMarksMask)
{
    const auto t = parse(kHeader + "1,2010,1,1,0,NA,-21,-11,1021,NW,1.79,0,0\n"
                                   "2,2010,1,1,1,129,-16,-4,1020,SE,1.79,0,0\n");
    EXPECT_EQ(t.rows(), 2u);
    const Column& pm = t.column("pm2.5");
    EXPECT_EQ(pm.missing, (std::vector<bool>{true, false}));
    EXPECT_EQ(pm.values[1], 129.0);
    EXPECT_EQ(t.columns.size(), 8u);
    EXPECT_TRUE(t.column("cbwd").categorical);
    EXPECT_EQ(t.column("cbwd").labels[1], "SE");
}

TEST(Csv, BeijingFile)
{
    const auto t = load_series_csv(std::filesystem::path(DAQFF_DATA_DIR) / "beijing_pm25.csv", CsvSchema::beijing());
    EXPECT_EQ(t.rows(), 43824u);
    EXPECT_EQ(format_hour(t.hours.front()), "2010-01-01T00:00");
    EXPECT_EQ(format_hour(t.hours.back()), "2014-12-31T23:00");
}

TEST(Csv, ShortRowNamesTheLine)
{
    const std::string msg = expect_error(kHeader + "1,2010,1,1,0,10,-21,-11,1021,NW,1.79,0,0\n"
                                                   "2,2010,1,1,1,129,-16,-4,1020,SE,1.79,0\n");
    EXPECT_NE(msg.find("fixture:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("12 fields"), std::string::npos) << msg;
}

TEST(Csv, HeaderMismatchNamesColumn)
{
    const std::string msg = expect_error("No,year,month,day,hour,pm2.5,DEWP\n1,2010,1,1,0,1,2\n");
    EXPECT_NE(msg.find("TEMP"), std::string::npos) << msg;
}

TEST(Csv, UnparseableCellNamesRowAndColumn)
{
    const std::string msg = expect_error(kHeader + "1,2010,1,1,0,abc,-21,-11,1021,NW,1.79,0,0\n");
    EXPECT_NE(msg.find("fixture:2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("pm2.5"), std::string::npos) << msg;
}

TEST(Csv, MissingFile)
{
    try {
        load_series_csv("/nonexistent/file.csv", CsvSchema::beijing());
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/file.csv"), std::string::npos);
    }
}

TEST(Csv, TimestampOrderAndGaps)
{
    const std::string row0 = "1,2010,1,1,0,10,-21,-11,1021,NW,1.79,0,0\n";
    EXPECT_NE(expect_error(kHeader + row0 + "2,2010,1,1,0,11,-21,-11,1021,NW,1.79,0,0\n").find("does not increase"), std::string::npos);
    const std::string gapped = kHeader + row0 + "2,2010,1,1,3,13,-21,-11,1021,NW,1.79,0,0\n";
    EXPECT_NE(expect_error(gapped).find("gap of 2"), std::string::npos);

    CsvSchema fill = CsvSchema::beijing();
    fill.max_gap_fill = 2;
    const auto t = parse(gapped, fill);
    EXPECT_EQ(t.rows(), 4u);
    EXPECT_EQ(t.column("pm2.5").values, (std::vector<double>{10, 10, 10, 13}));
}

TEST(Csv, SingleTimestampField)
{
    CsvSchema s;
    s.time_fields = {"time"};
    s.target = "pm";
    s.categorical.clear();
    const auto t = parse("time,pm,x\n2013-03-01 00:00,4,1\n2013-03-01 01:00,5,2\n", s);
    EXPECT_EQ(t.rows(), 2u);
    EXPECT_EQ(format_hour(t.hours[1]), "2013-03-01T01:00");
}

TEST(Csv, WriteReadRoundTrip)
{
    const SeriesTable t = synth_table({SynthKind::multistation, 50, 2, 3});
    std::stringstream buf;
    write_series_csv(buf, t);
    const SeriesTable back = parse_series_csv(buf, synth_schema({SynthKind::multistation, 50, 2, 3}));
    ASSERT_EQ(back.columns.size(), t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) EXPECT_EQ(back.columns[c].values, t.columns[c].values);
    EXPECT_EQ(back.hours, t.hours);
    EXPECT_EQ(back.stations, t.stations);
}

TEST(Impute, ColumnMean)
{
    auto t = impute_column_mean(numeric_table({{1, NA, 3}}));
    EXPECT_EQ(t.columns[0].values, (std::vector<double>{1, 2, 3}));
    EXPECT_FALSE(t.has_missing());

    const auto clean = numeric_table({{4, 5, 6}});
    EXPECT_EQ(impute_column_mean(clean).columns[0].values, clean.columns[0].values);

    std::vector<std::string> warnings;
    t = impute_column_mean(numeric_table({{1, 2, 3}, {NA, NA, NA}}), &warnings);
    EXPECT_EQ(t.columns[1].values, (std::vector<double>{0, 0, 0}));
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("c1"), std::string::npos);
}

TEST(Impute, CategoricalUsesMode)
{
    const auto t = impute_column_mean(parse(kHeader + "1,2010,1,1,0,1,0,0,0,NW,0,0,0\n2,2010,1,1,1,1,0,0,0,NA,0,0,0\n"
                                                      "3,2010,1,1,2,1,0,0,0,NW,0,0,0\n4,2010,1,1,3,1,0,0,0,SE,0,0,0\n"));
    EXPECT_EQ(t.column("cbwd").labels[1], "NW");
}

TEST(Encode, FixedOrdering)
{
    const auto t = parse(kHeader + "1,2010,1,1,0,1,0,0,0,NW,0,0,0\n2,2010,1,1,1,1,0,0,0,cv,0,0,0\n"
                                   "3,2010,1,1,2,1,0,0,0,NE,0,0,0\n");
    const auto e = encode_categoricals(t, CsvSchema::beijing().categorical);
    EXPECT_EQ(e.column("cbwd").values, (std::vector<double>{1, 3, 0}));
    EXPECT_FALSE(e.column("cbwd").categorical);

    const auto single = encode_categoricals(parse(kHeader + "1,2010,1,1,0,1,0,0,0,NE,0,0,0\n2,2010,1,1,1,1,0,0,0,NE,0,0,0\n"),
                                            CsvSchema::beijing().categorical);
    EXPECT_EQ(single.column("cbwd").values, (std::vector<double>{0, 0}));

    try {
        encode_categoricals(parse(kHeader + "1,2010,1,1,0,1,0,0,0,XX,0,0,0\n"), CsvSchema::beijing().categorical);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("XX"), std::string::npos);
    }
}

TEST(Encode, OneHotOption)
{
    const auto t = parse(kHeader + "1,2010,1,1,0,1,0,0,0,SE,0,0,0\n");
    const auto e = encode_categoricals(t, CsvSchema::beijing().categorical, true);
    EXPECT_FALSE(e.has_column("cbwd"));
    EXPECT_EQ(e.column("cbwd_SE").values[0], 1.0);
    EXPECT_EQ(e.column("cbwd_NE").values[0], 0.0);
    EXPECT_EQ(e.columns.size(), 11u);
}

TEST(Encode, EveryCellFiniteAfterCleaning)
{
    auto t = load_series_csv(std::filesystem::path(DAQFF_DATA_DIR) / "beijing_pm25.csv", CsvSchema::beijing());
    EXPECT_TRUE(t.has_missing());
    t = encode_categoricals(impute_column_mean(std::move(t)), CsvSchema::beijing().categorical);
    EXPECT_FALSE(t.has_missing());
    for (const auto& c : t.columns)
        for (double v : c.values) ASSERT_TRUE(std::isfinite(v)) << c.name;
}

TEST(MinMax, FitApplyInvert)
{
    auto s = minmax_fit(numeric_table({{2, 4, 6}}), {0, 3});
    EXPECT_EQ(s.columns[0].min, 2.0);
    EXPECT_EQ(s.columns[0].max, 6.0);
    s = minmax_fit(numeric_table({{5, 5}}), {0, 2});
    EXPECT_EQ(s.columns[0].min, 5.0);
    EXPECT_EQ(s.columns[0].max, 5.0);
    s = minmax_fit(numeric_table({{0, 10, 20, 999}}), {0, 3});
    EXPECT_EQ(s.columns[0].max, 20.0);
    EXPECT_THROW(minmax_fit(numeric_table({{1, 2}}), {1, 1}), std::invalid_argument);

    const ColumnScale c{"c0", 2, 6};
    EXPECT_EQ(minmax_apply(4.0, c), 0.5);
    EXPECT_EQ(minmax_apply(8.0, c), 1.5);
    EXPECT_EQ(minmax_invert(0.5, c), 4.0);
    const ColumnScale k{"k", 5, 5};
    EXPECT_EQ(minmax_apply(5.0, k), 0.0);
    EXPECT_EQ(minmax_invert(0.0, k), 5.0);
    const auto applied = minmax_apply(numeric_table({{5, 5, 5}}), ScaleParams{{{"c0", 5, 5}}});
    EXPECT_EQ(applied.columns[0].values, (std::vector<double>{0, 0, 0}));
    EXPECT_THROW(minmax_apply(numeric_table({{1}, {2}}), ScaleParams{{{"c0", 0, 1}}}), std::invalid_argument);
    EXPECT_THROW(minmax_invert(std::vector<double>{1.0}, ScaleParams{{{"c0", 0, 1}}}, "zz"), std::invalid_argument);
}

TEST(MinMax, RoundTripProperty)
{
    daqff::nn::Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const double lo = rng.uniform(-1000, 1000), hi = lo + rng.uniform(1e-3, 2000);
        const ColumnScale s{"x", lo, hi};
        for (int i = 0; i < 20; ++i) {
            const double x = rng.uniform(lo - 500, hi + 500);
            EXPECT_LT(std::abs(minmax_invert(minmax_apply(x, s), s) - x), 1e-9);
        }
    }
}

TEST(MinMax, FittedOnTrainingRowsOnly)
{
    auto t = load_series_csv(std::filesystem::path(DAQFF_DATA_DIR) / "beijing_pm25.csv", CsvSchema::beijing());
    t = encode_categoricals(impute_column_mean(std::move(t)), CsvSchema::beijing().categorical);
    const auto split = split_chronological(t, SplitSpec::beijing());
    const auto train = minmax_fit(t, split.train);
    const auto full = minmax_fit(t, {0, t.rows()});
    EXPECT_NE(train, full);
}

TEST(Windows, CountLaw)
{
    auto t = numeric_table({{1, 2, 3, 4, 5}});
    EXPECT_EQ(make_windows(t, 2, 1).size(), 3u);
    EXPECT_EQ(make_windows(t, 2, 2).size(), 2u);
    daqff::nn::Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t l = 1 + rng.below(12), h = 1 + rng.below(12), T = l + h + rng.below(40);
        std::vector<double> v(T);
        for (std::size_t i = 0; i < T; ++i) v[i] = static_cast<double>(i);
        const auto w = make_windows(numeric_table({v}), l, h);
        EXPECT_EQ(w.size(), T - l - h + 1);
        EXPECT_EQ(w.inputs.shape(), (daqff::nn::Shape{T - l - h + 1, 1, l, 1}));
    }
}

TEST(Windows, LookupNineAndAlignment)
{
    std::vector<double> v(30), u(30);
    for (std::size_t i = 0; i < 30; ++i) {
        v[i] = static_cast<double>(i);
        u[i] = 100.0 + static_cast<double>(i);
    }
    const auto w = make_windows(numeric_table({v, u}), 9, 3);
    EXPECT_EQ(w.size(), 19u);
    // Window 4: inputs rows 4..12, targets rows 13..15.
    EXPECT_EQ(w.inputs.at({4, 0, 0, 0}), 4.0);
    EXPECT_EQ(w.inputs.at({4, 0, 8, 1}), 112.0);
    EXPECT_EQ(w.targets.at({4, 0}), 13.0);
    EXPECT_EQ(w.targets.at({4, 2}), 15.0);
    EXPECT_EQ(w.target_rows[4], 13u);
}

TEST(Windows, TooShortNamesMinimum)
{
    try {
        make_windows(numeric_table({{1, 2, 3}}), 3, 2);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("at least 5"), std::string::npos) << e.what();
    }
}

TEST(Windows, StationBranches)
{
    const SeriesTable t = synth_table({SynthKind::multistation, 40, 3, 1});
    const auto w = make_windows(t, 6, 2);
    EXPECT_EQ(w.inputs.shape(), (daqff::nn::Shape{33, 3, 6, 3}));
    EXPECT_EQ(w.target_channel, 0u);
    EXPECT_EQ(w.inputs.at({0, 2, 5, 1}), t.column("s2_temp").values[5]);
}

TEST(Windows, NoLeakageAcrossSplits)
{
    std::vector<double> v(200);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    const auto t = numeric_table({v});
    SplitSpec spec;
    spec.fractions[0] = 0.6;
    spec.fractions[1] = 0.2;
    spec.fractions[2] = 0.2;
    const auto s = split_chronological(t, spec);
    const std::size_t l = 9, h = 6;
    const auto train = make_windows(t, l, h, s.train);
    const auto val = make_windows(t, l, h, s.validation);
    const auto test = make_windows(t, l, h, s.test);
    for (std::size_t r : train.target_rows) EXPECT_LT(r + h - 1, s.validation.begin);
    for (std::size_t r : val.target_rows) {
        EXPECT_GE(r, s.validation.begin);
        EXPECT_LT(r + h - 1, s.test.begin);
    }
    // Evaluation windows reach back for context, so the first target is the first row of the range.
    EXPECT_EQ(test.target_rows.front(), s.test.begin);
    EXPECT_EQ(test.size(), s.test.size() - h + 1);
}

TEST(Split, BeijingPreset)
{
    const auto t = load_series_csv(std::filesystem::path(DAQFF_DATA_DIR) / "beijing_pm25.csv", CsvSchema::beijing());
    const auto s = split_chronological(t, SplitSpec::beijing());
    EXPECT_EQ(s.train.size(), 26304u);
    EXPECT_EQ(s.validation.size(), 8760u);
    EXPECT_EQ(s.test.size(), 8760u);
    EXPECT_EQ(s.train.size(), 24u * 1096);
    EXPECT_EQ(s.train.end, s.validation.begin);
    EXPECT_EQ(s.validation.end, s.test.begin);
    EXPECT_EQ(s.test.end, t.rows());
}

TEST(Split, FractionsAndErrors)
{
    const auto t = numeric_table({{1, 2, 3, 4, 5, 6, 7, 8}});
    SplitSpec spec;
    spec.fractions[0] = 0.5;
    spec.fractions[1] = 0.25;
    spec.fractions[2] = 0.25;
    const auto s = split_chronological(t, spec);
    EXPECT_EQ(s.train.size(), 4u);
    EXPECT_EQ(s.validation.size(), 2u);
    EXPECT_EQ(s.test.size(), 2u);

    SplitSpec years;
    years.years = YearSplit{2010, 2010, 2010, 2010, 2011, 2011};
    EXPECT_THROW(split_chronological(t, years), std::invalid_argument);
}

TEST(Synth, DeterministicAndShaped)
{
    for (auto kind : {SynthKind::constant, SynthKind::sine, SynthKind::linear, SynthKind::multistation}) {
        const SynthOptions o{kind, 300, 3, 11};
        const auto a = synth_table(o), b = synth_table(o);
        ASSERT_EQ(a.columns.size(), b.columns.size());
        for (std::size_t c = 0; c < a.columns.size(); ++c) EXPECT_EQ(a.columns[c].values, b.columns[c].values);
        EXPECT_EQ(a.rows(), 300u);
        EXPECT_NO_THROW(a.validate());
    }
    EXPECT_EQ(synth_table({SynthKind::multistation, 10, 4, 1}).columns.size(), 12u);
    EXPECT_THROW(parse_synth_kind("noise"), std::invalid_argument);
}
