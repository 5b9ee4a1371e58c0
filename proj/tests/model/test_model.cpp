#include <gtest/gtest.h>

#include <memory>
#include <sstream>

#include "daqff/model/baselines.hpp"
#include "daqff/model/checkpoint.hpp"
#include "daqff/model/daqff.hpp"
#include "daqff/model/gradient_suite.hpp"
#include "daqff/nn/elementwise.hpp"
#include "daqff/nn/lstm.hpp"
#include "daqff/nn/recurrent.hpp"
#include "oracles.hpp"

using namespace daqff;
using namespace daqff::model;
using nn::Mode;
using nn::Tensor;

namespace {

DaqffConfig small_config()
{
    DaqffConfig c;
    c.branches = 3;
    c.channels_per_branch = 4;
    c.lookup = 8;
    c.horizon = 6;
    c.conv_specs = {{5, 3}, {4, 1}};
    c.branch_projection_dim = 3;
    c.bilstm_hidden = 6;
    return c;
}

} // namespace

TEST(DaqffConfig, DefaultsFollowTheExperimentalSetup)
{
    const DaqffConfig c;
    EXPECT_EQ(c.conv_specs, (std::vector<ConvSpec>{{64, 5}, {32, 3}, {16, 1}}));
    EXPECT_EQ(c.bilstm_hidden, 128u);
    EXPECT_DOUBLE_EQ(c.dropout_p, 0.3);
}

TEST(DaqffConfig, InvalidFieldsNamed)
{
    DaqffConfig c;
    c.lookup = 0;
    try {
        c.validate();
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("lookup"), std::string::npos);
    }
    DaqffConfig d;
    d.conv_specs = {};
    EXPECT_THROW(DaqffNet(d, std::make_shared<nn::Rng>(1)), std::invalid_argument);
}

TEST(Daqff, ShapeLaw)
{
    auto rng = std::make_shared<nn::Rng>(1);
    DaqffNet net(small_config(), rng);
    nn::Rng data(2);
    EXPECT_EQ(net.forward(oracle::random_tensor(data, {2, 3, 8, 4}), Mode::eval).shape(), (nn::Shape{2, 6}));
    EXPECT_EQ(net.forward(oracle::random_tensor(data, {5, 3, 8, 4}), Mode::train).shape(), (nn::Shape{5, 6}));
    EXPECT_THROW(net.forward(Tensor({2, 2, 8, 4}), Mode::eval), std::invalid_argument);
}

TEST(Daqff, ZeroParametersZeroOutput)
{
    DaqffNet net(small_config(), std::make_shared<nn::Rng>(1));
    for (auto* p : net.parameters()) p->value.fill(0.0);
    nn::Rng data(3);
    const Tensor y = net.forward(oracle::random_tensor(data, {2, 3, 8, 4}), Mode::eval);
    for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(Daqff, EvalIsDeterministic)
{
    DaqffNet net(small_config(), std::make_shared<nn::Rng>(4));
    nn::Rng data(5);
    const Tensor x = oracle::random_tensor(data, {3, 3, 8, 4});
    EXPECT_EQ(net.forward(x, Mode::eval), net.forward(x, Mode::eval));
}

TEST(Daqff, MatchesHandComposition)
{
    const DaqffConfig cfg = small_config();
    DaqffNet net(cfg, std::make_shared<nn::Rng>(9));
    nn::Rng data(10);
    const Tensor x = oracle::random_tensor(data, {2, 3, 8, 4});

    // Fresh layers carrying copies of the network's parameters.
    std::vector<Tensor> parts;
    for (std::size_t i = 0; i < cfg.branches; ++i) {
        nn::Sequential& stack = net.branch(i);
        Tensor h = nn::swap_last_axes(branch_slice(x, i));
        std::size_t c = cfg.channels_per_branch;
        std::size_t layer = 1;
        for (const auto& spec : cfg.conv_specs) {
            nn::Conv1D conv(c, spec.filters, spec.kernel);
            auto& src = dynamic_cast<nn::Conv1D&>(stack[layer]);
            conv.weight().value = src.weight().value;
            conv.bias().value = src.bias().value;
            h = conv.forward(h, Mode::eval);
            for (double& v : h.values()) v = v > 0 ? v : 0.0;
            layer += 2;
            c = spec.filters;
        }
        h = nn::swap_last_axes(h);
        nn::Dense proj(c, cfg.branch_projection_dim);
        auto& src = dynamic_cast<nn::Dense&>(stack[layer + 1]);
        proj.weight().value = src.weight().value;
        proj.bias().value = src.bias().value;
        parts.push_back(proj.forward(h, Mode::eval));
    }
    const Tensor lc = concat_channels(parts);

    const std::size_t hd = cfg.bilstm_hidden;
    auto fw = oracle::split(net.bilstm().forward_lstm().input_weights().value,
                            net.bilstm().forward_lstm().recurrent_weights().value,
                            net.bilstm().forward_lstm().bias().value, hd);
    auto bw = oracle::split(net.bilstm().backward_lstm().input_weights().value,
                            net.bilstm().backward_lstm().recurrent_weights().value,
                            net.bilstm().backward_lstm().bias().value, hd);
    const Tensor hf = oracle::lstm_sequence(fw, lc, hd, false);
    const Tensor hb = oracle::lstm_sequence(bw, lc, hd, true);
    const std::size_t b = x.dim(0), l = cfg.lookup;
    Tensor o({b, 2 * hd});
    for (std::size_t n = 0; n < b; ++n)
        for (std::size_t k = 0; k < hd; ++k) {
            o.at({n, k}) = hf.at({n, l - 1, k});   // forward final state S
            o.at({n, hd + k}) = hb.at({n, 0, k});  // backward final state T
        }
    const Tensor& w = net.head().weight().value;
    const Tensor& bias = net.head().bias().value;
    Tensor expect({b, cfg.horizon});
    for (std::size_t n = 0; n < b; ++n)
        for (std::size_t h = 0; h < cfg.horizon; ++h) {
            double acc = bias[h];
            for (std::size_t k = 0; k < 2 * hd; ++k) acc += w.at({h, k}) * o.at({n, k});
            expect.at({n, h}) = acc;
        }
    EXPECT_LT(oracle::max_abs_diff(net.forward(x, Mode::eval), expect), 1e-12);
}

TEST(Daqff, BranchIndependence)
{
    const DaqffConfig cfg = small_config();
    DaqffNet net(cfg, std::make_shared<nn::Rng>(12));
    const std::size_t j = 1;
    // Zero every conv parameter of branch j.
    net.branch(j).visit([](nn::Layer& l) {
        if (auto* conv = dynamic_cast<nn::Conv1D*>(&l)) {
            conv->weight().value.fill(0.0);
            conv->bias().value.fill(0.0);
        }
    });
    nn::Rng data(13);
    Tensor x = oracle::random_tensor(data, {2, 3, 8, 4});
    const Tensor before = net.forward(x, Mode::eval);
    for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t t = 0; t < 8; ++t)
            for (std::size_t d = 0; d < 4; ++d) x.at({n, j, t, d}) = 0.0;
    EXPECT_EQ(net.forward(x, Mode::eval), before);
}

TEST(Daqff, FusionHeadWidth)
{
    DaqffNet net(small_config(), std::make_shared<nn::Rng>(1));
    EXPECT_EQ(net.head().in_features(), 12u);
    EXPECT_EQ(net.head().out_features(), 6u);
}

TEST(Daqff, InitializationIsSeeded)
{
    DaqffNet a(small_config(), std::make_shared<nn::Rng>(42)), b(small_config(), std::make_shared<nn::Rng>(42));
    auto pa = a.named_parameters(), pb = b.named_parameters();
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        EXPECT_EQ(pa[i].name, pb[i].name);
        EXPECT_EQ(pa[i].param->value, pb[i].param->value);
    }
    EXPECT_EQ(pa.front().name, "branch0.1.conv1d.weight");
}

TEST(Daqff, EndToEndGradientCheck)
{
    const GradientCase c = run_daqff_gradient_check();
    EXPECT_TRUE(c.report.passed) << c.config << " max rel err " << c.report.max_relative_error;
    EXPECT_LT(c.report.max_relative_error, 1e-4);
    EXPECT_GE(c.report.min_relu_margin, 1e-3);
}

TEST(Baselines, LstmHasOneRecurrentLayerOf128)
{
    auto net = build_baseline(ModelKind::lstm, 9, 1, 8, 1, std::make_shared<nn::Rng>(1));
    int recurrent = 0;
    std::size_t hidden = 0;
    net->visit([&](nn::Layer& l) {
        if (auto* lstm = dynamic_cast<nn::Lstm*>(&l)) {
            ++recurrent;
            hidden = lstm->hidden_dim();
        }
    });
    EXPECT_EQ(recurrent, 1);
    EXPECT_EQ(hidden, 128u);
    nn::Rng data(2);
    EXPECT_EQ(net->forward(oracle::random_tensor(data, {4, 1, 9, 8}), Mode::eval).shape(), (nn::Shape{4, 1}));
}

TEST(Baselines, SmallLstmParameterCount)
{
    BaselineOptions o;
    o.hidden = 2;
    auto net = build_baseline(ModelKind::lstm, 5, 1, 3, 1, std::make_shared<nn::Rng>(1), o);
    std::size_t lstm_params = 0;
    net->visit([&](nn::Layer& l) {
        if (auto* lstm = dynamic_cast<nn::Lstm*>(&l)) lstm_params = lstm->parameter_count();
    });
    EXPECT_EQ(lstm_params, 48u);
    EXPECT_EQ(net->parameter_count(), 48u + 2 + 1);
}

TEST(Baselines, EveryKindBuildsAndRuns)
{
    nn::Rng data(3);
    const Tensor x = oracle::random_tensor(data, {2, 2, 6, 3});
    for (auto kind : {ModelKind::rnn, ModelKind::lstm, ModelKind::gru, ModelKind::cnn, ModelKind::persistence}) {
        BaselineOptions o;
        o.hidden = 5;
        o.conv_specs = {{4, 3}, {2, 1}};
        auto net = build_baseline(kind, 6, 2, 3, 4, std::make_shared<nn::Rng>(1), o);
        const Tensor y = net->forward(x, Mode::eval);
        EXPECT_EQ(y.shape(), (nn::Shape{2, 4})) << to_string(kind);
        EXPECT_TRUE(y.all_finite());
    }
}

TEST(Baselines, UnknownKind)
{
    EXPECT_THROW(parse_model_kind("transformer"), std::invalid_argument);
    EXPECT_EQ(parse_model_kind("GRU"), ModelKind::gru);
    EXPECT_THROW(build_baseline(ModelKind::daqff, 6, 1, 2, 1, std::make_shared<nn::Rng>(1)), std::invalid_argument);
}

TEST(Persistence, Forecast)
{
    const std::vector<double> h{1, 2, 3};
    EXPECT_EQ(persistence_forecast(h, 2).storage(), (std::vector<double>{3, 3}));
    EXPECT_EQ(persistence_forecast(h, 1).storage(), (std::vector<double>{3}));
    EXPECT_THROW(persistence_forecast(std::vector<double>{}, 2), std::invalid_argument);
}

TEST(Persistence, LayerRepeatsTargetChannel)
{
    Persistence p(3, 4);  // branch 1, channel 1 when D = 3
    Tensor x({1, 2, 2, 3});
    x.at({0, 1, 1, 1}) = 7.5;
    EXPECT_EQ(p.forward(x, Mode::eval).storage(), (std::vector<double>{7.5, 7.5, 7.5}));
    EXPECT_EQ(p.parameter_count(), 0u);
}

TEST(Checkpoint, RoundTripIsBitwise)
{
    for (auto kind : {ModelKind::daqff, ModelKind::lstm, ModelKind::cnn, ModelKind::gru, ModelKind::rnn}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.shape = small_config();
        spec.target_channel = 2;
        auto net = build_model(spec, std::make_shared<nn::Rng>(21));
        data::ScaleParams scale{{{"pm2.5", 0.0, 994.0}, {"TEMP", -19.0, 42.0}}};
        std::stringstream buf;
        save_checkpoint(buf, spec, *net, scale, nlohmann::json{{"seed", 1}});
        LoadedModel loaded = load_checkpoint(buf);
        EXPECT_EQ(loaded.spec, spec);
        EXPECT_EQ(loaded.scale, scale);
        EXPECT_EQ(loaded.config["seed"], 1);
        nn::Rng data(22);
        const Tensor x = oracle::random_tensor(data, {4, 3, 8, 4});
        EXPECT_EQ(net->forward(x, Mode::eval), loaded.model->forward(x, Mode::eval)) << to_string(kind);
    }
}

TEST(Checkpoint, RejectsTampering)
{
    ModelSpec spec;
    spec.shape = small_config();
    auto net = build_model(spec, std::make_shared<nn::Rng>(1));
    std::stringstream buf;
    save_checkpoint(buf, spec, *net, {});
    std::string text = buf.str();
    std::string bad_version = text;
    bad_version.replace(bad_version.find("format_version 1"), 16, "format_version 9");
    std::stringstream a(bad_version);
    EXPECT_THROW(load_checkpoint(a), std::runtime_error);
    std::stringstream b(text.substr(0, text.size() / 2));
    EXPECT_THROW(load_checkpoint(b), std::runtime_error);
}

TEST(GradientSuite, EveryLayerKindPasses)
{
    GradientSuiteOptions o;
    o.cases_per_layer = 20;
    const auto result = run_layer_gradient_suite(o);
    EXPECT_TRUE(result.passed()) << "max rel err " << result.max_relative_error();
    for (const auto& s : result.summary()) EXPECT_GE(s.cases, 20u) << s.layer;
}
