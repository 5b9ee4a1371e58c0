#include "daqff/model/gradient_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

#include "daqff/model/daqff.hpp"
#include "daqff/nn/conv1d.hpp"
#include "daqff/nn/dense.hpp"
#include "daqff/nn/dropout.hpp"
#include "daqff/nn/elementwise.hpp"
#include "daqff/nn/lstm.hpp"
#include "daqff/nn/recurrent.hpp"
#include "daqff/nn/rng.hpp"

namespace daqff::model {

using nn::Rng;
using nn::Tensor;

bool GradientSuiteResult::passed() const
{
    return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const GradientCase& c) { return c.report.passed; });
}

double GradientSuiteResult::max_relative_error() const
{
    double worst = 0.0;
    for (const auto& c : cases) worst = std::max(worst, c.report.max_relative_error);
    return worst;
}

std::vector<LayerSummary> GradientSuiteResult::summary() const
{
    std::vector<LayerSummary> out;
    for (const auto& c : cases) {
        auto it = std::find_if(out.begin(), out.end(), [&](const LayerSummary& s) { return s.layer == c.layer; });
        if (it == out.end()) {
            out.push_back({c.layer, 0, 0.0, true});
            it = out.end() - 1;
        }
        ++it->cases;
        it->max_relative_error = std::max(it->max_relative_error, c.report.max_relative_error);
        it->passed = it->passed && c.report.passed;
    }
    return out;
}

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng.below(hi - lo + 1)); }

Tensor random_tensor(Rng& rng, nn::Shape shape, double scale = 1.0)
{
    Tensor t(std::move(shape));
    for (double& v : t.values()) v = rng.uniform(-scale, scale);
    return t;
}

void randomize(nn::Layer& layer, Rng& rng, double scale = 0.5)
{
    for (auto* p : layer.parameters())
        for (double& v : p->value.values()) v = rng.uniform(-scale, scale);
}

std::string dims(std::initializer_list<std::pair<const char*, std::size_t>> items)
{
    std::string s;
    for (const auto& [k, v] : items) {
        if (!s.empty()) s += ' ';
        s += k;
        s += '=';
        s += std::to_string(v);
    }
    return s;
}

} // namespace

GradientSuiteResult run_layer_gradient_suite(const GradientSuiteOptions& options)
{
    GradientSuiteResult result;
    result.tolerance = options.tolerance;
    nn::GradCheckOptions check;
    check.tolerance = options.tolerance;
    Rng rng(options.seed);

    auto run = [&](const std::string& name, const std::string& config, nn::Layer& layer, const Tensor& input) {
        result.cases.push_back({name, config, nn::gradient_check(layer, input, check)});
    };

    for (std::size_t i = 0; i < options.cases_per_layer; ++i) {
        {
            const std::size_t b = pick(rng, 1, 3), c = pick(rng, 1, 4), f = pick(rng, 1, 4), t = pick(rng, 1, 7);
            const std::size_t k = pick(rng, 1, 5);
            nn::Conv1D conv(c, f, k, nn::Padding::same);
            randomize(conv, rng);
            run("conv1d", dims({{"B", b}, {"C", c}, {"F", f}, {"T", t}, {"K", k}}) + " same", conv, random_tensor(rng, {b, c, t}));
        }
        {
            const std::size_t b = pick(rng, 1, 3), c = pick(rng, 1, 4), f = pick(rng, 1, 4), t = pick(rng, 1, 7);
            const std::size_t k = pick(rng, 1, t);
            nn::Conv1D conv(c, f, k, nn::Padding::valid);
            randomize(conv, rng);
            run("conv1d", dims({{"B", b}, {"C", c}, {"F", f}, {"T", t}, {"K", k}}) + " valid", conv, random_tensor(rng, {b, c, t}));
        }
        {
            const std::size_t b = pick(rng, 1, 4), in = pick(rng, 1, 6), out = pick(rng, 1, 5);
            nn::Dense dense(in, out);
            randomize(dense, rng);
            const bool seq = rng.uniform() < 0.5;
            const std::size_t l = seq ? pick(rng, 2, 4) : 1;
            run("dense", dims({{"B", b}, {"L", l}, {"in", in}, {"out", out}}), dense,
                seq ? random_tensor(rng, {b, l, in}) : random_tensor(rng, {b, in}));
        }
        {
            const std::size_t b = pick(rng, 1, 4), w = pick(rng, 1, 8);
            Tensor x = random_tensor(rng, {b, w});
            for (double& v : x.values()) v = std::copysign(std::abs(v) + 1e-3, v);
            nn::ReLU relu;
            run("relu", dims({{"B", b}, {"W", w}}), relu, x);
        }
        {
            const std::size_t b = pick(rng, 1, 4), w = pick(rng, 1, 8);
            nn::Dropout dropout(rng.uniform(0.1, 0.6), std::make_shared<Rng>(rng.next()));
            dropout.freeze(true);
            run("dropout", dims({{"B", b}, {"W", w}}), dropout, random_tensor(rng, {b, w}));
        }
        {
            const std::size_t b = pick(rng, 1, 3), d = pick(rng, 1, 4), h = pick(rng, 1, 4);
            nn::LstmCell cell(d, h);
            randomize(cell, rng);
            run("lstm_step", dims({{"B", b}, {"D", d}, {"H", h}}), cell, random_tensor(rng, {b, d + 2 * h}));
        }
        {
            const std::size_t b = pick(rng, 1, 3), l = pick(rng, 1, 5), d = pick(rng, 1, 4), h = pick(rng, 1, 4);
            nn::Lstm lstm(d, h);
            randomize(lstm, rng);
            run("lstm", dims({{"B", b}, {"L", l}, {"D", d}, {"H", h}}), lstm, random_tensor(rng, {b, l, d}));
        }
        {
            const std::size_t b = pick(rng, 1, 3), l = pick(rng, 1, 5), d = pick(rng, 1, 4), h = pick(rng, 1, 4);
            nn::Lstm lstm(d, h, true);
            randomize(lstm, rng);
            run("lstm_reversed", dims({{"B", b}, {"L", l}, {"D", d}, {"H", h}}), lstm, random_tensor(rng, {b, l, d}));
        }
        {
            const std::size_t b = pick(rng, 1, 3), l = pick(rng, 1, 5), d = pick(rng, 1, 4), h = pick(rng, 1, 3);
            nn::BiLstm bilstm(d, h);
            randomize(bilstm, rng);
            run("bilstm", dims({{"B", b}, {"L", l}, {"D", d}, {"H", h}}), bilstm, random_tensor(rng, {b, l, d}));
        }
        if (options.include_baseline_layers) {
            {
                const std::size_t b = pick(rng, 1, 3), l = pick(rng, 1, 5), d = pick(rng, 1, 4), h = pick(rng, 1, 4);
                nn::SimpleRnn rnn(d, h);
                randomize(rnn, rng);
                run("rnn", dims({{"B", b}, {"L", l}, {"D", d}, {"H", h}}), rnn, random_tensor(rng, {b, l, d}));
            }
            {
                const std::size_t b = pick(rng, 1, 3), l = pick(rng, 1, 5), d = pick(rng, 1, 4), h = pick(rng, 1, 4);
                nn::Gru gru(d, h);
                randomize(gru, rng);
                run("gru", dims({{"B", b}, {"L", l}, {"D", d}, {"H", h}}), gru, random_tensor(rng, {b, l, d}));
            }
        }
    }
    return result;
}

GradientCase run_daqff_gradient_check(std::uint64_t seed, double tolerance)
{
    DaqffConfig cfg;
    cfg.branches = 2;
    cfg.channels_per_branch = 2;
    cfg.lookup = 6;
    cfg.horizon = 2;
    cfg.conv_specs = {{3, 3}, {2, 1}};
    cfg.branch_projection_dim = 2;
    cfg.bilstm_hidden = 3;
    cfg.dropout_p = 0.3;

    nn::GradCheckOptions check;
    check.tolerance = tolerance;
    check.mode = nn::Mode::train;
    for (std::uint64_t s = seed; s < seed + 200; ++s) {
        auto rng = std::make_shared<Rng>(s);
        DaqffNet net(cfg, rng);
        // Non-zero biases so every parameter receives gradient.
        randomize(net, *rng, 0.6);
        nn::freeze_dropout(net, true);
        const Tensor x = random_tensor(*rng, {2, cfg.branches, cfg.lookup, cfg.channels_per_branch});
        nn::GradCheckReport report = nn::gradient_check(net, x, check);
        if (report.min_relu_margin < 1e-3) continue;
        return {"daqff", "n=2 D=2 L=6 convs=(3,3),(2,1) P=2 hidden=3 H=2 seed=" + std::to_string(s), report};
    }
    throw std::runtime_error("daqff gradient check: no seed kept ReLU inputs 1e-3 away from zero");
}

} // namespace daqff::model
