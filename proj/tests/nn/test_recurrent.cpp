#include <gtest/gtest.h>

#include <cmath>

#include "daqff/nn/lstm.hpp"
#include "daqff/nn/recurrent.hpp"
#include "oracles.hpp"

using namespace daqff::nn;

namespace {

void zero(Layer& layer)
{
    for (auto* p : layer.parameters()) p->value.fill(0.0);
}

Tensor reverse_time(const Tensor& x)
{
    const std::size_t b = x.dim(0), l = x.dim(1), d = x.dim(2);
    Tensor out(x.shape());
    for (std::size_t n = 0; n < b; ++n)
        for (std::size_t t = 0; t < l; ++t)
            for (std::size_t k = 0; k < d; ++k) out.at({n, l - 1 - t, k}) = x.at({n, t, k});
    return out;
}

} // namespace

TEST(LstmStep, ZeroParametersZeroState)
{
    Lstm lstm(3, 2);
    zero(lstm);
    const auto r = lstm_step(Tensor({3}, {1, 2, 3}), {Tensor({2}), Tensor({2})}, lstm);
    for (double v : r.state.hidden.values()) EXPECT_EQ(v, 0.0);
    for (double v : r.state.cell.values()) EXPECT_EQ(v, 0.0);
}

TEST(LstmStep, ZeroParametersHalveCell)
{
    Lstm lstm(2, 3);
    zero(lstm);
    const Tensor s0({3}, {1.5, -2, 0.25});
    const auto r = lstm_step(Tensor({2}, {4, -1}), {Tensor({3}), s0}, lstm);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(r.state.cell[i], 0.5 * s0[i]);
}

TEST(LstmStep, ScalarExample)
{
    Lstm lstm(1, 1);
    lstm.input_weights().value.fill(1.0);
    lstm.recurrent_weights().value.fill(1.0);
    lstm.bias().value.fill(0.0);
    const auto r = lstm_step(Tensor({1}, {1.0}), {Tensor({1}), Tensor({1})}, lstm);

    // Independent scalar evaluation: z = 1 for every gate.
    const double gate = 1.0 / (1.0 + std::exp(-1.0));
    const double cand = std::tanh(1.0);
    const double s = gate * cand;
    const double h = gate * std::tanh(s);
    EXPECT_NEAR(gate, 0.731059, 1e-6);
    EXPECT_NEAR(cand, 0.761594, 1e-6);
    EXPECT_NEAR(s, 0.556770, 1e-6);
    EXPECT_NEAR(h, 0.369606, 1e-6);

    EXPECT_NEAR(r.input_gate[0], 0.731059, 1e-5);
    EXPECT_NEAR(r.forget_gate[0], 0.731059, 1e-5);
    EXPECT_NEAR(r.output_gate[0], 0.731059, 1e-5);
    EXPECT_NEAR(r.candidate[0], 0.761594, 1e-5);
    EXPECT_NEAR(r.state.cell[0], 0.556770, 1e-5);
    EXPECT_NEAR(r.state.hidden[0], 0.369606, 1e-5);
    EXPECT_DOUBLE_EQ(r.state.hidden[0], h);
}

TEST(LstmStep, DimensionMismatch)
{
    Lstm lstm(2, 2);
    EXPECT_THROW(lstm_step(Tensor({3}), {Tensor({2}), Tensor({2})}, lstm), std::invalid_argument);
    EXPECT_THROW(lstm_step(Tensor({2}), {Tensor({3}), Tensor({2})}, lstm), std::invalid_argument);
}

TEST(LstmSequence, SingleStepMatchesStep)
{
    Rng rng(4);
    Lstm lstm(3, 4);
    lstm.initialize(rng);
    const Tensor x = oracle::random_tensor(rng, {2, 1, 3});
    const Tensor y = lstm.forward(x, Mode::eval);
    const auto r = lstm_step(x.reshaped({2, 3}), {Tensor({2, 4}), Tensor({2, 4})}, lstm);
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(y[i], r.state.hidden[i]);
}

TEST(LstmSequence, ZeroEverything)
{
    Lstm lstm(2, 3);
    zero(lstm);
    const Tensor y = lstm.forward(Tensor({2, 5, 2}), Mode::eval);
    for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(LstmSequence, MatchesUnrolledOracle)
{
    Rng rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t b = 1 + rng.below(3), d = 1 + rng.below(4), h = 1 + rng.below(4);
        for (bool reversed : {false, true}) {
            Lstm lstm(d, h, reversed);
            for (auto* p : lstm.parameters())
                for (double& v : p->value.values()) v = rng.uniform(-0.8, 0.8);
            const Tensor x = oracle::random_tensor(rng, {b, 3, d});
            const auto w = oracle::split(lstm.input_weights().value, lstm.recurrent_weights().value, lstm.bias().value, h);
            EXPECT_LT(oracle::max_abs_diff(lstm.forward(x, Mode::eval), oracle::lstm_sequence(w, x, h, reversed)), 1e-12);
        }
    }
}

TEST(LstmSequence, EmptySequenceUnrepresentable)
{
    EXPECT_THROW(Tensor({1, 0, 2}), std::invalid_argument);
}

TEST(Lstm, ParameterCount)
{
    Lstm lstm(3, 2);
    EXPECT_EQ(lstm.parameter_count(), 48u);
    BiLstm bi(3, 2);
    EXPECT_EQ(bi.parameter_count(), 96u);
}

TEST(Lstm, InitializationBiases)
{
    Rng rng(1);
    Lstm lstm(3, 4);
    lstm.initialize(rng);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(lstm.bias().value[i], (i >= 4 && i < 8) ? 1.0 : 0.0);
    const double limit = std::sqrt(6.0 / (3 + 16));
    for (double v : lstm.input_weights().value.values()) EXPECT_LE(std::abs(v), limit);
}

TEST(Lstm, GateRanges)
{
    Rng rng(23);
    Lstm lstm(4, 5);
    for (auto* p : lstm.parameters())
        for (double& v : p->value.values()) v = rng.uniform(-1, 1);
    lstm.forward(oracle::random_tensor(rng, {3, 7, 4}, 2.0), Mode::eval);
    const Tensor& g = lstm.cached_gates();
    const std::size_t h = 5;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t block = (i % (4 * h)) / h;
        if (block == static_cast<std::size_t>(Gate::candidate)) {
            EXPECT_GT(g[i], -1.0);
            EXPECT_LT(g[i], 1.0);
        } else {
            EXPECT_GT(g[i], 0.0);
            EXPECT_LT(g[i], 1.0);
        }
    }
}

TEST(BiLstm, ZeroParametersAndWidth)
{
    BiLstm bi(3, 4);
    for (auto* p : bi.parameters()) p->value.fill(0.0);
    Rng rng(2);
    const Tensor y = bi.forward(oracle::random_tensor(rng, {2, 5, 3}), Mode::eval);
    EXPECT_EQ(y.shape(), (Shape{2, 5, 8}));
    for (double v : y.values()) EXPECT_EQ(v, 0.0);
    for (std::size_t h : {1u, 2u, 7u}) {
        BiLstm other(2, h);
        other.initialize(rng);
        EXPECT_EQ(other.forward(Tensor({1, 3, 2}), Mode::eval).dim(2), 2 * h);
    }
}

TEST(BiLstm, SwapAndReverseSymmetry)
{
    Rng rng(31);
    const std::size_t b = 2, l = 5, d = 3, h = 4;
    BiLstm ab(d, h), ba(d, h);
    ab.initialize(rng);
    ba.forward_lstm().input_weights().value = ab.backward_lstm().input_weights().value;
    ba.forward_lstm().recurrent_weights().value = ab.backward_lstm().recurrent_weights().value;
    ba.forward_lstm().bias().value = ab.backward_lstm().bias().value;
    ba.backward_lstm().input_weights().value = ab.forward_lstm().input_weights().value;
    ba.backward_lstm().recurrent_weights().value = ab.forward_lstm().recurrent_weights().value;
    ba.backward_lstm().bias().value = ab.forward_lstm().bias().value;

    const Tensor x = oracle::random_tensor(rng, {b, l, d});
    const Tensor lhs = ab.forward(reverse_time(x), Mode::eval);
    const Tensor rhs = ba.forward(x, Mode::eval);
    double worst = 0.0;
    for (std::size_t n = 0; n < b; ++n)
        for (std::size_t t = 0; t < l; ++t)
            for (std::size_t k = 0; k < 2 * h; ++k) {
                const std::size_t swapped = k < h ? k + h : k - h;
                worst = std::max(worst, std::abs(lhs.at({n, t, k}) - rhs.at({n, l - 1 - t, swapped})));
            }
    EXPECT_LT(worst, 1e-12);
}

TEST(Recurrent, DeterministicForwardBackward)
{
    auto run = [] {
        Rng rng(77);
        BiLstm bi(3, 4);
        bi.initialize(rng);
        const Tensor x = oracle::random_tensor(rng, {2, 6, 3});
        const Tensor y = bi.forward(x, Mode::train);
        Tensor g(y.shape(), 1.0);
        const Tensor dx = bi.backward(g);
        std::vector<double> all(dx.storage());
        for (auto* p : bi.parameters()) all.insert(all.end(), p->grad.values().begin(), p->grad.values().end());
        all.insert(all.end(), y.values().begin(), y.values().end());
        return all;
    };
    EXPECT_EQ(run(), run());
}

TEST(SimpleRnn, TanhRecurrence)
{
    SimpleRnn rnn(1, 1);
    rnn.input_weights().value.fill(0.5);
    rnn.recurrent_weights().value.fill(2.0);
    rnn.bias().value.fill(0.1);
    const Tensor y = rnn.forward(Tensor({1, 2, 1}, {1.0, -1.0}), Mode::eval);
    const double h1 = std::tanh(0.5 + 0.1);
    EXPECT_DOUBLE_EQ(y[0], h1);
    EXPECT_DOUBLE_EQ(y[1], std::tanh(-0.5 + 2.0 * h1 + 0.1));
}

TEST(Gru, ZeroParametersHalveState)
{
    // z = 0.5, n = 0: h' = (1 - z) n + z h = 0.5 h, so from zero state stays 0.
    Gru gru(2, 3);
    for (auto* p : gru.parameters()) p->value.fill(0.0);
    const Tensor y = gru.forward(Tensor({1, 4, 2}, 1.0), Mode::eval);
    for (double v : y.values()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(gru.parameter_count(), 3u * (3 * 2 + 3 * 3 + 3));
}
