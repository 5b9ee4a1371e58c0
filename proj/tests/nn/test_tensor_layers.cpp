#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <memory>

#include "daqff/nn/conv1d.hpp"
#include "daqff/nn/dense.hpp"
#include "daqff/nn/elementwise.hpp"
#include "daqff/nn/reshape.hpp"
#include "oracles.hpp"

using namespace daqff::nn;

TEST(Tensor, ShapeAndSizeAgree)
{
    Tensor t({2, 3, 4});
    EXPECT_EQ(t.size(), 24u);
    EXPECT_EQ(t.rank(), 3u);
    EXPECT_THROW(Tensor({2, 0}), std::invalid_argument);
    EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST(Tensor, AtIsRowMajor)
{
    Tensor t({2, 3}, {0, 1, 2, 3, 4, 5});
    EXPECT_EQ(t.at({1, 0}), 3.0);
    EXPECT_EQ(t.at({0, 2}), 2.0);
}

TEST(Conv1D, ValidSlidingSum)
{
    Conv1D conv(1, 1, 2, Padding::valid);
    conv.weight().value = Tensor({1, 1, 2}, {1, 1});
    const Tensor y = conv.forward(Tensor({1, 1, 4}, {1, 2, 3, 4}), Mode::eval);
    EXPECT_EQ(y.shape(), (Shape{1, 1, 3}));
    EXPECT_EQ(y.storage(), (std::vector<double>{3, 5, 7}));
}

TEST(Conv1D, UnitKernelIsIdentity)
{
    Conv1D conv(1, 1, 1);
    conv.weight().value = Tensor({1, 1, 1}, {1});
    Tensor x({2, 1, 5}, {1, -2, 3, 4, 0.5, 9, 8, 7, 6, 5});
    EXPECT_EQ(conv.forward(x, Mode::eval), x);
}

TEST(Conv1D, ZeroWeightsGiveBias)
{
    Conv1D conv(2, 3, 3);
    conv.bias().value.fill(0.5);
    Rng rng(3);
    const Tensor y = conv.forward(oracle::random_tensor(rng, {2, 2, 6}), Mode::eval);
    for (double v : y.values()) EXPECT_EQ(v, 0.5);
}

TEST(Conv1D, Errors)
{
    Conv1D conv(2, 1, 3, Padding::valid);
    EXPECT_THROW(conv.forward(Tensor({1, 3, 5}), Mode::eval), std::invalid_argument);
    EXPECT_THROW(conv.forward(Tensor({1, 2, 2}), Mode::eval), std::invalid_argument);
    Tensor bad({1, 2, 5});
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(conv.forward(bad, Mode::eval), std::invalid_argument);
}

TEST(Conv1D, LengthLaw)
{
    for (std::size_t t = 1; t <= 9; ++t)
        for (std::size_t k = 1; k <= t; ++k) {
            Conv1D same(1, 1, k, Padding::same), valid(1, 1, k, Padding::valid);
            EXPECT_EQ(same.forward(Tensor({1, 1, t}), Mode::eval).dim(2), t);
            EXPECT_EQ(valid.forward(Tensor({1, 1, t}), Mode::eval).dim(2), t - k + 1);
        }
}

TEST(Conv1D, MatchesNaiveOracle)
{
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t b = 1 + rng.below(3), c = 1 + rng.below(4), f = 1 + rng.below(4), t = 1 + rng.below(10);
        const std::size_t k = 1 + rng.below(t);
        const bool same = trial % 2 == 0;
        Conv1D conv(c, f, k, same ? Padding::same : Padding::valid);
        conv.initialize(rng);
        for (double& v : conv.bias().value.values()) v = rng.uniform(-1, 1);
        const Tensor x = oracle::random_tensor(rng, {b, c, t});
        const Tensor expect = oracle::conv1d(x, conv.weight().value, conv.bias().value, same);
        EXPECT_LT(oracle::max_abs_diff(conv.forward(x, Mode::eval), expect), 1e-12);
    }
}

TEST(Conv1D, ParameterCount)
{
    Conv1D conv(3, 4, 3);
    EXPECT_EQ(conv.parameter_count(), 40u);
}

TEST(ReLU, Definition)
{
    ReLU relu;
    EXPECT_EQ(relu.forward(Tensor({1, 3}, {-1, 0, 2}), Mode::eval).storage(), (std::vector<double>{0, 0, 2}));
    Tensor pos({1, 3}, {0, 1, 5});
    EXPECT_EQ(relu.forward(pos, Mode::eval), pos);
    EXPECT_EQ(relu.forward(Tensor({1, 2}, {-3, -0.1}), Mode::eval).storage(), (std::vector<double>{0, 0}));
}

TEST(Flatten, RowMajorAndRoundTrip)
{
    Tensor x({2, 3, 2});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
    const Tensor f = flatten(x);
    EXPECT_EQ(f.shape(), (Shape{2, 6}));
    EXPECT_EQ(f.storage(), x.storage());
    EXPECT_EQ(unflatten(f, x.shape()), x);
    Tensor flat({2, 4});
    EXPECT_EQ(flatten(flat), flat);
    EXPECT_THROW(flatten(Tensor({5})), std::invalid_argument);
}

TEST(Dense, HandCases)
{
    Dense d(2, 2);
    d.weight().value = Tensor({2, 2}, {1, 0, 0, 1});
    Tensor x({1, 2}, {3, -4});
    EXPECT_EQ(d.forward(x, Mode::eval), x);

    d.weight().value.fill(0.0);
    d.bias().value = Tensor({2}, {1, 2});
    EXPECT_EQ(d.forward(Tensor({3, 2}, {1, 2, 3, 4, 5, 6}), Mode::eval).storage(), (std::vector<double>{1, 2, 1, 2, 1, 2}));

    d.weight().value = Tensor({2, 2}, {1, 2, 3, 4});
    d.bias().value.fill(0.0);
    EXPECT_EQ(d.forward(Tensor({1, 2}, {1, 1}), Mode::eval).storage(), (std::vector<double>{3, 7}));
    EXPECT_THROW(d.forward(Tensor({1, 3}), Mode::eval), std::invalid_argument);
}

TEST(Dense, AnalyticBackward)
{
    Dense d(3, 2);
    Rng rng(5);
    d.initialize(rng);
    const Tensor x({1, 3}, {0.5, -1, 2});
    const Tensor g({1, 2}, {0.25, -3});
    d.forward(x, Mode::train);
    const Tensor dx = d.backward(g);
    for (std::size_t o = 0; o < 2; ++o) {
        EXPECT_DOUBLE_EQ(d.bias().grad[o], g[o]);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(d.weight().grad[o * 3 + i], g[o] * x[i]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        double expect = 0.0;
        for (std::size_t o = 0; o < 2; ++o) expect += d.weight().value[o * 3 + i] * g[o];
        EXPECT_NEAR(dx[i], expect, 1e-15);
    }
}

TEST(Backward, ZeroUpstreamGivesZeroGradients)
{
    Rng rng(8);
    Conv1D conv(2, 3, 3);
    conv.initialize(rng);
    const Tensor y = conv.forward(oracle::random_tensor(rng, {2, 2, 5}), Mode::train);
    const Tensor dx = conv.backward(Tensor(y.shape()));
    for (double v : dx.values()) EXPECT_EQ(v, 0.0);
    for (auto* p : conv.parameters())
        for (double v : p->grad.values()) EXPECT_EQ(v, 0.0);
}

TEST(Backward, RequiresForwardCacheAndMatchingShape)
{
    Dense d(2, 2);
    EXPECT_THROW(d.backward(Tensor({1, 2})), std::logic_error);
    d.forward(Tensor({1, 2}), Mode::train);
    EXPECT_THROW(d.backward(Tensor({1, 3})), std::invalid_argument);
}
