#pragma once

#include <string>

#include "daqff/nn/layer.hpp"

namespace daqff::nn {

/// B x ... -> B x P, row-major per sample.
class Flatten : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "flatten"; }

private:
    Shape input_shape_;
};

Tensor flatten(const Tensor& input);
Tensor unflatten(const Tensor& flat, const Shape& original);

/// B x M x N -> B x N x M. Converts between time-major and channel-major layouts.
class SwapLastAxes : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "swap"; }
};

Tensor swap_last_axes(const Tensor& input);

/// B x n x L x D -> B x L x (n*D): station windows stacked as channels.
class MergeBranches : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "merge"; }

private:
    Shape input_shape_;
};

/// B x L x H -> B x H, the state after the last time step.
class LastStep : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "last"; }

private:
    Shape input_shape_;
};

/// B x L x 2H -> B x 2H holding the forward direction's state at t = L and
/// the backward direction's state at t = 1, i.e. each direction's final state.
class BiFinalStates : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "final_states"; }

private:
    Shape input_shape_;
};

} // namespace daqff::nn
