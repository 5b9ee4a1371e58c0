#pragma once

#include <limits>
#include <string>

#include "daqff/nn/layer.hpp"

namespace daqff::nn {

class ReLU : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "relu"; }

    /// Smallest |x| seen by the last forward; finite differences are only
    /// trustworthy when this clears the probe step.
    double min_abs_input() const noexcept { return min_abs_input_; }

private:
    Tensor input_;
    double min_abs_input_ = std::numeric_limits<double>::infinity();
};

} // namespace daqff::nn
