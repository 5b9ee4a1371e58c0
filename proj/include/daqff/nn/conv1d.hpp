#pragma once

#include <cstddef>
#include <string>

#include "daqff/nn/layer.hpp"
#include "daqff/nn/rng.hpp"

namespace daqff::nn {

enum class Padding { same, valid };

/// Cross-correlation over the time axis: B x C x T -> B x F x T'.
///
/// Emits the raw pre-activation; pair with ReLU for the usual conv block.
/// Same padding zero-pads (K-1)/2 steps on the left and the rest on the right.
class Conv1D : public Layer {
public:
    Conv1D(std::size_t in_channels, std::size_t filters, std::size_t kernel, Padding padding = Padding::same);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "conv1d"; }

    /// Glorot weights (fan_in = C*K, fan_out = F*K), zero bias.
    void initialize(Rng& rng);

    std::size_t in_channels() const noexcept { return in_channels_; }
    std::size_t filters() const noexcept { return filters_; }
    std::size_t kernel() const noexcept { return kernel_; }
    Padding padding() const noexcept { return padding_; }
    std::size_t output_length(std::size_t input_length) const;

    /// F x C x K.
    Parameter& weight() noexcept { return weight_; }
    /// F.
    Parameter& bias() noexcept { return bias_; }

protected:
    std::vector<Parameter*> own_parameters() override { return {&weight_, &bias_}; }

private:
    std::size_t in_channels_;
    std::size_t filters_;
    std::size_t kernel_;
    Padding padding_;
    Parameter weight_;
    Parameter bias_;

    // im2col cache: (C*K) x (B*T')
    Tensor columns_;
    Shape input_shape_;
};

} // namespace daqff::nn
