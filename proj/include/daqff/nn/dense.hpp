#pragma once

#include <cstddef>
#include <string>

#include "daqff/nn/layer.hpp"
#include "daqff/nn/rng.hpp"

namespace daqff::nn {

/// y = W x + b applied along the last axis. Leading axes are treated as
/// batch, so a B x L x in input is a time-distributed projection.
class Dense : public Layer {
public:
    Dense(std::size_t in_features, std::size_t out_features);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "dense"; }

    void initialize(Rng& rng);

    std::size_t in_features() const noexcept { return in_; }
    std::size_t out_features() const noexcept { return out_; }
    /// out x in.
    Parameter& weight() noexcept { return weight_; }
    Parameter& bias() noexcept { return bias_; }

protected:
    std::vector<Parameter*> own_parameters() override { return {&weight_, &bias_}; }

private:
    std::size_t in_;
    std::size_t out_;
    Parameter weight_;
    Parameter bias_;
    Tensor input_;
};

} // namespace daqff::nn
