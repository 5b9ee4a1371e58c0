#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "daqff/nn/layer.hpp"

namespace daqff::optim {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction. Moments mirror the parameter list given at
/// construction; step() consumes and then zeroes the gradients.
class Adam {
public:
    Adam(std::vector<nn::Parameter*> params, AdamConfig config = {});

    void step();
    std::uint64_t steps() const noexcept { return step_; }
    const AdamConfig& config() const noexcept { return config_; }
    const std::vector<nn::Tensor>& first_moments() const noexcept { return m_; }
    const std::vector<nn::Tensor>& second_moments() const noexcept { return v_; }

private:
    std::vector<nn::Parameter*> params_;
    AdamConfig config_;
    std::vector<nn::Tensor> m_;
    std::vector<nn::Tensor> v_;
    std::uint64_t step_ = 0;
};

/// Rescales all gradients so their joint L2 norm is at most max_norm.
/// Returns the norm before clipping.
double clip_grad_norm(const std::vector<nn::Parameter*>& params, double max_norm);

} // namespace daqff::optim
