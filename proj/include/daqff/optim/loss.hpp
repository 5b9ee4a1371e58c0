#pragma once

#include "daqff/nn/tensor.hpp"

namespace daqff::optim {

struct LossResult {
    double loss = 0.0;
    nn::Tensor grad;
};

/// Mean over every element: loss = sum((p - y)^2) / (B*H), grad = 2(p - y) / (B*H).
LossResult mse_loss(const nn::Tensor& pred, const nn::Tensor& target);

} // namespace daqff::optim
