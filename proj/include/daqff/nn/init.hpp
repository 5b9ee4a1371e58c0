#pragma once

#include <cstddef>

#include "daqff/nn/rng.hpp"
#include "daqff/nn/tensor.hpp"

namespace daqff::nn {

/// Fills `t` in row-major order with uniform(-a, a), a = sqrt(6 / (fan_in + fan_out)).
/// One draw per element.
void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

} // namespace daqff::nn
