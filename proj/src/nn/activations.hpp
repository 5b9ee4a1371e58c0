#pragma once

#include <cmath>

namespace daqff::nn::detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace daqff::nn::detail
