#include "daqff/nn/elementwise.hpp"

#include <algorithm>
#include <cmath>

namespace daqff::nn {

Tensor ReLU::forward(const Tensor& input, Mode)
{
    input_ = input;
    Tensor out(input.shape());
    double min_abs = std::numeric_limits<double>::infinity();
    const double* x = input.data();
    double* y = out.data();
    for (std::size_t i = 0; i < input.size(); ++i) {
        y[i] = x[i] > 0.0 ? x[i] : 0.0;
        min_abs = std::min(min_abs, std::abs(x[i]));
    }
    min_abs_input_ = min_abs;
    mark_forward(out);
    return out;
}

Tensor ReLU::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    Tensor grad(grad_output.shape());
    const double* x = input_.data();
    const double* g = grad_output.data();
    double* dx = grad.data();
    for (std::size_t i = 0; i < grad.size(); ++i) dx[i] = x[i] > 0.0 ? g[i] : 0.0;
    return grad;
}

} // namespace daqff::nn
