#include "daqff/nn/reshape.hpp"

#include <algorithm>
#include <stdexcept>

namespace daqff::nn {

Tensor flatten(const Tensor& input)
{
    if (input.rank() < 2) throw std::invalid_argument("flatten: rank >= 2 required, got " + shape_string(input.shape()));
    return input.reshaped({input.dim(0), input.size() / input.dim(0)});
}

Tensor unflatten(const Tensor& flat, const Shape& original) { return flat.reshaped(original); }

Tensor Flatten::forward(const Tensor& input, Mode)
{
    input_shape_ = input.shape();
    Tensor out = flatten(input);
    mark_forward(out);
    return out;
}

Tensor Flatten::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    return unflatten(grad_output, input_shape_);
}

Tensor swap_last_axes(const Tensor& input)
{
    require_rank(input, 3, "swap");
    const std::size_t batch = input.dim(0), m = input.dim(1), n = input.dim(2);
    Tensor out({batch, n, m});
    for (std::size_t b = 0; b < batch; ++b) {
        const double* src = input.data() + b * m * n;
        double* dst = out.data() + b * m * n;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) dst[j * m + i] = src[i * n + j];
    }
    return out;
}

Tensor SwapLastAxes::forward(const Tensor& input, Mode)
{
    Tensor out = swap_last_axes(input);
    mark_forward(out);
    return out;
}

Tensor SwapLastAxes::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    return swap_last_axes(grad_output);
}

Tensor MergeBranches::forward(const Tensor& input, Mode)
{
    require_rank(input, 4, "merge");
    input_shape_ = input.shape();
    const std::size_t batch = input.dim(0), n = input.dim(1), len = input.dim(2), d = input.dim(3);
    Tensor out({batch, len, n * d});
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < len; ++t) {
                const double* src = input.data() + ((b * n + i) * len + t) * d;
                std::copy(src, src + d, out.data() + (b * len + t) * n * d + i * d);
            }
    mark_forward(out);
    return out;
}

Tensor MergeBranches::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = input_shape_[0], n = input_shape_[1], len = input_shape_[2], d = input_shape_[3];
    Tensor grad(input_shape_);
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < len; ++t) {
                const double* src = grad_output.data() + (b * len + t) * n * d + i * d;
                std::copy(src, src + d, grad.data() + ((b * n + i) * len + t) * d);
            }
    return grad;
}

Tensor LastStep::forward(const Tensor& input, Mode)
{
    require_rank(input, 3, "last");
    input_shape_ = input.shape();
    const std::size_t batch = input.dim(0), len = input.dim(1), h = input.dim(2);
    Tensor out({batch, h});
    for (std::size_t b = 0; b < batch; ++b) {
        const double* src = input.data() + (b * len + len - 1) * h;
        std::copy(src, src + h, out.data() + b * h);
    }
    mark_forward(out);
    return out;
}

Tensor LastStep::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = input_shape_[0], len = input_shape_[1], h = input_shape_[2];
    Tensor grad(input_shape_);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* src = grad_output.data() + b * h;
        std::copy(src, src + h, grad.data() + (b * len + len - 1) * h);
    }
    return grad;
}

Tensor BiFinalStates::forward(const Tensor& input, Mode)
{
    require_rank(input, 3, "final_states");
    if (input.dim(2) % 2 != 0) throw std::invalid_argument("final_states: feature width must be even");
    input_shape_ = input.shape();
    const std::size_t batch = input.dim(0), len = input.dim(1), w = input.dim(2), h = w / 2;
    Tensor out({batch, w});
    for (std::size_t b = 0; b < batch; ++b) {
        const double* last = input.data() + (b * len + len - 1) * w;
        const double* first = input.data() + (b * len) * w;
        std::copy(last, last + h, out.data() + b * w);
        std::copy(first + h, first + w, out.data() + b * w + h);
    }
    mark_forward(out);
    return out;
}

Tensor BiFinalStates::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = input_shape_[0], len = input_shape_[1], w = input_shape_[2], h = w / 2;
    Tensor grad(input_shape_);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* g = grad_output.data() + b * w;
        std::copy(g, g + h, grad.data() + (b * len + len - 1) * w);
        std::copy(g + h, g + w, grad.data() + (b * len) * w + h);
    }
    return grad;
}

} // namespace daqff::nn
