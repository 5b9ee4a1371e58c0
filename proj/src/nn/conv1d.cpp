#include "daqff/nn/conv1d.hpp"

#include <cmath>
#include <stdexcept>

#include "daqff/nn/init.hpp"
#include "eigen_util.hpp"

namespace daqff::nn {

Conv1D::Conv1D(std::size_t in_channels, std::size_t filters, std::size_t kernel, Padding padding)
    : in_channels_(in_channels), filters_(filters), kernel_(kernel), padding_(padding)
{
    if (in_channels == 0 || filters == 0 || kernel == 0) {
        throw std::invalid_argument("conv1d: in_channels, filters and kernel must all be >= 1");
    }
    weight_ = Parameter("weight", {filters, in_channels, kernel});
    bias_ = Parameter("bias", {filters});
}

void Conv1D::initialize(Rng& rng)
{
    glorot_uniform(weight_.value, in_channels_ * kernel_, filters_ * kernel_, rng);
    bias_.value.fill(0.0);
}

std::size_t Conv1D::output_length(std::size_t input_length) const
{
    if (padding_ == Padding::same) return input_length;
    if (input_length < kernel_) {
        throw std::invalid_argument("conv1d: valid padding needs T >= K, got T=" + std::to_string(input_length) +
                                    " K=" + std::to_string(kernel_));
    }
    return input_length - kernel_ + 1;
}

Tensor Conv1D::forward(const Tensor& input, Mode)
{
    require_rank(input, 3, "conv1d");
    const std::size_t batch = input.dim(0);
    const std::size_t channels = input.dim(1);
    const std::size_t length = input.dim(2);
    if (channels != in_channels_) {
        throw std::invalid_argument("conv1d: input has " + std::to_string(channels) + " channels, expected " +
                                    std::to_string(in_channels_));
    }
    require_finite(input, "conv1d");
    const std::size_t out_len = output_length(length);
    const long pad_left = padding_ == Padding::same ? static_cast<long>((kernel_ - 1) / 2) : 0;

    const std::size_t ck = in_channels_ * kernel_;
    const std::size_t cols = batch * out_len;
    columns_ = Tensor({ck, cols});
    double* col = columns_.data();
    for (std::size_t c = 0; c < in_channels_; ++c) {
        for (std::size_t k = 0; k < kernel_; ++k) {
            double* row = col + (c * kernel_ + k) * cols;
            for (std::size_t b = 0; b < batch; ++b) {
                const double* x = input.data() + (b * channels + c) * length;
                for (std::size_t t = 0; t < out_len; ++t) {
                    const long src = static_cast<long>(t + k) - pad_left;
                    row[b * out_len + t] = (src >= 0 && src < static_cast<long>(length)) ? x[src] : 0.0;
                }
            }
        }
    }
    input_shape_ = input.shape();

    detail::RowMatrix y = detail::as_matrix(weight_.value, filters_, ck) * detail::as_matrix(columns_, ck, cols);
    Tensor out({batch, filters_, out_len});
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t f = 0; f < filters_; ++f) {
            double* dst = out.data() + (b * filters_ + f) * out_len;
            const double* src = y.data() + f * cols + b * out_len;
            const double bias = bias_.value[f];
            for (std::size_t t = 0; t < out_len; ++t) dst[t] = src[t] + bias;
        }
    }
    mark_forward(out);
    return out;
}

Tensor Conv1D::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = input_shape_[0];
    const std::size_t length = input_shape_[2];
    const std::size_t out_len = grad_output.dim(2);
    const std::size_t ck = in_channels_ * kernel_;
    const std::size_t cols = batch * out_len;
    const long pad_left = padding_ == Padding::same ? static_cast<long>((kernel_ - 1) / 2) : 0;

    detail::RowMatrix dy(filters_, cols);
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t f = 0; f < filters_; ++f) {
            const double* src = grad_output.data() + (b * filters_ + f) * out_len;
            for (std::size_t t = 0; t < out_len; ++t) dy(f, b * out_len + t) = src[t];
        }
    }
    auto columns = detail::as_matrix(columns_, ck, cols);
    detail::as_matrix(weight_.grad, filters_, ck).noalias() += dy * columns.transpose();
    detail::as_row(bias_.grad) += dy.rowwise().sum().transpose();

    detail::RowMatrix dcols = detail::as_matrix(weight_.value, filters_, ck).transpose() * dy;
    Tensor grad_input(input_shape_);
    for (std::size_t c = 0; c < in_channels_; ++c) {
        for (std::size_t k = 0; k < kernel_; ++k) {
            const double* row = dcols.data() + (c * kernel_ + k) * cols;
            for (std::size_t b = 0; b < batch; ++b) {
                double* dx = grad_input.data() + (b * in_channels_ + c) * length;
                for (std::size_t t = 0; t < out_len; ++t) {
                    const long src = static_cast<long>(t + k) - pad_left;
                    if (src >= 0 && src < static_cast<long>(length)) dx[src] += row[b * out_len + t];
                }
            }
        }
    }
    return grad_input;
}

} // namespace daqff::nn
