#include "daqff/nn/dense.hpp"

#include <stdexcept>

#include "daqff/nn/init.hpp"
#include "eigen_util.hpp"

namespace daqff::nn {

Dense::Dense(std::size_t in_features, std::size_t out_features) : in_(in_features), out_(out_features)
{
    if (in_ == 0 || out_ == 0) throw std::invalid_argument("dense: widths must be >= 1");
    weight_ = Parameter("weight", {out_, in_});
    bias_ = Parameter("bias", {out_});
}

void Dense::initialize(Rng& rng)
{
    glorot_uniform(weight_.value, in_, out_, rng);
    bias_.value.fill(0.0);
}

Tensor Dense::forward(const Tensor& input, Mode)
{
    if (input.rank() < 2) {
        throw std::invalid_argument("dense: expected rank >= 2 input, got " + shape_string(input.shape()));
    }
    if (input.shape().back() != in_) {
        throw std::invalid_argument("dense: input width " + std::to_string(input.shape().back()) + " != " +
                                    std::to_string(in_));
    }
    input_ = input;
    const auto rows = static_cast<Eigen::Index>(input.size() / in_);
    Shape out_shape = input.shape();
    out_shape.back() = out_;
    Tensor out(out_shape);
    auto y = detail::as_matrix(out, rows, out_);
    y.noalias() = detail::as_matrix(input, rows, in_) * detail::as_matrix(weight_.value, out_, in_).transpose();
    y.rowwise() += detail::as_row(bias_.value);
    mark_forward(out);
    return out;
}

Tensor Dense::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const auto rows = static_cast<Eigen::Index>(input_.size() / in_);
    auto g = detail::as_matrix(grad_output, rows, out_);
    detail::as_matrix(weight_.grad, out_, in_).noalias() += g.transpose() * detail::as_matrix(input_, rows, in_);
    detail::as_row(bias_.grad) += g.colwise().sum();
    Tensor grad_input(input_.shape());
    detail::as_matrix(grad_input, rows, in_).noalias() = g * detail::as_matrix(weight_.value, out_, in_);
    return grad_input;
}

} // namespace daqff::nn
