#include "daqff/nn/dropout.hpp"

#include <stdexcept>

namespace daqff::nn {

Dropout::Dropout(double p, std::shared_ptr<Rng> rng) : p_(p), rng_(std::move(rng))
{
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout: probability must lie in [0, 1), got " + std::to_string(p));
    if (!rng_ && p > 0.0) throw std::invalid_argument("dropout: a generator is required when p > 0");
}

Tensor Dropout::forward(const Tensor& input, Mode mode)
{
    last_train_ = mode == Mode::train && p_ > 0.0;
    if (!last_train_) {
        mark_forward(input);
        return input;
    }
    if (!(frozen_ && mask_.shape() == input.shape())) {
        mask_ = Tensor(input.shape());
        const double scale = 1.0 / (1.0 - p_);
        for (double& m : mask_.values()) m = rng_->uniform() < p_ ? 0.0 : scale;
    }
    Tensor out(input.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = input[i] * mask_[i];
    mark_forward(out);
    return out;
}

Tensor Dropout::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    if (!last_train_) return grad_output;
    Tensor grad(grad_output.shape());
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = grad_output[i] * mask_[i];
    return grad;
}

void freeze_dropout(Layer& root, bool frozen)
{
    root.visit([frozen](Layer& layer) {
        if (auto* d = dynamic_cast<Dropout*>(&layer)) d->freeze(frozen);
    });
}

} // namespace daqff::nn
