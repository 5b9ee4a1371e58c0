#include "daqff/optim/loss.hpp"

#include <stdexcept>

namespace daqff::optim {

LossResult mse_loss(const nn::Tensor& pred, const nn::Tensor& target)
{
    if (pred.shape() != target.shape()) {
        throw std::invalid_argument("mse_loss: prediction " + nn::shape_string(pred.shape()) + " vs target " +
                                    nn::shape_string(target.shape()));
    }
    if (pred.empty()) throw std::invalid_argument("mse_loss: empty batch");
    const double scale = 1.0 / static_cast<double>(pred.size());
    LossResult r{0.0, nn::Tensor(pred.shape())};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double diff = pred[i] - target[i];
        r.loss += diff * diff;
        r.grad[i] = 2.0 * diff * scale;
    }
    r.loss *= scale;
    return r;
}

} // namespace daqff::optim
