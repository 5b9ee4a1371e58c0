#pragma once

#include <memory>
#include <string>

#include "daqff/nn/layer.hpp"
#include "daqff/nn/rng.hpp"

namespace daqff::nn {

/// Inverted dropout.
///
/// Train mode zeroes each element independently with probability p and scales
/// survivors by 1/(1-p); eval mode is the identity. The mask takes one
/// uniform draw per element in row-major order from the shared generator
/// (element dropped when the draw is < p). p = 0 draws nothing.
class Dropout : public Layer {
public:
    Dropout(double p, std::shared_ptr<Rng> rng);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "dropout"; }

    double probability() const noexcept { return p_; }

    /// While frozen, train-mode forwards reuse the last mask when the shape
    /// matches. Used to make gradient checks deterministic.
    void freeze(bool frozen) noexcept { frozen_ = frozen; }
    bool frozen() const noexcept { return frozen_; }

private:
    double p_;
    std::shared_ptr<Rng> rng_;
    bool frozen_ = false;
    bool last_train_ = false;
    Tensor mask_;
};

/// Freeze or unfreeze every Dropout nested in `root`.
void freeze_dropout(Layer& root, bool frozen);

} // namespace daqff::nn
