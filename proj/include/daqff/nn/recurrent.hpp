#pragma once

#include <cstddef>
#include <string>

#include "daqff/nn/layer.hpp"
#include "daqff/nn/rng.hpp"

namespace daqff::nn {

/// Elman RNN with tanh: h' = tanh(U x + W h + b). B x L x D -> B x L x H, zero initial state.
class SimpleRnn : public Layer {
public:
    SimpleRnn(std::size_t input_dim, std::size_t hidden_dim);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "rnn"; }
    void initialize(Rng& rng);

    std::size_t hidden_dim() const noexcept { return hidden_dim_; }
    Parameter& input_weights() noexcept { return input_weights_; }
    Parameter& recurrent_weights() noexcept { return recurrent_weights_; }
    Parameter& bias() noexcept { return bias_; }

protected:
    std::vector<Parameter*> own_parameters() override { return {&input_weights_, &recurrent_weights_, &bias_}; }

private:
    std::size_t input_dim_;
    std::size_t hidden_dim_;
    Parameter input_weights_;     // H x D
    Parameter recurrent_weights_; // H x H
    Parameter bias_;              // H
    Tensor input_;
    Tensor hiddens_;              // (L+1) x B x H
};

/// GRU, update gate z, reset gate r, candidate n:
///   z = sig(U_z x + W_z h + b_z)   r = sig(U_r x + W_r h + b_r)
///   n = tanh(U_n x + W_n (r*h) + b_n)
///   h' = (1 - z)*n + z*h
/// Stacked as U: 3H x D, W: 3H x H, b: 3H in (z, r, n) order.
class Gru : public Layer {
public:
    Gru(std::size_t input_dim, std::size_t hidden_dim);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "gru"; }
    void initialize(Rng& rng);

    std::size_t hidden_dim() const noexcept { return hidden_dim_; }
    Parameter& input_weights() noexcept { return input_weights_; }
    Parameter& recurrent_weights() noexcept { return recurrent_weights_; }
    Parameter& bias() noexcept { return bias_; }

protected:
    std::vector<Parameter*> own_parameters() override { return {&input_weights_, &recurrent_weights_, &bias_}; }

private:
    std::size_t input_dim_;
    std::size_t hidden_dim_;
    Parameter input_weights_;
    Parameter recurrent_weights_;
    Parameter bias_;
    Tensor input_;
    Tensor gates_;   // L x B x 3H activated (z, r, n)
    Tensor hiddens_; // (L+1) x B x H
};

} // namespace daqff::nn
