#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "daqff/nn/conv1d.hpp"
#include "daqff/nn/dense.hpp"
#include "daqff/nn/dropout.hpp"
#include "daqff/nn/layer.hpp"
#include "daqff/nn/lstm.hpp"
#include "daqff/nn/reshape.hpp"

namespace daqff::model {

struct ConvSpec {
    std::size_t filters = 1;
    std::size_t kernel = 1;
    friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

struct DaqffConfig {
    std::size_t branches = 1;            // stations or series groups
    std::size_t channels_per_branch = 8; // variables per branch
    std::size_t lookup = 1;              // input window length
    std::size_t horizon = 1;             // forecast steps emitted at once
    std::vector<ConvSpec> conv_specs{{64, 5}, {32, 3}, {16, 1}};
    std::size_t branch_projection_dim = 8;
    std::size_t bilstm_hidden = 128;
    double dropout_p = 0.3;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    friend bool operator==(const DaqffConfig&, const DaqffConfig&) = default;
};

/// The hybrid forecaster: B x n x L x D -> B x H.
///
/// Each branch runs its own conv stack (same padding, ReLU after every conv)
/// over its L x D window, then a per-time-step linear projection, so every
/// branch yields B x L x P. Branch features are concatenated along channels,
/// passed through dropout and a Bi-LSTM; the forward direction's last state
/// and the backward direction's last state form a 2H vector which, after a
/// second dropout, feeds the linear fusion head.
///
/// Initialization order (one shared generator): branch 0 convs in order, its
/// projection, branch 1 ..., then Bi-LSTM forward direction, backward
/// direction, then the head. Within a layer: weights, recurrent weights,
/// biases, each row-major.
class DaqffNet : public nn::Layer {
public:
    DaqffNet(const DaqffConfig& config, std::shared_ptr<nn::Rng> rng);

    nn::Tensor forward(const nn::Tensor& input, nn::Mode mode) override;
    nn::Tensor backward(const nn::Tensor& grad_output) override;
    std::string kind() const override { return "daqff"; }
    void visit(const std::function<void(nn::Layer&)>& fn) override;
    void collect_parameters(std::string_view prefix, std::vector<nn::ParameterRef>& out) override;

    const DaqffConfig& config() const noexcept { return config_; }

    /// Conv stack + projection for branch i: B x L x D -> B x L x P.
    nn::Sequential& branch(std::size_t i) { return *branches_.at(i); }
    nn::Dropout& feature_dropout() noexcept { return feature_dropout_; }
    nn::BiLstm& bilstm() noexcept { return bilstm_; }
    nn::BiFinalStates& final_states() noexcept { return final_states_; }
    nn::Dropout& state_dropout() noexcept { return state_dropout_; }
    nn::Dense& head() noexcept { return head_; }

private:
    DaqffConfig config_;
    std::vector<std::unique_ptr<nn::Sequential>> branches_;
    nn::Dropout feature_dropout_;
    nn::BiLstm bilstm_;
    nn::BiFinalStates final_states_;
    nn::Dropout state_dropout_;
    nn::Dense head_;
    nn::Shape input_shape_;
};

/// Branch slice x[:, i] of a B x n x L x D tensor as B x L x D.
nn::Tensor branch_slice(const nn::Tensor& input, std::size_t branch);
/// Concatenates B x L x P_i tensors along the last axis.
nn::Tensor concat_channels(const std::vector<nn::Tensor>& parts);

} // namespace daqff::model
