#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "daqff/model/daqff.hpp"
#include "daqff/nn/layer.hpp"
#include "daqff/nn/rng.hpp"

namespace daqff::model {

enum class ModelKind { daqff, rnn, lstm, gru, cnn, persistence };

/// Accepts the lower- or upper-case name ("lstm", "LSTM"). Throws
/// std::invalid_argument naming the unknown kind.
ModelKind parse_model_kind(std::string_view name);
std::string to_string(ModelKind kind);

/// Everything needed to rebuild a model. Baselines reuse the shape fields of
/// DaqffConfig: bilstm_hidden is the recurrent width, conv_specs the CNN stack.
struct ModelSpec {
    ModelKind kind = ModelKind::daqff;
    DaqffConfig shape;
    /// Index of the target among the n*D input channels (branch-major);
    /// only persistence reads it.
    std::size_t target_channel = 0;
    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct BaselineOptions {
    std::size_t hidden = 128;
    double dropout_p = 0.3;
    std::vector<ConvSpec> conv_specs{{64, 5}, {32, 3}, {16, 1}};
    std::size_t target_channel = 0;
};

/// Input B x n x L x D (n = stations), output B x H.
///
///   rnn/lstm/gru: merge stations -> one recurrent layer -> last state -> dropout -> dense
///   cnn:          merge -> conv+ReLU stack (same padding) -> flatten -> dropout -> dense
///   persistence:  repeats the last observed target channel, no parameters
std::unique_ptr<nn::Layer> build_baseline(ModelKind kind, std::size_t lookup, std::size_t branches, std::size_t channels,
                                          std::size_t horizon, std::shared_ptr<nn::Rng> rng,
                                          const BaselineOptions& options = {});

std::unique_ptr<nn::Layer> build_model(const ModelSpec& spec, std::shared_ptr<nn::Rng> rng);

/// B x n x L x D -> B x H, every horizon equal to x[b, c / D, L-1, c % D].
class Persistence : public nn::Layer {
public:
    Persistence(std::size_t horizon, std::size_t target_channel);
    nn::Tensor forward(const nn::Tensor& input, nn::Mode mode) override;
    nn::Tensor backward(const nn::Tensor& grad_output) override;
    std::string kind() const override { return "persistence"; }

private:
    std::size_t horizon_;
    std::size_t target_channel_;
    nn::Shape input_shape_;
};

/// Last value of `history` repeated H times.
nn::Tensor persistence_forecast(std::span<const double> history, std::size_t horizon);

} // namespace daqff::model
