#include "daqff/model/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "daqff/nn/dense.hpp"
#include "daqff/nn/dropout.hpp"
#include "daqff/nn/elementwise.hpp"
#include "daqff/nn/lstm.hpp"
#include "daqff/nn/recurrent.hpp"
#include "daqff/nn/reshape.hpp"

namespace daqff::model {

using nn::Tensor;

ModelKind parse_model_kind(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "daqff") return ModelKind::daqff;
    if (lower == "rnn") return ModelKind::rnn;
    if (lower == "lstm") return ModelKind::lstm;
    if (lower == "gru") return ModelKind::gru;
    if (lower == "cnn") return ModelKind::cnn;
    if (lower == "persistence") return ModelKind::persistence;
    throw std::invalid_argument("unknown model kind '" + std::string(name) +
                                "' (expected daqff, rnn, lstm, gru, cnn or persistence)");
}

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::daqff: return "daqff";
    case ModelKind::rnn: return "rnn";
    case ModelKind::lstm: return "lstm";
    case ModelKind::gru: return "gru";
    case ModelKind::cnn: return "cnn";
    case ModelKind::persistence: return "persistence";
    }
    return "unknown";
}

Persistence::Persistence(std::size_t horizon, std::size_t target_channel)
    : horizon_(horizon), target_channel_(target_channel)
{
    if (horizon == 0) throw std::invalid_argument("persistence: horizon must be >= 1");
}

Tensor Persistence::forward(const Tensor& input, nn::Mode)
{
    nn::require_rank(input, 4, "persistence");
    const std::size_t batch = input.dim(0), n = input.dim(1), len = input.dim(2), d = input.dim(3);
    if (target_channel_ >= n * d) {
        throw std::invalid_argument("persistence: target channel " + std::to_string(target_channel_) +
                                    " out of range for " + nn::shape_string(input.shape()));
    }
    const std::size_t branch = target_channel_ / d, channel = target_channel_ % d;
    input_shape_ = input.shape();
    Tensor out({batch, horizon_});
    for (std::size_t b = 0; b < batch; ++b) {
        const double last = input.data()[((b * n + branch) * len + len - 1) * d + channel];
        std::fill_n(out.data() + b * horizon_, horizon_, last);
    }
    mark_forward(out);
    return out;
}

Tensor Persistence::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = input_shape_[0], n = input_shape_[1], len = input_shape_[2], d = input_shape_[3];
    const std::size_t branch = target_channel_ / d, channel = target_channel_ % d;
    Tensor grad(input_shape_);
    for (std::size_t b = 0; b < batch; ++b) {
        double sum = 0.0;
        for (std::size_t h = 0; h < horizon_; ++h) sum += grad_output.data()[b * horizon_ + h];
        grad.data()[((b * n + branch) * len + len - 1) * d + channel] = sum;
    }
    return grad;
}

Tensor persistence_forecast(std::span<const double> history, std::size_t horizon)
{
    if (history.empty()) throw std::invalid_argument("persistence_forecast: empty history");
    if (horizon == 0) throw std::invalid_argument("persistence_forecast: horizon must be >= 1");
    return Tensor({horizon}, history.back());
}

std::unique_ptr<nn::Layer> build_baseline(ModelKind kind, std::size_t lookup, std::size_t branches, std::size_t channels,
                                          std::size_t horizon, std::shared_ptr<nn::Rng> rng,
                                          const BaselineOptions& options)
{
    if (lookup == 0 || branches == 0 || channels == 0 || horizon == 0)
        throw std::invalid_argument("baseline: lookup, branches, channels and horizon must be >= 1");
    if (kind == ModelKind::persistence) return std::make_unique<Persistence>(horizon, options.target_channel);
    if (!rng) throw std::invalid_argument("baseline: a generator is required");

    const std::size_t width = branches * channels;
    auto net = std::make_unique<nn::Sequential>();
    net->emplace<nn::MergeBranches>();
    std::size_t features = 0;
    switch (kind) {
    case ModelKind::rnn:
        net->emplace<nn::SimpleRnn>(width, options.hidden).initialize(*rng);
        break;
    case ModelKind::lstm:
        net->emplace<nn::Lstm>(width, options.hidden).initialize(*rng);
        break;
    case ModelKind::gru:
        net->emplace<nn::Gru>(width, options.hidden).initialize(*rng);
        break;
    case ModelKind::cnn: {
        if (options.conv_specs.empty()) throw std::invalid_argument("baseline: cnn needs at least one conv spec");
        net->emplace<nn::SwapLastAxes>();
        std::size_t c = width;
        for (const auto& spec : options.conv_specs) {
            net->emplace<nn::Conv1D>(c, spec.filters, spec.kernel, nn::Padding::same).initialize(*rng);
            net->emplace<nn::ReLU>();
            c = spec.filters;
        }
        net->emplace<nn::Flatten>();
        features = c * lookup;
        break;
    }
    default:
        throw std::invalid_argument("baseline: '" + to_string(kind) + "' is not a baseline kind");
    }
    if (kind != ModelKind::cnn) {
        net->emplace<nn::LastStep>();
        features = options.hidden;
    }
    net->emplace<nn::Dropout>(options.dropout_p, rng);
    net->emplace<nn::Dense>(features, horizon).initialize(*rng);
    return net;
}

std::unique_ptr<nn::Layer> build_model(const ModelSpec& spec, std::shared_ptr<nn::Rng> rng)
{
    const DaqffConfig& s = spec.shape;
    if (spec.kind == ModelKind::daqff) return std::make_unique<DaqffNet>(s, std::move(rng));
    BaselineOptions options;
    options.hidden = s.bilstm_hidden;
    options.dropout_p = s.dropout_p;
    options.conv_specs = s.conv_specs;
    options.target_channel = spec.target_channel;
    return build_baseline(spec.kind, s.lookup, s.branches, s.channels_per_branch, s.horizon, std::move(rng), options);
}

} // namespace daqff::model
