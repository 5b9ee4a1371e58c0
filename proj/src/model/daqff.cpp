#include "daqff/model/daqff.hpp"

#include <algorithm>
#include <stdexcept>

#include "daqff/nn/elementwise.hpp"

namespace daqff::model {

using nn::Mode;
using nn::Tensor;

void DaqffConfig::validate() const
{
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument("invalid DAQFF config: " + what);
    };
    need(branches >= 1, "branches must be >= 1");
    need(channels_per_branch >= 1, "channels_per_branch must be >= 1");
    need(lookup >= 1, "lookup must be >= 1");
    need(horizon >= 1, "horizon must be >= 1");
    need(!conv_specs.empty(), "conv_specs must not be empty");
    for (std::size_t i = 0; i < conv_specs.size(); ++i) {
        need(conv_specs[i].filters >= 1 && conv_specs[i].kernel >= 1,
             "conv_specs[" + std::to_string(i) + "] filters and kernel must be >= 1");
    }
    need(branch_projection_dim >= 1, "branch_projection_dim must be >= 1");
    need(bilstm_hidden >= 1, "bilstm_hidden must be >= 1");
    need(dropout_p >= 0.0 && dropout_p < 1.0, "dropout_p must lie in [0, 1)");
}

namespace {

const DaqffConfig& validated(const DaqffConfig& c)
{
    c.validate();
    return c;
}

} // namespace

DaqffNet::DaqffNet(const DaqffConfig& config, std::shared_ptr<nn::Rng> rng)
    : config_(validated(config)),
      feature_dropout_(config.dropout_p, rng),
      bilstm_(config.branches * config.branch_projection_dim, config.bilstm_hidden),
      state_dropout_(config.dropout_p, rng),
      head_(2 * config.bilstm_hidden, config.horizon)
{
    if (!rng) throw std::invalid_argument("daqff: a generator is required");
    for (std::size_t i = 0; i < config_.branches; ++i) {
        auto stack = std::make_unique<nn::Sequential>();
        stack->emplace<nn::SwapLastAxes>();
        std::size_t channels = config_.channels_per_branch;
        for (const auto& spec : config_.conv_specs) {
            stack->emplace<nn::Conv1D>(channels, spec.filters, spec.kernel, nn::Padding::same).initialize(*rng);
            stack->emplace<nn::ReLU>();
            channels = spec.filters;
        }
        stack->emplace<nn::SwapLastAxes>();
        stack->emplace<nn::Dense>(channels, config_.branch_projection_dim).initialize(*rng);
        branches_.push_back(std::move(stack));
    }
    bilstm_.initialize(*rng);
    head_.initialize(*rng);
}

Tensor branch_slice(const Tensor& input, std::size_t branch)
{
    const std::size_t batch = input.dim(0), n = input.dim(1), len = input.dim(2), d = input.dim(3);
    Tensor out({batch, len, d});
    for (std::size_t b = 0; b < batch; ++b) {
        const double* src = input.data() + (b * n + branch) * len * d;
        std::copy_n(src, len * d, out.data() + b * len * d);
    }
    return out;
}

Tensor concat_channels(const std::vector<Tensor>& parts)
{
    const std::size_t batch = parts.front().dim(0), len = parts.front().dim(1);
    std::size_t width = 0;
    for (const auto& p : parts) width += p.dim(2);
    Tensor out({batch, len, width});
    for (std::size_t r = 0; r < batch * len; ++r) {
        std::size_t offset = 0;
        for (const auto& p : parts) {
            const std::size_t w = p.dim(2);
            std::copy_n(p.data() + r * w, w, out.data() + r * width + offset);
            offset += w;
        }
    }
    return out;
}

Tensor DaqffNet::forward(const Tensor& input, Mode mode)
{
    if (input.rank() != 4 || input.dim(1) != config_.branches || input.dim(2) != config_.lookup ||
        input.dim(3) != config_.channels_per_branch) {
        throw std::invalid_argument("daqff: expected input B x " + std::to_string(config_.branches) + " x " +
                                    std::to_string(config_.lookup) + " x " +
                                    std::to_string(config_.channels_per_branch) + ", got " +
                                    nn::shape_string(input.shape()));
    }
    input_shape_ = input.shape();
    std::vector<Tensor> features;
    features.reserve(branches_.size());
    for (std::size_t i = 0; i < branches_.size(); ++i) features.push_back(branches_[i]->forward(branch_slice(input, i), mode));
    Tensor x = feature_dropout_.forward(concat_channels(features), mode);
    x = bilstm_.forward(x, mode);
    x = final_states_.forward(x, mode);
    x = state_dropout_.forward(x, mode);
    Tensor out = head_.forward(x, mode);
    if (!out.all_finite()) throw std::runtime_error("daqff: non-finite output");
    mark_forward(out);
    return out;
}

Tensor DaqffNet::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    Tensor g = head_.backward(grad_output);
    g = state_dropout_.backward(g);
    g = final_states_.backward(g);
    g = bilstm_.backward(g);
    g = feature_dropout_.backward(g);

    const std::size_t batch = input_shape_[0], n = input_shape_[1], len = input_shape_[2], d = input_shape_[3];
    const std::size_t p = config_.branch_projection_dim;
    Tensor grad_input(input_shape_);
    Tensor part({batch, len, p});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < batch * len; ++r) std::copy_n(g.data() + r * n * p + i * p, p, part.data() + r * p);
        Tensor gi = branches_[i]->backward(part);
        for (std::size_t b = 0; b < batch; ++b) std::copy_n(gi.data() + b * len * d, len * d, grad_input.data() + (b * n + i) * len * d);
    }
    return grad_input;
}

void DaqffNet::visit(const std::function<void(nn::Layer&)>& fn)
{
    fn(*this);
    for (auto& b : branches_) b->visit(fn);
    feature_dropout_.visit(fn);
    bilstm_.visit(fn);
    final_states_.visit(fn);
    state_dropout_.visit(fn);
    head_.visit(fn);
}

void DaqffNet::collect_parameters(std::string_view prefix, std::vector<nn::ParameterRef>& out)
{
    const std::string p(prefix);
    for (std::size_t i = 0; i < branches_.size(); ++i) branches_[i]->collect_parameters(p + "branch" + std::to_string(i) + ".", out);
    bilstm_.collect_parameters(p + "bilstm.", out);
    head_.collect_parameters(p + "head.", out);
}

} // namespace daqff::model
