#include "daqff/nn/layer.hpp"

#include <stdexcept>

namespace daqff::nn {

std::vector<ParameterRef> Layer::named_parameters()
{
    std::vector<ParameterRef> out;
    collect_parameters("", out);
    return out;
}

std::vector<Parameter*> Layer::parameters()
{
    std::vector<Parameter*> out;
    for (auto& ref : named_parameters()) out.push_back(ref.param);
    return out;
}

std::size_t Layer::parameter_count()
{
    std::size_t n = 0;
    for (auto* p : parameters()) n += p->value.size();
    return n;
}

void Layer::zero_grad()
{
    for (auto* p : parameters()) p->grad.fill(0.0);
}

void Layer::collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out)
{
    for (auto* p : own_parameters()) out.push_back({std::string(prefix) + p->name, p});
}

void Layer::require_cache(const Tensor& grad_output) const
{
    if (!has_cache_) throw std::logic_error(kind() + ": backward called without a forward cache");
    if (grad_output.shape() != cached_output_shape_) {
        throw std::invalid_argument(kind() + ": upstream gradient shape " + shape_string(grad_output.shape()) +
                                    " does not match forward output " + shape_string(cached_output_shape_));
    }
}

Sequential& Sequential::add(LayerPtr layer)
{
    layers_.push_back(std::move(layer));
    return *this;
}

Tensor Sequential::forward(const Tensor& input, Mode mode)
{
    Tensor x = input;
    for (auto& layer : layers_) x = layer->forward(x, mode);
    mark_forward(x);
    return x;
}

Tensor Sequential::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    Tensor g = grad_output;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

void Sequential::visit(const std::function<void(Layer&)>& fn)
{
    fn(*this);
    for (auto& layer : layers_) layer->visit(fn);
}

void Sequential::collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out)
{
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        layers_[i]->collect_parameters(std::string(prefix) + std::to_string(i) + "." + layers_[i]->kind() + ".", out);
    }
}

} // namespace daqff::nn
