#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "daqff/nn/tensor.hpp"

namespace daqff::nn {

enum class Mode { train, eval };

/// A trainable tensor and its gradient accumulator (same shape).
struct Parameter {
    Parameter() = default;
    Parameter(std::string name, Shape shape) : name(std::move(name)), value(shape), grad(std::move(shape)) {}

    std::string name;
    Tensor value;
    Tensor grad;
};

struct ParameterRef {
    std::string name;
    Parameter* param;
};

/// Base of every differentiable block.
///
/// forward() caches whatever backward() needs; backward() consumes the
/// upstream gradient, accumulates into each Parameter::grad and returns the
/// gradient with respect to the forward input.
class Layer {
public:
    virtual ~Layer() = default;

    virtual Tensor forward(const Tensor& input, Mode mode) = 0;
    virtual Tensor backward(const Tensor& grad_output) = 0;
    virtual std::string kind() const = 0;

    /// Parameters with fully qualified names ("branch0.conv1.weight").
    std::vector<ParameterRef> named_parameters();
    std::vector<Parameter*> parameters();
    std::size_t parameter_count();
    void zero_grad();

    /// Visits this layer and, for composites, every nested layer.
    virtual void visit(const std::function<void(Layer&)>& fn) { fn(*this); }

    virtual void collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out);

protected:
    virtual std::vector<Parameter*> own_parameters() { return {}; }

    void mark_forward(const Tensor& output) { cached_output_shape_ = output.shape(); has_cache_ = true; }
    void require_cache(const Tensor& grad_output) const;

private:
    Shape cached_output_shape_;
    bool has_cache_ = false;
};

using LayerPtr = std::unique_ptr<Layer>;

/// Layers applied in order.
class Sequential : public Layer {
public:
    Sequential() = default;

    Sequential& add(LayerPtr layer);
    template <class L, class... Args>
    L& emplace(Args&&... args)
    {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L& ref = *layer;
        add(std::move(layer));
        return ref;
    }

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "sequential"; }
    void visit(const std::function<void(Layer&)>& fn) override;
    void collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out) override;

    std::size_t size() const noexcept { return layers_.size(); }
    Layer& operator[](std::size_t i) { return *layers_.at(i); }

private:
    std::vector<LayerPtr> layers_;
};

} // namespace daqff::nn
