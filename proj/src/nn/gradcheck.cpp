#include "daqff/nn/gradcheck.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "daqff/nn/elementwise.hpp"

namespace daqff::nn {

namespace {

double sum_of(const Tensor& t)
{
    double s = 0.0;
    for (double v : t.values()) s += v;
    return s;
}

double relu_margin(Layer& layer)
{
    double margin = std::numeric_limits<double>::infinity();
    layer.visit([&](Layer& l) {
        if (auto* r = dynamic_cast<ReLU*>(&l)) margin = std::min(margin, r->min_abs_input());
    });
    return margin;
}

} // namespace

GradCheckReport gradient_check(Layer& layer, const Tensor& input, const GradCheckOptions& options)
{
    const Tensor reference = layer.forward(input, options.mode);
    const double margin = relu_margin(layer);
    if (layer.forward(input, options.mode) != reference) {
        throw std::logic_error(layer.kind() + ": non-deterministic forward; freeze dropout before gradient_check");
    }

    layer.zero_grad();
    layer.forward(input, options.mode);
    const Tensor analytic_input = layer.backward(Tensor(reference.shape(), 1.0));

    GradCheckReport report;
    report.tolerance = options.tolerance;
    report.min_relu_margin = margin;
    const double h = options.step;

    auto probe = [&](double& slot) {
        const double saved = slot;
        slot = saved + h;
        const double plus = sum_of(layer.forward(input, options.mode));
        slot = saved - h;
        const double minus = sum_of(layer.forward(input, options.mode));
        slot = saved;
        return (plus - minus) / (2.0 * h);
    };

    for (auto& ref : layer.named_parameters()) {
        GroupError group{ref.name, 0.0, 0};
        Tensor& value = ref.param->value;
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double numeric = probe(value[i]);
            group.max_relative_error = std::max(group.max_relative_error, relative_error(ref.param->grad[i], numeric));
            ++group.checked;
        }
        report.groups.push_back(group);
    }
    if (options.check_input) {
        Tensor probe_input = input;
        GroupError group{"input", 0.0, 0};
        for (std::size_t i = 0; i < probe_input.size(); ++i) {
            const double saved = probe_input[i];
            probe_input[i] = saved + h;
            const double plus = sum_of(layer.forward(probe_input, options.mode));
            probe_input[i] = saved - h;
            const double minus = sum_of(layer.forward(probe_input, options.mode));
            probe_input[i] = saved;
            const double numeric = (plus - minus) / (2.0 * h);
            group.max_relative_error = std::max(group.max_relative_error, relative_error(analytic_input[i], numeric));
            ++group.checked;
        }
        report.groups.push_back(group);
    }
    for (const auto& g : report.groups) report.max_relative_error = std::max(report.max_relative_error, g.max_relative_error);
    report.passed = report.max_relative_error < options.tolerance;
    layer.zero_grad();
    return report;
}

} // namespace daqff::nn
