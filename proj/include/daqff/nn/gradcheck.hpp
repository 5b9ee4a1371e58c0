#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "daqff/nn/layer.hpp"

namespace daqff::nn {

struct GroupError {
    std::string name;         // parameter name, or "input"
    double max_relative_error = 0.0;
    std::size_t checked = 0;
};

struct GradCheckReport {
    std::vector<GroupError> groups;
    double max_relative_error = 0.0;
    double tolerance = 0.0;
    /// Smallest |x| entering any ReLU during the reference forward.
    double min_relu_margin = 0.0;
    bool passed = false;
};

struct GradCheckOptions {
    double tolerance = 1e-4;
    double step = 1e-5;
    Mode mode = Mode::train;
    bool check_input = true;
};

/// Compares analytic gradients of loss = sum(outputs) against central
/// differences (f(x+h) - f(x-h)) / 2h for every parameter element and every
/// input element. Relative error is |a - n| / max(|a|, |n|, 1e-8).
///
/// The layer must evaluate deterministically (freeze dropout first);
/// otherwise std::logic_error is thrown. Parameter gradients are zeroed
/// before and after the check.
GradCheckReport gradient_check(Layer& layer, const Tensor& input, const GradCheckOptions& options = {});

inline double relative_error(double analytic, double numeric)
{
    const double a = analytic < 0 ? -analytic : analytic;
    const double n = numeric < 0 ? -numeric : numeric;
    double denom = a > n ? a : n;
    if (denom < 1e-8) denom = 1e-8;
    const double diff = analytic - numeric;
    return (diff < 0 ? -diff : diff) / denom;
}

} // namespace daqff::nn
