#include "daqff/optim/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace daqff::optim {

Adam::Adam(std::vector<nn::Parameter*> params, AdamConfig config) : params_(std::move(params)), config_(config)
{
    if (!(config_.learning_rate > 0.0)) throw std::invalid_argument("adam: learning_rate must be > 0");
    if (!(config_.beta1 >= 0.0 && config_.beta1 < 1.0) || !(config_.beta2 >= 0.0 && config_.beta2 < 1.0))
        throw std::invalid_argument("adam: betas must lie in [0, 1)");
    for (const auto* p : params_) {
        m_.emplace_back(p->value.shape());
        v_.emplace_back(p->value.shape());
    }
}

void Adam::step()
{
    ++step_;
    const double b1 = config_.beta1, b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        nn::Parameter& p = *params_[k];
        if (p.grad.shape() != p.value.shape() || m_[k].shape() != p.value.shape())
            throw std::invalid_argument("adam: gradient shape mismatch for '" + p.name + "'");
        double* theta = p.value.data();
        double* g = p.grad.data();
        double* m = m_[k].data();
        double* v = v_[k].data();
        for (std::size_t i = 0, n = p.value.size(); i < n; ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            const double mhat = m[i] / c1;
            const double vhat = v[i] / c2;
            theta[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
            g[i] = 0.0;
        }
    }
}

double clip_grad_norm(const std::vector<nn::Parameter*>& params, double max_norm)
{
    double sq = 0.0;
    for (const auto* p : params)
        for (double g : p->grad.values()) sq += g * g;
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const double s = max_norm / norm;
        for (auto* p : params)
            for (double& g : p->grad.values()) g *= s;
    }
    return norm;
}

} // namespace daqff::optim
