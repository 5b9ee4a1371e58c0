#include "daqff/nn/recurrent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "activations.hpp"
#include "daqff/nn/init.hpp"
#include "eigen_util.hpp"

namespace daqff::nn {

using detail::sigmoid;

SimpleRnn::SimpleRnn(std::size_t input_dim, std::size_t hidden_dim) : input_dim_(input_dim), hidden_dim_(hidden_dim)
{
    if (input_dim == 0 || hidden_dim == 0) throw std::invalid_argument("rnn: dimensions must be >= 1");
    input_weights_ = Parameter("U", {hidden_dim, input_dim});
    recurrent_weights_ = Parameter("W", {hidden_dim, hidden_dim});
    bias_ = Parameter("b", {hidden_dim});
}

void SimpleRnn::initialize(Rng& rng)
{
    glorot_uniform(input_weights_.value, input_dim_, hidden_dim_, rng);
    glorot_uniform(recurrent_weights_.value, hidden_dim_, hidden_dim_, rng);
    bias_.value.fill(0.0);
}

Tensor SimpleRnn::forward(const Tensor& input, Mode)
{
    require_rank(input, 3, "rnn");
    const std::size_t batch = input.dim(0), steps = input.dim(1), d = input.dim(2), h = hidden_dim_;
    if (d != input_dim_) throw std::invalid_argument("rnn: input width " + std::to_string(d) + " != " + std::to_string(input_dim_));
    input_ = input;
    const auto rows = static_cast<Eigen::Index>(batch * steps);
    const auto hh = static_cast<Eigen::Index>(h);
    detail::RowMatrix projected = detail::as_matrix(input, rows, d) * detail::as_matrix(input_weights_.value, hh, d).transpose();
    projected.rowwise() += detail::as_row(bias_.value);

    hiddens_ = Tensor({steps + 1, batch, h});
    auto w = detail::as_matrix(recurrent_weights_.value, hh, hh);
    Tensor out({batch, steps, h});
    for (std::size_t t = 0; t < steps; ++t) {
        detail::MatrixMap next(hiddens_.data() + (t + 1) * batch * h, batch, hh);
        next = detail::ConstStridedMap(projected.data() + t * h, batch, hh, Eigen::OuterStride<>(steps * h));
        next.noalias() += detail::ConstMatrixMap(hiddens_.data() + t * batch * h, batch, hh) * w.transpose();
        next = next.array().tanh();
        for (std::size_t b = 0; b < batch; ++b) std::copy_n(&next(b, 0), h, out.data() + (b * steps + t) * h);
    }
    mark_forward(out);
    return out;
}

Tensor SimpleRnn::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = input_.dim(0), steps = input_.dim(1), d = input_dim_, h = hidden_dim_;
    const auto rows = static_cast<Eigen::Index>(batch * steps);
    const auto hh = static_cast<Eigen::Index>(h);
    detail::RowMatrix da(rows, hh);
    detail::RowMatrix prev(rows, hh);
    detail::RowMatrix carry = detail::RowMatrix::Zero(batch, hh);
    auto w = detail::as_matrix(recurrent_weights_.value, hh, hh);
    for (std::size_t t = steps; t-- > 0;) {
        for (std::size_t b = 0; b < batch; ++b) {
            const double* g = grad_output.data() + (b * steps + t) * h;
            const double* hn = hiddens_.data() + ((t + 1) * batch + b) * h;
            double* dst = da.data() + (b * steps + t) * h;
            for (std::size_t j = 0; j < h; ++j) dst[j] = (g[j] + carry(b, j)) * (1.0 - hn[j] * hn[j]);
            std::copy_n(hiddens_.data() + (t * batch + b) * h, h, prev.data() + (b * steps + t) * h);
        }
        carry.noalias() = detail::StridedMap(da.data() + t * h, batch, hh, Eigen::OuterStride<>(steps * h)) * w;
    }
    detail::as_matrix(input_weights_.grad, hh, d).noalias() += da.transpose() * detail::as_matrix(input_, rows, d);
    detail::as_matrix(recurrent_weights_.grad, hh, hh).noalias() += da.transpose() * prev;
    detail::as_row(bias_.grad) += da.colwise().sum();
    Tensor grad_input(input_.shape());
    detail::as_matrix(grad_input, rows, d).noalias() = da * detail::as_matrix(input_weights_.value, hh, d);
    return grad_input;
}

Gru::Gru(std::size_t input_dim, std::size_t hidden_dim) : input_dim_(input_dim), hidden_dim_(hidden_dim)
{
    if (input_dim == 0 || hidden_dim == 0) throw std::invalid_argument("gru: dimensions must be >= 1");
    input_weights_ = Parameter("U", {3 * hidden_dim, input_dim});
    recurrent_weights_ = Parameter("W", {3 * hidden_dim, hidden_dim});
    bias_ = Parameter("b", {3 * hidden_dim});
}

void Gru::initialize(Rng& rng)
{
    glorot_uniform(input_weights_.value, input_dim_, 3 * hidden_dim_, rng);
    glorot_uniform(recurrent_weights_.value, hidden_dim_, 3 * hidden_dim_, rng);
    bias_.value.fill(0.0);
}

Tensor Gru::forward(const Tensor& input, Mode)
{
    require_rank(input, 3, "gru");
    const std::size_t batch = input.dim(0), steps = input.dim(1), d = input.dim(2), h = hidden_dim_;
    if (d != input_dim_) throw std::invalid_argument("gru: input width " + std::to_string(d) + " != " + std::to_string(input_dim_));
    input_ = input;
    const auto rows = static_cast<Eigen::Index>(batch * steps);
    const auto hh = static_cast<Eigen::Index>(h);
    detail::RowMatrix projected = detail::as_matrix(input, rows, d) *
                                  detail::as_matrix(input_weights_.value, 3 * hh, d).transpose();
    projected.rowwise() += detail::as_row(bias_.value);

    gates_ = Tensor({steps, batch, 3 * h});
    hiddens_ = Tensor({steps + 1, batch, h});
    const double* w = recurrent_weights_.value.data();
    auto w_zr = detail::ConstMatrixMap(w, 2 * hh, hh);
    auto w_n = detail::ConstMatrixMap(w + 2 * h * h, hh, hh);
    detail::RowMatrix zr(batch, 2 * hh);
    detail::RowMatrix reset_hidden(batch, hh);
    detail::RowMatrix cand(batch, hh);
    Tensor out({batch, steps, h});
    for (std::size_t t = 0; t < steps; ++t) {
        detail::ConstMatrixMap prev(hiddens_.data() + t * batch * h, batch, hh);
        zr.noalias() = prev * w_zr.transpose();
        double* g = gates_.data() + t * batch * 3 * h;
        for (std::size_t b = 0; b < batch; ++b) {
            const double* p = projected.data() + (b * steps + t) * 3 * h;
            for (std::size_t j = 0; j < h; ++j) {
                const double z = sigmoid(p[j] + zr(b, j));
                const double r = sigmoid(p[h + j] + zr(b, h + j));
                g[b * 3 * h + j] = z;
                g[b * 3 * h + h + j] = r;
                reset_hidden(b, j) = r * prev(b, j);
            }
        }
        cand.noalias() = reset_hidden * w_n.transpose();
        double* next = hiddens_.data() + (t + 1) * batch * h;
        for (std::size_t b = 0; b < batch; ++b) {
            const double* p = projected.data() + (b * steps + t) * 3 * h;
            for (std::size_t j = 0; j < h; ++j) {
                const double n = std::tanh(p[2 * h + j] + cand(b, j));
                const double z = g[b * 3 * h + j];
                g[b * 3 * h + 2 * h + j] = n;
                next[b * h + j] = (1.0 - z) * n + z * prev(b, j);
            }
            std::copy_n(next + b * h, h, out.data() + (b * steps + t) * h);
        }
    }
    mark_forward(out);
    return out;
}

Tensor Gru::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = input_.dim(0), steps = input_.dim(1), d = input_dim_, h = hidden_dim_;
    const auto rows = static_cast<Eigen::Index>(batch * steps);
    const auto hh = static_cast<Eigen::Index>(h);
    const double* w = recurrent_weights_.value.data();
    auto w_zr = detail::ConstMatrixMap(w, 2 * hh, hh);
    auto w_n = detail::ConstMatrixMap(w + 2 * h * h, hh, hh);

    detail::RowMatrix da(rows, 3 * hh);          // pre-activation grads, row b*L + t
    detail::RowMatrix prev_all(rows, hh);        // h_{t-1}
    detail::RowMatrix reset_all(rows, hh);       // r * h_{t-1}
    detail::RowMatrix carry = detail::RowMatrix::Zero(batch, hh);
    detail::RowMatrix dn_pre(batch, hh);
    detail::RowMatrix dzr_pre(batch, 2 * hh);
    detail::RowMatrix d_reset(batch, hh);

    for (std::size_t t = steps; t-- > 0;) {
        const double* g = gates_.data() + t * batch * 3 * h;
        const double* prev = hiddens_.data() + t * batch * h;
        detail::RowMatrix dprev(batch, hh);
        for (std::size_t b = 0; b < batch; ++b) {
            const double* up = grad_output.data() + (b * steps + t) * h;
            for (std::size_t j = 0; j < h; ++j) {
                const double z = g[b * 3 * h + j], n = g[b * 3 * h + 2 * h + j];
                const double dh = up[j] + carry(b, j);
                const double hp = prev[b * h + j];
                dn_pre(b, j) = dh * (1.0 - z) * (1.0 - n * n);
                dzr_pre(b, j) = dh * (hp - n) * z * (1.0 - z);
                dprev(b, j) = dh * z;
            }
        }
        d_reset.noalias() = dn_pre * w_n;
        for (std::size_t b = 0; b < batch; ++b) {
            const std::size_t row = b * steps + t;
            for (std::size_t j = 0; j < h; ++j) {
                const double r = g[b * 3 * h + h + j];
                const double hp = prev[b * h + j];
                dzr_pre(b, h + j) = d_reset(b, j) * hp * r * (1.0 - r);
                dprev(b, j) += d_reset(b, j) * r;
                reset_all(row, j) = r * hp;
                prev_all(row, j) = hp;
                da(row, j) = dzr_pre(b, j);
                da(row, h + j) = dzr_pre(b, h + j);
                da(row, 2 * h + j) = dn_pre(b, j);
            }
        }
        dprev.noalias() += dzr_pre * w_zr;
        carry = dprev;
    }
    detail::as_matrix(input_weights_.grad, 3 * hh, d).noalias() += da.transpose() * detail::as_matrix(input_, rows, d);
    double* wg = recurrent_weights_.grad.data();
    detail::MatrixMap(wg, 2 * hh, hh).noalias() += da.leftCols(2 * hh).transpose() * prev_all;
    detail::MatrixMap(wg + 2 * h * h, hh, hh).noalias() += da.rightCols(hh).transpose() * reset_all;
    detail::as_row(bias_.grad) += da.colwise().sum();
    Tensor grad_input(input_.shape());
    detail::as_matrix(grad_input, rows, d).noalias() = da * detail::as_matrix(input_weights_.value, 3 * hh, d);
    return grad_input;
}

} // namespace daqff::nn
