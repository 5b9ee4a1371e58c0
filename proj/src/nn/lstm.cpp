#include "daqff/nn/lstm.hpp"

#include <algorithm>
#include <stdexcept>

#include "activations.hpp"
#include "daqff/nn/init.hpp"
#include "eigen_util.hpp"

namespace daqff::nn {

namespace {

using detail::sigmoid;

// Turns pre-activations (B x 4H, row stride `gate_stride`) into activations in
// place and advances the cell and hidden state.
void cell_forward(double* gates, std::size_t gate_stride, const double* prev_cell, double* cell, double* tanh_cell,
                  double* hidden, std::size_t batch, std::size_t h)
{
    for (std::size_t b = 0; b < batch; ++b) {
        double* g = gates + b * gate_stride;
        for (std::size_t j = 0; j < h; ++j) {
            const double i = sigmoid(g[j]);
            const double f = sigmoid(g[h + j]);
            const double o = sigmoid(g[2 * h + j]);
            const double c = std::tanh(g[3 * h + j]);
            g[j] = i;
            g[h + j] = f;
            g[2 * h + j] = o;
            g[3 * h + j] = c;
            const double s = f * prev_cell[b * h + j] + i * c;
            const double ts = std::tanh(s);
            cell[b * h + j] = s;
            tanh_cell[b * h + j] = ts;
            hidden[b * h + j] = o * ts;
        }
    }
}

// dh: B x H upstream on h'. ds_carry: in = gradient on s' from later steps,
// out = gradient on the previous cell. Writes pre-activation gradients.
void cell_backward(const double* gates, const double* prev_cell, const double* tanh_cell, const double* dh,
                   double* ds_carry, double* dgates, std::size_t dgate_stride, std::size_t batch, std::size_t h)
{
    for (std::size_t b = 0; b < batch; ++b) {
        const double* g = gates + b * 4 * h;
        double* dg = dgates + b * dgate_stride;
        for (std::size_t j = 0; j < h; ++j) {
            const double i = g[j], f = g[h + j], o = g[2 * h + j], c = g[3 * h + j];
            const double ts = tanh_cell[b * h + j];
            const double dhj = dh[b * h + j];
            const double ds = dhj * o * (1.0 - ts * ts) + ds_carry[b * h + j];
            const double d_o = dhj * ts;
            const double d_i = ds * c;
            const double d_c = ds * i;
            const double d_f = ds * prev_cell[b * h + j];
            ds_carry[b * h + j] = ds * f;
            dg[j] = d_i * i * (1.0 - i);
            dg[h + j] = d_f * f * (1.0 - f);
            dg[2 * h + j] = d_o * o * (1.0 - o);
            dg[3 * h + j] = d_c * (1.0 - c * c);
        }
    }
}

} // namespace

Lstm::Lstm(std::size_t input_dim, std::size_t hidden_dim, bool reversed)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), reversed_(reversed)
{
    if (input_dim == 0 || hidden_dim == 0) throw std::invalid_argument("lstm: dimensions must be >= 1");
    input_weights_ = Parameter("U", {4 * hidden_dim, input_dim});
    recurrent_weights_ = Parameter("W", {4 * hidden_dim, hidden_dim});
    bias_ = Parameter("b", {4 * hidden_dim});
}

void Lstm::initialize(Rng& rng)
{
    glorot_uniform(input_weights_.value, input_dim_, 4 * hidden_dim_, rng);
    glorot_uniform(recurrent_weights_.value, hidden_dim_, 4 * hidden_dim_, rng);
    bias_.value.fill(0.0);
    for (std::size_t j = 0; j < hidden_dim_; ++j) bias_.value[hidden_dim_ + j] = 1.0;
}

void Lstm::set_initial_state(LstmState state)
{
    if (state.hidden.rank() != 2 || state.cell.shape() != state.hidden.shape() || state.hidden.dim(1) != hidden_dim_) {
        throw std::invalid_argument("lstm: initial state must be two B x " + std::to_string(hidden_dim_) + " tensors");
    }
    initial_ = std::move(state);
}

LstmState Lstm::final_state() const
{
    if (hiddens_.empty()) throw std::logic_error("lstm: no forward has been run");
    const std::size_t steps = hiddens_.dim(0) - 1, batch = hiddens_.dim(1), h = hiddens_.dim(2);
    LstmState out{Tensor({batch, h}), Tensor({batch, h})};
    std::copy_n(hiddens_.data() + steps * batch * h, batch * h, out.hidden.data());
    std::copy_n(cells_.data() + steps * batch * h, batch * h, out.cell.data());
    return out;
}

Tensor Lstm::forward(const Tensor& input, Mode)
{
    require_rank(input, 3, kind().c_str());
    const std::size_t batch = input.dim(0), steps = input.dim(1), d = input.dim(2), h = hidden_dim_;
    if (d != input_dim_) {
        throw std::invalid_argument(kind() + ": input width " + std::to_string(d) + " != " + std::to_string(input_dim_));
    }
    if (initial_ && initial_->hidden.dim(0) != batch) {
        throw std::invalid_argument(kind() + ": initial state batch does not match input batch");
    }
    input_ = input;
    const auto rows = static_cast<Eigen::Index>(batch * steps);
    const auto g4 = static_cast<Eigen::Index>(4 * h);

    detail::RowMatrix projected = detail::as_matrix(input, rows, d) *
                                  detail::as_matrix(input_weights_.value, g4, d).transpose();
    projected.rowwise() += detail::as_row(bias_.value);

    gates_ = Tensor({steps, batch, 4 * h});
    cells_ = Tensor({steps + 1, batch, h});
    tanh_cells_ = Tensor({steps, batch, h});
    hiddens_ = Tensor({steps + 1, batch, h});
    if (initial_) {
        std::copy_n(initial_->hidden.data(), batch * h, hiddens_.data());
        std::copy_n(initial_->cell.data(), batch * h, cells_.data());
    }

    auto recurrent = detail::as_matrix(recurrent_weights_.value, g4, h);
    Tensor out({batch, steps, h});
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t t = reversed_ ? steps - 1 - s : s;
        double* gate = gates_.data() + s * batch * 4 * h;
        detail::MatrixMap a(gate, batch, g4);
        a = detail::ConstStridedMap(projected.data() + t * 4 * h, batch, g4, Eigen::OuterStride<>(steps * 4 * h));
        a.noalias() += detail::ConstMatrixMap(hiddens_.data() + s * batch * h, batch, h) * recurrent.transpose();
        cell_forward(gate, 4 * h, cells_.data() + s * batch * h, cells_.data() + (s + 1) * batch * h,
                     tanh_cells_.data() + s * batch * h, hiddens_.data() + (s + 1) * batch * h, batch, h);
        for (std::size_t b = 0; b < batch; ++b) {
            std::copy_n(hiddens_.data() + ((s + 1) * batch + b) * h, h, out.data() + (b * steps + t) * h);
        }
    }
    mark_forward(out);
    return out;
}

Tensor Lstm::backward(const Tensor& grad_output) { return backward_with_final_cell(grad_output, nullptr); }

Tensor Lstm::backward_with_final_cell(const Tensor& grad_output, const Tensor* grad_final_cell)
{
    require_cache(grad_output);
    const std::size_t batch = input_.dim(0), steps = input_.dim(1), d = input_dim_, h = hidden_dim_;
    const auto rows = static_cast<Eigen::Index>(batch * steps);
    const auto g4 = static_cast<Eigen::Index>(4 * h);

    detail::RowMatrix dgates(rows, g4);       // row b*L + t
    detail::RowMatrix prev_hidden(rows, h);   // matching rows
    Tensor dh_carry({batch, h});
    Tensor ds_carry({batch, h});
    if (grad_final_cell) {
        if (grad_final_cell->shape() != ds_carry.shape()) throw std::invalid_argument(kind() + ": final cell gradient shape");
        ds_carry = *grad_final_cell;
    }
    Tensor dh({batch, h});
    auto recurrent = detail::as_matrix(recurrent_weights_.value, g4, h);

    for (std::size_t s = steps; s-- > 0;) {
        const std::size_t t = reversed_ ? steps - 1 - s : s;
        for (std::size_t b = 0; b < batch; ++b) {
            const double* g = grad_output.data() + (b * steps + t) * h;
            const double* carry = dh_carry.data() + b * h;
            double* dst = dh.data() + b * h;
            for (std::size_t j = 0; j < h; ++j) dst[j] = g[j] + carry[j];
            std::copy_n(hiddens_.data() + (s * batch + b) * h, h, prev_hidden.data() + (b * steps + t) * h);
        }
        double* dg = dgates.data() + t * 4 * h;
        cell_backward(gates_.data() + s * batch * 4 * h, cells_.data() + s * batch * h,
                      tanh_cells_.data() + s * batch * h, dh.data(), ds_carry.data(), dg, steps * 4 * h, batch, h);
        detail::as_matrix(dh_carry, batch, h).noalias() =
            detail::ConstStridedMap(dg, batch, g4, Eigen::OuterStride<>(steps * 4 * h)) * recurrent;
    }

    auto x = detail::as_matrix(input_, rows, d);
    detail::as_matrix(input_weights_.grad, g4, d).noalias() += dgates.transpose() * x;
    detail::as_matrix(recurrent_weights_.grad, g4, h).noalias() += dgates.transpose() * prev_hidden;
    detail::as_row(bias_.grad) += dgates.colwise().sum();

    Tensor grad_input(input_.shape());
    detail::as_matrix(grad_input, rows, d).noalias() = dgates * detail::as_matrix(input_weights_.value, g4, d);
    initial_grad_ = {std::move(dh_carry), std::move(ds_carry)};
    return grad_input;
}

LstmStepResult lstm_step(const Tensor& x, const LstmState& prev, const Lstm& params)
{
    const std::size_t d = params.input_dim(), h = params.hidden_dim();
    const bool single = x.rank() == 1;
    const std::size_t batch = single ? 1 : x.dim(0);
    if ((single && x.dim(0) != d) || (!single && (x.rank() != 2 || x.dim(1) != d))) {
        throw std::invalid_argument("lstm_step: input shape " + shape_string(x.shape()) + " does not match D=" +
                                    std::to_string(d));
    }
    if (prev.hidden.size() != batch * h || prev.cell.size() != batch * h) {
        throw std::invalid_argument("lstm_step: previous state does not match H=" + std::to_string(h));
    }
    const auto g4 = static_cast<Eigen::Index>(4 * h);
    detail::RowMatrix a = detail::ConstMatrixMap(x.data(), batch, d) *
                              detail::as_matrix(params.input_weights().value, g4, d).transpose() +
                          detail::ConstMatrixMap(prev.hidden.data(), batch, h) *
                              detail::as_matrix(params.recurrent_weights().value, g4, h).transpose();
    a.rowwise() += detail::as_row(params.bias().value);

    const Shape state_shape = single ? Shape{h} : Shape{batch, h};
    LstmStepResult r{{Tensor(state_shape), Tensor(state_shape)}, Tensor(state_shape), Tensor(state_shape),
                     Tensor(state_shape), Tensor(state_shape)};
    Tensor tanh_cell(state_shape);
    cell_forward(a.data(), 4 * h, prev.cell.data(), r.state.cell.data(), tanh_cell.data(), r.state.hidden.data(), batch, h);
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t j = 0; j < h; ++j) {
            r.input_gate[b * h + j] = a(b, j);
            r.forget_gate[b * h + j] = a(b, h + j);
            r.output_gate[b * h + j] = a(b, 2 * h + j);
            r.candidate[b * h + j] = a(b, 3 * h + j);
        }
    }
    return r;
}

BiLstm::BiLstm(std::size_t input_dim, std::size_t hidden_dim)
    : forward_(input_dim, hidden_dim, false), backward_(input_dim, hidden_dim, true)
{
}

void BiLstm::initialize(Rng& rng)
{
    forward_.initialize(rng);
    backward_.initialize(rng);
}

Tensor BiLstm::forward(const Tensor& input, Mode mode)
{
    Tensor fwd = forward_.forward(input, mode);
    Tensor bwd = backward_.forward(input, mode);
    const std::size_t batch = fwd.dim(0), steps = fwd.dim(1), h = fwd.dim(2);
    Tensor out({batch, steps, 2 * h});
    for (std::size_t r = 0; r < batch * steps; ++r) {
        std::copy_n(fwd.data() + r * h, h, out.data() + r * 2 * h);
        std::copy_n(bwd.data() + r * h, h, out.data() + r * 2 * h + h);
    }
    mark_forward(out);
    return out;
}

Tensor BiLstm::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t batch = grad_output.dim(0), steps = grad_output.dim(1), h = grad_output.dim(2) / 2;
    Tensor gf({batch, steps, h});
    Tensor gb({batch, steps, h});
    for (std::size_t r = 0; r < batch * steps; ++r) {
        std::copy_n(grad_output.data() + r * 2 * h, h, gf.data() + r * h);
        std::copy_n(grad_output.data() + r * 2 * h + h, h, gb.data() + r * h);
    }
    Tensor dx = forward_.backward(gf);
    Tensor dxb = backward_.backward(gb);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dxb[i];
    return dx;
}

void BiLstm::visit(const std::function<void(Layer&)>& fn)
{
    fn(*this);
    forward_.visit(fn);
    backward_.visit(fn);
}

void BiLstm::collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out)
{
    forward_.collect_parameters(std::string(prefix) + "forward.", out);
    backward_.collect_parameters(std::string(prefix) + "backward.", out);
}

LstmCell::LstmCell(std::size_t input_dim, std::size_t hidden_dim) : lstm_(input_dim, hidden_dim) {}

Tensor LstmCell::forward(const Tensor& input, Mode mode)
{
    require_rank(input, 2, "lstm_cell");
    const std::size_t d = lstm_.input_dim(), h = lstm_.hidden_dim(), batch = input.dim(0);
    if (input.dim(1) != d + 2 * h) {
        throw std::invalid_argument("lstm_cell: input width must be D + 2H = " + std::to_string(d + 2 * h));
    }
    Tensor x({batch, 1, d});
    LstmState prev{Tensor({batch, h}), Tensor({batch, h})};
    for (std::size_t b = 0; b < batch; ++b) {
        const double* row = input.data() + b * (d + 2 * h);
        std::copy_n(row, d, x.data() + b * d);
        std::copy_n(row + d, h, prev.hidden.data() + b * h);
        std::copy_n(row + d + h, h, prev.cell.data() + b * h);
    }
    lstm_.set_initial_state(std::move(prev));
    Tensor hidden = lstm_.forward(x, mode);
    LstmState next = lstm_.final_state();
    Tensor out({batch, 2 * h});
    for (std::size_t b = 0; b < batch; ++b) {
        std::copy_n(hidden.data() + b * h, h, out.data() + b * 2 * h);
        std::copy_n(next.cell.data() + b * h, h, out.data() + b * 2 * h + h);
    }
    mark_forward(out);
    return out;
}

Tensor LstmCell::backward(const Tensor& grad_output)
{
    require_cache(grad_output);
    const std::size_t d = lstm_.input_dim(), h = lstm_.hidden_dim(), batch = grad_output.dim(0);
    Tensor gh({batch, 1, h});
    Tensor gs({batch, h});
    for (std::size_t b = 0; b < batch; ++b) {
        std::copy_n(grad_output.data() + b * 2 * h, h, gh.data() + b * h);
        std::copy_n(grad_output.data() + b * 2 * h + h, h, gs.data() + b * h);
    }
    Tensor dx = lstm_.backward_with_final_cell(gh, &gs);
    const LstmState& dinit = lstm_.initial_state_grad();
    Tensor grad({batch, d + 2 * h});
    for (std::size_t b = 0; b < batch; ++b) {
        double* row = grad.data() + b * (d + 2 * h);
        std::copy_n(dx.data() + b * d, d, row);
        std::copy_n(dinit.hidden.data() + b * h, h, row + d);
        std::copy_n(dinit.cell.data() + b * h, h, row + d + h);
    }
    return grad;
}

void LstmCell::collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out)
{
    lstm_.collect_parameters(prefix, out);
}

} // namespace daqff::nn
