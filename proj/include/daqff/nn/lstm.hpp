#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "daqff/nn/layer.hpp"
#include "daqff/nn/rng.hpp"

namespace daqff::nn {

/// Gate blocks in stacked LSTM parameters, in row-block order.
enum class Gate : std::size_t { input = 0, forget = 1, output = 2, candidate = 3 };

/// Hidden h and memory cell s. Either both H (one sample) or both B x H.
struct LstmState {
    Tensor hidden;
    Tensor cell;
};

struct LstmStepResult {
    LstmState state;
    Tensor input_gate;
    Tensor forget_gate;
    Tensor output_gate;
    Tensor candidate;
};

/// Unidirectional LSTM over B x L x D, returning every hidden state (B x L x H).
///
///   i = sig(U_i x + W_i h + b_i)   f = sig(U_f x + W_f h + b_f)
///   o = sig(U_o x + W_o h + b_o)   g = tanh(U_c x + W_c h + b_c)
///   s' = f*s + i*g                 h' = o*tanh(s')
///
/// Parameters are stacked by gate: U is 4H x D, W is 4H x H, b is 4H, with
/// row blocks in Gate order. A reversed LSTM consumes t = L..1 and writes the
/// state produced after reading x_t at output position t.
class Lstm : public Layer {
public:
    Lstm(std::size_t input_dim, std::size_t hidden_dim, bool reversed = false);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return reversed_ ? "lstm_reversed" : "lstm"; }

    /// Backward with an extra upstream gradient on the final memory cell (B x H).
    Tensor backward_with_final_cell(const Tensor& grad_output, const Tensor* grad_final_cell);

    /// Glorot for U (fan D, 4H) and W (fan H, 4H); biases 0 except the forget block at 1.
    void initialize(Rng& rng);

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t hidden_dim() const noexcept { return hidden_dim_; }
    bool reversed() const noexcept { return reversed_; }

    Parameter& input_weights() noexcept { return input_weights_; }
    Parameter& recurrent_weights() noexcept { return recurrent_weights_; }
    Parameter& bias() noexcept { return bias_; }
    const Parameter& input_weights() const noexcept { return input_weights_; }
    const Parameter& recurrent_weights() const noexcept { return recurrent_weights_; }
    const Parameter& bias() const noexcept { return bias_; }

    /// Initial state for subsequent forwards (B x H each). Zero when unset.
    void set_initial_state(LstmState state);
    void clear_initial_state() { initial_.reset(); }
    /// Gradient with respect to the initial state from the last backward.
    const LstmState& initial_state_grad() const noexcept { return initial_grad_; }
    /// State after the last processed step of the last forward.
    LstmState final_state() const;
    /// Activated gates of the last forward, L x B x 4H in processing order.
    const Tensor& cached_gates() const noexcept { return gates_; }

protected:
    std::vector<Parameter*> own_parameters() override { return {&input_weights_, &recurrent_weights_, &bias_}; }

private:
    std::size_t input_dim_;
    std::size_t hidden_dim_;
    bool reversed_;
    Parameter input_weights_;
    Parameter recurrent_weights_;
    Parameter bias_;

    std::optional<LstmState> initial_;
    LstmState initial_grad_;

    Tensor input_;
    Tensor gates_;     // L x B x 4H
    Tensor cells_;     // (L+1) x B x H, index 0 is the initial cell
    Tensor tanh_cells_;// L x B x H
    Tensor hiddens_;   // (L+1) x B x H
};

/// One LSTM step on a single sample (x: D) or a batch (x: B x D).
LstmStepResult lstm_step(const Tensor& x, const LstmState& prev, const Lstm& params);

/// Bidirectional LSTM: B x L x D -> B x L x 2H, position t holding
/// [forward h_t ; backward h_t]. The two directions have independent parameters.
class BiLstm : public Layer {
public:
    BiLstm(std::size_t input_dim, std::size_t hidden_dim);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "bilstm"; }
    void visit(const std::function<void(Layer&)>& fn) override;
    void collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out) override;

    /// Forward direction first, then backward.
    void initialize(Rng& rng);

    Lstm& forward_lstm() noexcept { return forward_; }
    Lstm& backward_lstm() noexcept { return backward_; }
    std::size_t hidden_dim() const noexcept { return forward_.hidden_dim(); }

private:
    Lstm forward_;
    Lstm backward_;
};

/// A single LSTM step packaged as a layer for gradient checking:
/// input B x (D + 2H) = [x ; h ; s], output B x 2H = [h' ; s'].
class LstmCell : public Layer {
public:
    LstmCell(std::size_t input_dim, std::size_t hidden_dim);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor backward(const Tensor& grad_output) override;
    std::string kind() const override { return "lstm_cell"; }
    void collect_parameters(std::string_view prefix, std::vector<ParameterRef>& out) override;

    Lstm& lstm() noexcept { return lstm_; }

private:
    Lstm lstm_;
};

} // namespace daqff::nn
