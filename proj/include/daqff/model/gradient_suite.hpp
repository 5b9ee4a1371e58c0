#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "daqff/nn/gradcheck.hpp"

namespace daqff::model {

struct GradientCase {
    std::string layer;   // e.g. "conv1d", "bilstm", "daqff"
    std::string config;  // human-readable shape summary
    nn::GradCheckReport report;
};

struct LayerSummary {
    std::string layer;
    std::size_t cases = 0;
    double max_relative_error = 0.0;
    bool passed = true;
};

struct GradientSuiteResult {
    std::vector<GradientCase> cases;
    double tolerance = 0.0;

    bool passed() const;
    double max_relative_error() const;
    /// One entry per layer kind, in first-seen order.
    std::vector<LayerSummary> summary() const;
};

struct GradientSuiteOptions {
    std::size_t cases_per_layer = 20;
    std::uint64_t seed = 20240601;
    double tolerance = 1e-4;
    /// Also sweep the baseline-only layers (SimpleRnn, Gru).
    bool include_baseline_layers = true;
};

/// Random shapes and parameters per layer kind: conv1d (same and valid),
/// dense, relu (inputs kept >= 1e-3 from the kink), dropout (mask frozen),
/// lstm_step, lstm, lstm_reversed, bilstm, and optionally rnn and gru.
GradientSuiteResult run_layer_gradient_suite(const GradientSuiteOptions& options = {});

/// The full DAQFF graph at n=2, D=2, L=6, convs (3,3),(2,1), hidden 3, H=2,
/// train mode with both dropout masks frozen. Seeds are tried from `seed`
/// upward until every ReLU input clears 1e-3, so no probe straddles a kink.
GradientCase run_daqff_gradient_check(std::uint64_t seed = 11, double tolerance = 1e-4);

} // namespace daqff::model
