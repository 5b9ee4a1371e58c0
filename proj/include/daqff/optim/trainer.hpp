#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daqff/data/windows.hpp"
#include "daqff/nn/layer.hpp"

namespace daqff::optim {

struct TrainConfig {
    std::size_t batch_size = 32;
    std::size_t epochs = 100;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    /// Seeds the per-epoch shuffle only.
    std::uint64_t seed = 0;
    /// Global gradient-norm clip; 0 disables it.
    double clip_norm = 0.0;

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;       // 1-based
    double train_loss = 0.0;     // sample-weighted mean of batch losses
    std::optional<double> val_rmse;
};

/// {"epoch":1,"train_loss":...,"val_rmse":...}; val_rmse is null when absent.
std::string to_json_line(const EpochRecord& record);

/// Returns validation RMSE for the current model state; never alters training.
using Validator = std::function<std::optional<double>(nn::Layer&)>;
using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam on the MSE objective. Each epoch reshuffles the sample
/// order, keeps the final partial batch, and runs forward (train mode),
/// loss, backward and one optimizer step per batch.
std::vector<EpochRecord> fit(nn::Layer& model, const nn::Tensor& inputs, const nn::Tensor& targets,
                             const TrainConfig& config, const Validator& validate = {},
                             const EpochCallback& on_epoch = {});
std::vector<EpochRecord> fit(nn::Layer& model, const data::SupervisedWindows& windows, const TrainConfig& config,
                             const Validator& validate = {}, const EpochCallback& on_epoch = {});

/// Rows `indices` of a tensor along axis 0.
nn::Tensor gather_rows(const nn::Tensor& source, std::span<const std::size_t> indices);

/// Eval-mode forward in fixed-size chunks, concatenated in order.
nn::Tensor predict(nn::Layer& model, const nn::Tensor& inputs, std::size_t chunk = 256);

} // namespace daqff::optim
