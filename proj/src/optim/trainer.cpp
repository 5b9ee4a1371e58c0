#include "daqff/optim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "daqff/nn/rng.hpp"
#include "daqff/optim/adam.hpp"
#include "daqff/optim/loss.hpp"

namespace daqff::optim {

void TrainConfig::validate() const
{
    if (batch_size < 1) throw std::invalid_argument("train.batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train.learning_rate must be > 0");
    if (!(clip_norm >= 0.0)) throw std::invalid_argument("train.clip_norm must be >= 0");
}

std::string to_json_line(const EpochRecord& r)
{
    char buf[160];
    if (r.val_rmse) {
        std::snprintf(buf, sizeof buf, "{\"epoch\":%zu,\"train_loss\":%.17g,\"val_rmse\":%.17g}", r.epoch, r.train_loss,
                      *r.val_rmse);
    } else {
        std::snprintf(buf, sizeof buf, "{\"epoch\":%zu,\"train_loss\":%.17g,\"val_rmse\":null}", r.epoch, r.train_loss);
    }
    return buf;
}

nn::Tensor gather_rows(const nn::Tensor& source, std::span<const std::size_t> indices)
{
    nn::Shape shape = source.shape();
    const std::size_t row = source.size() / shape[0];
    shape[0] = indices.size();
    nn::Tensor out(shape);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= source.dim(0)) throw std::out_of_range("gather_rows: index out of range");
        std::copy_n(source.data() + indices[k] * row, row, out.data() + k * row);
    }
    return out;
}

nn::Tensor predict(nn::Layer& model, const nn::Tensor& inputs, std::size_t chunk)
{
    const std::size_t n = inputs.dim(0);
    if (n == 0) throw std::invalid_argument("predict: no inputs");
    std::vector<std::size_t> idx;
    nn::Tensor out;
    for (std::size_t start = 0; start < n; start += chunk) {
        const std::size_t stop = std::min(n, start + chunk);
        idx.resize(stop - start);
        std::iota(idx.begin(), idx.end(), start);
        nn::Tensor part = model.forward(gather_rows(inputs, idx), nn::Mode::eval);
        if (out.empty()) {
            nn::Shape shape = part.shape();
            shape[0] = n;
            out = nn::Tensor(shape);
        }
        std::copy_n(part.data(), part.size(), out.data() + start * (out.size() / n));
    }
    return out;
}

std::vector<EpochRecord> fit(nn::Layer& model, const nn::Tensor& inputs, const nn::Tensor& targets,
                             const TrainConfig& config, const Validator& validate, const EpochCallback& on_epoch)
{
    config.validate();
    if (inputs.empty() || inputs.dim(0) == 0) throw std::invalid_argument("fit: empty training set");
    if (targets.rank() != 2 || targets.dim(0) != inputs.dim(0))
        throw std::invalid_argument("fit: targets must be N x H with N matching the inputs");
    const std::size_t n = inputs.dim(0);

    auto params = model.parameters();
    model.zero_grad();
    Adam adam(params, AdamConfig{config.learning_rate, config.beta1, config.beta2, config.epsilon});
    nn::Rng shuffle_rng(config.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<EpochRecord> log;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double weighted = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size, ++batch_index) {
            const std::span<const std::size_t> idx(order.data() + start, std::min(config.batch_size, n - start));
            const nn::Tensor x = gather_rows(inputs, idx);
            const nn::Tensor y = gather_rows(targets, idx);
            const nn::Tensor pred = model.forward(x, nn::Mode::train);
            const LossResult loss = mse_loss(pred, y);
            if (!std::isfinite(loss.loss)) {
                throw std::runtime_error("fit: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                         std::to_string(batch_index + 1));
            }
            model.backward(loss.grad);
            if (config.clip_norm > 0.0) clip_grad_norm(params, config.clip_norm);
            adam.step();
            weighted += loss.loss * static_cast<double>(idx.size());
        }
        EpochRecord record{epoch, weighted / static_cast<double>(n), std::nullopt};
        if (validate) record.val_rmse = validate(model);
        if (on_epoch) on_epoch(record);
        log.push_back(record);
    }
    return log;
}

std::vector<EpochRecord> fit(nn::Layer& model, const data::SupervisedWindows& windows, const TrainConfig& config,
                             const Validator& validate, const EpochCallback& on_epoch)
{
    return fit(model, windows.inputs, windows.targets, config, validate, on_epoch);
}

} // namespace daqff::optim
