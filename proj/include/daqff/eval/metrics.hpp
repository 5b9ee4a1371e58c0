#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "daqff/nn/tensor.hpp"

namespace daqff::eval {

double rmse(std::span<const double> pred, std::span<const double> truth);
double mae(std::span<const double> pred, std::span<const double> truth);

/// Inclusive 1-based horizon range, written "h1~h3" (or "h1" for a single step).
struct HorizonBucket {
    std::size_t first = 1;
    std::size_t last = 1;
    std::string label() const;
    friend bool operator==(const HorizonBucket&, const HorizonBucket&) = default;
};

HorizonBucket parse_bucket(std::string_view text);
/// {h1~h3, h4~h6, h7~h12, h13~h24} for H = 24, otherwise the single bucket h1~hH.
std::vector<HorizonBucket> default_buckets(std::size_t horizon);

struct BucketMetric {
    std::string label;
    double rmse = 0.0;
    double mae = 0.0;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string data_digest;
};

struct MetricsReport {
    std::string model;
    std::size_t horizon = 0;
    std::size_t n_eval = 0;
    std::vector<double> rmse;   // per horizon, original units
    std::vector<double> mae;
    std::vector<BucketMetric> buckets;
    Provenance provenance;

    const BucketMetric& bucket(std::string_view label) const;
    nlohmann::json to_json() const;
    static MetricsReport from_json(const nlohmann::json& j);
};

/// Column-wise metrics over N x H tensors; a bucket value is the mean of its
/// member horizons' metrics. Throws if a bucket reaches past H.
MetricsReport horizon_metrics(const nn::Tensor& preds, const nn::Tensor& truths, const std::vector<HorizonBucket>& buckets);

} // namespace daqff::eval
