#include "daqff/eval/metrics.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace daqff::eval {

namespace {

void check_pair(std::span<const double> pred, std::span<const double> truth, const char* what)
{
    if (pred.size() != truth.size()) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(pred.size()) + " vs " +
                                    std::to_string(truth.size()) + ")");
    }
    if (pred.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
}

} // namespace

double rmse(std::span<const double> pred, std::span<const double> truth)
{
    check_pair(pred, truth, "rmse");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = truth[i] - pred[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> truth)
{
    check_pair(pred, truth, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(truth[i] - pred[i]);
    return sum / static_cast<double>(pred.size());
}

std::string HorizonBucket::label() const
{
    return first == last ? "h" + std::to_string(first) : "h" + std::to_string(first) + "~h" + std::to_string(last);
}

HorizonBucket parse_bucket(std::string_view text)
{
    auto number = [&](std::string_view part) -> std::size_t {
        if (part.size() < 2 || part[0] != 'h') throw std::invalid_argument("bad horizon bucket '" + std::string(text) + "'");
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data() + 1, part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size() || v == 0)
            throw std::invalid_argument("bad horizon bucket '" + std::string(text) + "'");
        return v;
    };
    const auto tilde = text.find('~');
    HorizonBucket b;
    if (tilde == std::string_view::npos) {
        b.first = b.last = number(text);
    } else {
        b.first = number(text.substr(0, tilde));
        b.last = number(text.substr(tilde + 1));
    }
    if (b.first > b.last) throw std::invalid_argument("horizon bucket '" + std::string(text) + "' is reversed");
    return b;
}

std::vector<HorizonBucket> default_buckets(std::size_t horizon)
{
    if (horizon == 24) return {{1, 3}, {4, 6}, {7, 12}, {13, 24}};
    return {{1, horizon}};
}

const BucketMetric& MetricsReport::bucket(std::string_view label) const
{
    for (const auto& b : buckets)
        if (b.label == label) return b;
    throw std::invalid_argument("report has no bucket '" + std::string(label) + "'");
}

nlohmann::json MetricsReport::to_json() const
{
    nlohmann::json buckets_json = nlohmann::json::array();
    for (const auto& b : buckets) buckets_json.push_back({{"label", b.label}, {"rmse", b.rmse}, {"mae", b.mae}});
    return {{"model", model},
            {"horizon", horizon},
            {"n_eval", n_eval},
            {"rmse", rmse},
            {"mae", mae},
            {"buckets", buckets_json},
            {"provenance",
             {{"seed", provenance.seed}, {"config_digest", provenance.config_digest}, {"data_digest", provenance.data_digest}}}};
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j)
{
    MetricsReport r;
    r.model = j.at("model").get<std::string>();
    r.horizon = j.at("horizon").get<std::size_t>();
    r.n_eval = j.at("n_eval").get<std::size_t>();
    r.rmse = j.at("rmse").get<std::vector<double>>();
    r.mae = j.at("mae").get<std::vector<double>>();
    for (const auto& b : j.at("buckets"))
        r.buckets.push_back({b.at("label").get<std::string>(), b.at("rmse").get<double>(), b.at("mae").get<double>()});
    const auto& p = j.at("provenance");
    r.provenance = {p.at("seed").get<std::uint64_t>(), p.at("config_digest").get<std::string>(),
                    p.at("data_digest").get<std::string>()};
    return r;
}

MetricsReport horizon_metrics(const nn::Tensor& preds, const nn::Tensor& truths, const std::vector<HorizonBucket>& buckets)
{
    if (preds.shape() != truths.shape() || preds.rank() != 2) {
        throw std::invalid_argument("horizon_metrics: need equal N x H tensors, got " + nn::shape_string(preds.shape()) +
                                    " and " + nn::shape_string(truths.shape()));
    }
    const std::size_t n = preds.dim(0), h = preds.dim(1);
    MetricsReport r;
    r.horizon = h;
    r.n_eval = n;
    std::vector<double> p(n), t(n);
    for (std::size_t k = 0; k < h; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = preds[i * h + k];
            t[i] = truths[i * h + k];
        }
        r.rmse.push_back(rmse(p, t));
        r.mae.push_back(mae(p, t));
    }
    for (const auto& b : buckets) {
        if (b.first < 1 || b.last > h)
            throw std::invalid_argument("bucket " + b.label() + " exceeds horizon " + std::to_string(h));
        BucketMetric m{b.label(), 0.0, 0.0};
        for (std::size_t k = b.first; k <= b.last; ++k) {
            m.rmse += r.rmse[k - 1];
            m.mae += r.mae[k - 1];
        }
        const double count = static_cast<double>(b.last - b.first + 1);
        m.rmse /= count;
        m.mae /= count;
        r.buckets.push_back(m);
    }
    return r;
}

} // namespace daqff::eval
