#pragma once

// Independent reference implementations. Plain loops, no shared code with
// the library beyond the Tensor container.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "daqff/nn/rng.hpp"
#include "daqff/nn/tensor.hpp"

namespace oracle {

using daqff::nn::Tensor;

/// Naive sliding dot product. x: B x C x T, w: F x C x K, b: F.
/// same: left pad (K-1)/2, right pad the rest.
inline Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b, bool same)
{
    const std::size_t B = x.dim(0), C = x.dim(1), T = x.dim(2), F = w.dim(0), K = w.dim(2);
    const std::size_t left = same ? (K - 1) / 2 : 0;
    const std::size_t out_len = same ? T : T - K + 1;
    Tensor y({B, F, out_len});
    for (std::size_t n = 0; n < B; ++n)
        for (std::size_t f = 0; f < F; ++f)
            for (std::size_t t = 0; t < out_len; ++t) {
                double acc = b[f];
                for (std::size_t c = 0; c < C; ++c)
                    for (std::size_t k = 0; k < K; ++k) {
                        const long src = static_cast<long>(t + k) - static_cast<long>(left);
                        if (src < 0 || src >= static_cast<long>(T)) continue;
                        acc += w.at({f, c, k}) * x.at({n, c, static_cast<std::size_t>(src)});
                    }
                y.at({n, f, t}) = acc;
            }
    return y;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Separate per-gate matrices, the textbook layout.
struct LstmWeights {
    // [gate][row][col], gates i, f, o, c
    std::vector<std::vector<std::vector<double>>> U, W;
    std::vector<std::vector<double>> b;
};

/// Splits the library's stacked (4H x D, 4H x H, 4H) layout into per-gate blocks.
inline LstmWeights split(const Tensor& U, const Tensor& W, const Tensor& b, std::size_t H)
{
    const std::size_t D = U.dim(1);
    LstmWeights out;
    out.U.assign(4, std::vector<std::vector<double>>(H, std::vector<double>(D)));
    out.W.assign(4, std::vector<std::vector<double>>(H, std::vector<double>(H)));
    out.b.assign(4, std::vector<double>(H));
    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t r = 0; r < H; ++r) {
            for (std::size_t c = 0; c < D; ++c) out.U[g][r][c] = U[(g * H + r) * D + c];
            for (std::size_t c = 0; c < H; ++c) out.W[g][r][c] = W[(g * H + r) * H + c];
            out.b[g][r] = b[g * H + r];
        }
    return out;
}

struct StepOut {
    std::vector<double> h, s, i, f, o, g;
};

inline StepOut lstm_step(const LstmWeights& p, const std::vector<double>& x, const std::vector<double>& h,
                         const std::vector<double>& s)
{
    const std::size_t H = h.size();
    StepOut out;
    std::vector<double>* gates[4] = {&out.i, &out.f, &out.o, &out.g};
    for (std::size_t g = 0; g < 4; ++g) {
        gates[g]->resize(H);
        for (std::size_t r = 0; r < H; ++r) {
            double z = p.b[g][r];
            for (std::size_t c = 0; c < x.size(); ++c) z += p.U[g][r][c] * x[c];
            for (std::size_t c = 0; c < H; ++c) z += p.W[g][r][c] * h[c];
            (*gates[g])[r] = g == 3 ? std::tanh(z) : sigmoid(z);
        }
    }
    out.s.resize(H);
    out.h.resize(H);
    for (std::size_t r = 0; r < H; ++r) {
        out.s[r] = out.f[r] * s[r] + out.i[r] * out.g[r];
        out.h[r] = out.o[r] * std::tanh(out.s[r]);
    }
    return out;
}

/// Unrolled left-to-right from zero state; x: B x L x D -> B x L x H.
inline Tensor lstm_sequence(const LstmWeights& p, const Tensor& x, std::size_t H, bool reversed = false)
{
    const std::size_t B = x.dim(0), L = x.dim(1), D = x.dim(2);
    Tensor y({B, L, H});
    for (std::size_t n = 0; n < B; ++n) {
        std::vector<double> h(H, 0.0), s(H, 0.0);
        for (std::size_t k = 0; k < L; ++k) {
            const std::size_t t = reversed ? L - 1 - k : k;
            std::vector<double> xt(D);
            for (std::size_t d = 0; d < D; ++d) xt[d] = x.at({n, t, d});
            StepOut o = lstm_step(p, xt, h, s);
            h = o.h;
            s = o.s;
            for (std::size_t r = 0; r < H; ++r) y.at({n, t, r}) = h[r];
        }
    }
    return y;
}

inline double rmse(const std::vector<double>& p, const std::vector<double>& t)
{
    long double sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += (long double)(t[i] - p[i]) * (t[i] - p[i]);
    return std::sqrt(static_cast<double>(sum / p.size()));
}

inline double mae(const std::vector<double>& p, const std::vector<double>& t)
{
    long double sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::fabs((long double)t[i] - p[i]);
    return static_cast<double>(sum / p.size());
}

inline Tensor random_tensor(daqff::nn::Rng& rng, daqff::nn::Shape shape, double scale = 1.0)
{
    Tensor t(std::move(shape));
    for (double& v : t.values()) v = rng.uniform(-scale, scale);
    return t;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
    return worst;
}

} // namespace oracle
