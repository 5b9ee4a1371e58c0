#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace daqff::nn {

/// Seeded generator shared by initialization, dropout and synthetic data.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard;
/// the derived distributions are computed here rather than through
/// <random>'s distributions, whose algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double normal();

    /// Uniform integer in [0, n), rejection sampled.
    std::uint64_t below(std::uint64_t n);

    /// Fisher-Yates, walking from the back.
    template <class T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace daqff::nn
