#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tspd {

/// Seeded generator with platform-independent draws.
///
/// std::*_distribution output differs between standard libraries; these
/// helpers only use the raw 64-bit engine so runs are reproducible anywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection sampling removes modulo bias.
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    int index(std::size_t size) { return static_cast<int>(below(static_cast<std::uint64_t>(size))); }

    /// Uniform integer in [lo, hi].
    int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace tspd
