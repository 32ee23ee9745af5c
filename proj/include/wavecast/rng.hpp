#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace wavecast {

// Deterministic random source. std::mt19937_64 produces an identical stream
// on every platform, but the std distributions do not — their algorithms are
// implementation-defined. Byte-identical reports need every derived draw
// pinned, so the conversions below are spelled out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform on [0,1): 53 mantissa bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Marsaglia polar method; one cached value.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is biased; n here is tiny vs 2^64, and
        // determinism matters more than the ~2^-50 bias. Documented.
        return gen_() % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        // Fisher-Yates, fixed visiting order.
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Independent child stream; avoids correlated draws across components.
    Rng fork(std::uint64_t salt) {
        return Rng(gen_() ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace wavecast
