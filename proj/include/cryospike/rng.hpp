#pragma once

#include <cmath>
#include <cstdint>

namespace cryospike {

/// Deterministic splitmix64 stream with Gaussian draws via Box-Muller. All
/// arithmetic is explicit so sequences are identical across platforms and
/// standard libraries; substreams are derived by hashing coordinates into
/// the seed, which keeps draws independent of evaluation order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(mix(seed + kGamma)) {}

    RandomStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
        : state_(mix(mix(mix(seed + kGamma) ^ (a + kGamma)) ^ (b + kGamma))) {}

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform draw on (0, 1].
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

    /// Standard Gaussian draw; pairs come from one Box-Muller transform.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace cryospike
