#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace refsde {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based substream derivation: the result depends only on
/// (master, a, b), never on call order, so parallel draws are
/// schedule-independent.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = master;
    std::uint64_t x = splitmix64(s);
    s = x ^ (a * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL);
    x = splitmix64(s);
    s = x ^ (b * 0xa0761d6478bd642fULL + 0xe7037ed1a0b428dbULL);
    return splitmix64(s);
}

/// Standard normal stream over mt19937_64 via Box-Muller. Hand-rolled so the
/// byte stream does not depend on the standard library vendor.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {
        // in (0, 1]: 53-bit mantissa, never exactly 0 so log() is safe
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace refsde
