#pragma once

#include <cmath>
#include <cstdint>

namespace nbfit {

// xoshiro256++ with SplitMix64 seeding. Fixed algorithm so that seeded runs
// are bit-identical across platforms and standard libraries; streams derived
// via spawn(index) are statistically independent and reproducible.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed_material) : key_(seed_material) {
        std::uint64_t x = seed_material;
        for (auto& w : s_) w = splitmix64(x);
    }

    static std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) {
        std::uint64_t x = parent ^ 0xA3EC647659359ACDULL;
        std::uint64_t a = splitmix64(x);
        x = a + index * 0x9E3779B97F4A7C15ULL + 0x1ULL;
        return splitmix64(x);
    }

    // Child stream keyed by (this stream's key, index); untouched by how many
    // draws the parent has made.
    RngStream spawn(std::uint64_t index) const { return RngStream(derive_key(key_, index)); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // One-shot Box-Muller (no spare cached, keeps streams stateless-ish).
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t key() const { return key_; }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
    std::uint64_t key_;
};

}  // namespace nbfit
