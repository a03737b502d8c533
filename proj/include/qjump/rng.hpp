#ifndef QJUMP_RNG_HPP
#define QJUMP_RNG_HPP

#include <array>
#include <cstdint>

namespace qjump {

// Recorded in output metadata next to the master seed.
inline constexpr const char* kRngAlgorithm = "xoshiro256++ seeded via splitmix64";

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& word : s_) word = sm.next();
    }

    // Independent stream per trajectory index under one master seed.
    static Xoshiro256pp for_stream(std::uint64_t master_seed, std::uint64_t stream) {
        return Xoshiro256pp(stream_seed(master_seed, stream));
    }

    static std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream) {
        return master_seed ^ (0xD2B74407B1CE6E93ULL * (stream + 1));
    }

    std::uint64_t next() {
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

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_;
};

} // namespace qjump

#endif
