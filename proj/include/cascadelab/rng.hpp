#pragma once

#include <cmath>
#include <cstdint>

namespace cascadelab {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small keyed PRNG: a SplitMix64 sequence whose seed is derived from a
// counter key. Cheap to construct per tree node; streams with distinct keys
// are independent for all practical purposes.
class RngStream {
public:
    explicit constexpr RngStream(std::uint64_t key) noexcept : state_(key) {}

    constexpr std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1): 53-bit mantissa offset by half an ulp.
    constexpr double next_unit() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard normal, Box-Muller cosine branch (one draw per two uniforms).
    double next_normal() noexcept {
        const double u = next_unit();
        const double v = next_unit();
        return std::sqrt(-2.0 * std::log(u)) *
               std::cos(6.283185307179586476925286766559 * v);
    }

private:
    std::uint64_t state_;
};

// Key for the weight draw at a given tree node. depth is the node's level
// (root = 0) and path the node's bits packed MSB-first; (depth, path) pairs
// are distinct across the tree because depth occupies the high word.
constexpr std::uint64_t node_key(std::uint64_t master_seed, std::uint64_t replica,
                                 std::uint64_t depth, std::uint64_t path) noexcept {
    return mix64(mix64(mix64(master_seed) ^ replica) ^ ((depth << 48) | path));
}

inline RngStream node_stream(std::uint64_t master_seed, std::uint64_t replica,
                             std::uint64_t depth, std::uint64_t path) noexcept {
    return RngStream(node_key(master_seed, replica, depth, path));
}

// Stream keyed off the master seed alone, for non-tree randomness (searches,
// shufflers). salt separates independent consumers.
inline RngStream salted_stream(std::uint64_t master_seed, std::uint64_t salt) noexcept {
    return RngStream(mix64(mix64(master_seed) ^ ~salt));
}

}  // namespace cascadelab
