#pragma once

// Deterministic random substreams.
//
// Every unit of random work (one surrogate, one bootstrap replicate) gets its
// own generator whose key is a pure function of
//     (master seed, pair label, purpose, replicate index).
// Keys are folded with the SplitMix64 finalizer, and the generator itself is
// SplitMix64: output i is mix64(key + (i+1) * golden_gamma). Results therefore
// never depend on the order in which work units run, nor on thread count.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace teflow::rng {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// FNV-1a, used to turn ticker labels into key components.
constexpr std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t k = mix64(seed);
    for (std::uint64_t p : path) k = mix64(k ^ mix64(p + golden_gamma));
    return k;
}

enum class Purpose : std::uint64_t { shuffle = 1, bootstrap = 2, simulation = 3 };

/// SplitMix64 stream. Satisfies UniformRandomBitGenerator.
class Stream {
public:
    using result_type = std::uint64_t;

    constexpr explicit Stream(std::uint64_t key) : state_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += golden_gamma;
        return mix64(state_);
    }

    /// Uniform integer in [0, n). Rejection sampling keeps it exactly uniform
    /// and identical across standard libraries.
    constexpr std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Stream for one work unit on directed pair `source -> destination`.
inline Stream pair_stream(std::uint64_t seed, std::string_view source, std::string_view destination,
                          Purpose purpose, std::uint64_t replicate) {
    return Stream(derive_key(seed, {hash_label(source), hash_label(destination),
                                    static_cast<std::uint64_t>(purpose), replicate}));
}

}  // namespace teflow::rng
