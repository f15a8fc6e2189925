#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace synthbench {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

// FNV-1a, used to derive stream ids from string tags.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Counter-mode SplitMix64 stream. Output i is mix64(key + (i+1)*gamma), so any
// draw is addressable by index: generation parallelized over rows or columns
// gives bit-identical results regardless of worker count. Substreams are
// derived by re-keying, never by splitting the counter range.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix64(seed ^ kKeyTweak)) {}

    // Independent substream for a column / row / pipeline stage.
    Rng stream(std::uint64_t stream_id) const {
        return Rng(from_key_tag{}, mix64(key_ ^ mix64(stream_id ^ kStreamTweak)));
    }
    Rng stream(std::string_view tag) const { return stream(fnv1a(tag)); }

    // Random draw at a fixed counter position; does not advance state.
    std::uint64_t at(std::uint64_t i) const { return mix64(key_ + (i + 1) * kGamma); }

    std::uint64_t next() { return at(counter_++); }

    // Uniform double in [0, 1) with 53 random bits.
    static double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }
    double next_double() { return to_unit(next()); }
    double unit_at(std::uint64_t i) const { return to_unit(at(i)); }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform integer in [0, n) via 128-bit multiply-shift; deterministic
    // across platforms.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }
    std::uint64_t below_at(std::uint64_t i, std::uint64_t n) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(at(i)) * n) >> 64);
    }

private:
    struct from_key_tag {};
    Rng(from_key_tag, std::uint64_t key) : key_(key) {}

    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
    static constexpr std::uint64_t kKeyTweak = 0x6a09e667f3bcc908ull;
    static constexpr std::uint64_t kStreamTweak = 0xd6e8feb86659fd93ull;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Fisher-Yates with our own Rng; std::shuffle is not reproducible across
// standard library implementations.
template <class T>
void deterministic_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.below(i)]);
    }
}

}  // namespace synthbench
