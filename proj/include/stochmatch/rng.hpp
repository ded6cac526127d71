#pragma once

#include <array>
#include <cstdint>

namespace stochmatch {

/// Registry of stream purposes. A stream id is derived from (purpose, index)
/// so that unrelated consumers of randomness never share counters.
enum class StreamPurpose : std::uint64_t {
    Realization = 1,      // evaluation realizations of G
    EdgeStats = 2,        // Monte Carlo pass estimating q_e and opt
    Sampler = 3,          // SamplingAlgorithm realizations G_1..G_R
    ZMatching = 4,        // vertex-independent matching Z and its reruns
    Vimatch = 5,          // findmatching internals
    Trial = 6,            // per-trial root streams in the harness
    Generator = 7,        // random graph generators
    HPrime = 8,           // construct_H_prime offsets
    Test = 9,
};

/// 64-bit finaliser from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

/// Philox4x32-10 block function: maps (key, counter) to four 32-bit words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key, std::array<std::uint32_t, 4> counter);

/// Address of an independent random stream: (root seed, stream id).
/// Immutable; `child` splits off deterministic sub-streams.
struct RngStream {
    std::uint64_t root = 0;
    std::uint64_t id = 0;

    static RngStream make(std::uint64_t root, StreamPurpose purpose, std::uint64_t index = 0) {
        return RngStream{root, hash_combine(static_cast<std::uint64_t>(purpose), index)};
    }
    RngStream child(std::uint64_t index) const { return RngStream{root, hash_combine(id, index)}; }
    RngStream child(StreamPurpose purpose, std::uint64_t index) const {
        return child(hash_combine(static_cast<std::uint64_t>(purpose), index));
    }
    bool operator==(const RngStream&) const = default;
};

/// Sequential reader over one stream. Word i of the stream is a pure
/// function of (root, id, i).
class Rng {
public:
    explicit Rng(RngStream stream) : stream_(stream) {}

    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound);

    const RngStream& stream() const { return stream_; }
    std::uint64_t position() const { return counter_ * 2 + (have_spare_ ? 1 : 0); }

private:
    RngStream stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace stochmatch
