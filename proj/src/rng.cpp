#include "stochmatch/rng.hpp"

namespace stochmatch {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53U;
constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key, std::array<std::uint32_t, 4> ctr) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t Rng::next_u64() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(stream_.root),
                                     static_cast<std::uint32_t>(stream_.root >> 32)};
    std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                     static_cast<std::uint32_t>(stream_.id), static_cast<std::uint32_t>(stream_.id >> 32)};
    ++counter_;
    auto out = philox4x32(key, ctr);
    spare_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    have_spare_ = true;
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::uint64_t Rng::below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        std::uint64_t x = next_u64();
        if (x < limit) return x % bound;
    }
}

}  // namespace stochmatch
