#include "nngp/rng.hpp"

#include <cmath>

namespace nngp {

namespace {

// Philox-4x32 round and Weyl constants from Salmon et al., Table 2.
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    ctr[0] = hi1 ^ ctr[1] ^ k0;
    ctr[1] = lo1;
    ctr[2] = hi0 ^ ctr[3] ^ k1;
    ctr[3] = lo0;
}

}  // namespace

void Philox::refill() {
    std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block_),
                            static_cast<std::uint32_t>(block_ >> 32), stream_lo_,
                            stream_hi_};
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int r = 0; r < 10; ++r) {
        round_once(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    buffer_[0] = static_cast<std::uint64_t>(ctr[0]) | (static_cast<std::uint64_t>(ctr[1]) << 32);
    buffer_[1] = static_cast<std::uint64_t>(ctr[2]) | (static_cast<std::uint64_t>(ctr[3]) << 32);
    ++block_;
    pos_ = 0;
}

double Philox::next_normal(double std_dev) {
    // u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return std_dev * r * std::cos(6.283185307179586477 * u2);
}

}  // namespace nngp
