#pragma once

// Counter-based generator: Philox-4x32-10.
//   Salmon, Moraes, Dror, Shaw. "Parallel random numbers: as easy as
//   1, 2, 3." SC 2011. Passes BigCrush; 2^64 independent substreams.
//
// Key    = the 64-bit master seed (split into two 32-bit words).
// Counter = [block_lo, block_hi, stream_lo, stream_hi], so every
// (master_seed, stream_index) pair owns a disjoint counter range and the
// draw sequence for a stream is a pure function of those two values.
// This mapping is part of the on-disk reproducibility contract; do not
// change it without bumping the tool version.

#include <array>
#include <cstdint>

namespace nngp {

struct SubstreamSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

class Philox {
public:
    Philox(std::uint64_t master_seed, std::uint64_t stream_index)
        : Philox(SubstreamSeed{master_seed, stream_index}) {}

    explicit Philox(SubstreamSeed seed)
        : key0_(static_cast<std::uint32_t>(seed.master_seed)),
          key1_(static_cast<std::uint32_t>(seed.master_seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(seed.stream_index)),
          stream_hi_(static_cast<std::uint32_t>(seed.stream_index >> 32)) {}

    std::uint64_t next_u64() {
        if (pos_ == 2) refill();
        return buffer_[pos_++];
    }

    // Uniform on [0, 1): top 53 bits of one 64-bit draw.
    double next_uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [-limit, limit).
    double next_uniform_sym(double limit) {
        return limit * (2.0 * next_uniform01() - 1.0);
    }

    // N(0, std^2) via Box-Muller, cosine branch only so that every call
    // consumes exactly two 64-bit draws.
    double next_normal(double std_dev);

private:
    void refill();

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int pos_ = 2;
};

}  // namespace nngp
