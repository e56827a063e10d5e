#pragma once

// One-pass central moments up to order 4 with pairwise merge, after
// Pebay's update formulas (see also www.johndcook.com/blog/skewness_kurtosis).

#include <cstdint>

namespace nngp {

struct FinalizedMoments {
    double mean = 0.0;
    double variance = 0.0;         // population convention, M2 / count
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    bool degenerate = false;       // variance == 0; skew/kurtosis meaningless
};

class MomentAccumulator {
public:
    // Throws std::invalid_argument on non-finite y, CapacityError past 2^63.
    void add(double y);

    // Equivalent to accumulating the concatenation of both streams.
    void merge(const MomentAccumulator& other);

    // Throws InsufficientDataError when count < 2.
    FinalizedMoments finalize() const;

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double m2() const { return m2_; }
    double m3() const { return m3_; }
    double m4() const { return m4_; }

    bool operator==(const MomentAccumulator&) const = default;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;  // sum (y - mean)^2
    double m3_ = 0.0;
    double m4_ = 0.0;
};

}  // namespace nngp
