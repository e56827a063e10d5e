#include "nngp/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nngp/errors.hpp"

namespace nngp {

namespace {
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 63;
}

void MomentAccumulator::add(double y) {
    if (!std::isfinite(y)) {
        throw std::invalid_argument("MomentAccumulator::add: non-finite sample");
    }
    if (count_ >= kMaxCount) {
        throw CapacityError("MomentAccumulator::add: count would exceed 2^63");
    }
    const std::uint64_t n1 = count_;
    ++count_;
    const double n = static_cast<double>(count_);
    const double delta = y - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * static_cast<double>(n1);
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ -
           4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    if (other.count_ > kMaxCount - count_) {
        throw CapacityError("MomentAccumulator::merge: combined count would exceed 2^63");
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    const double delta2 = delta * delta;
    const double delta3 = delta * delta2;
    const double delta4 = delta2 * delta2;

    MomentAccumulator out;
    out.count_ = count_ + other.count_;
    out.mean_ = (na * mean_ + nb * other.mean_) / n;
    out.m2_ = m2_ + other.m2_ + delta2 * na * nb / n;
    out.m3_ = m3_ + other.m3_ + delta3 * na * nb * (na - nb) / (n * n) +
              3.0 * delta * (na * other.m2_ - nb * m2_) / n;
    out.m4_ = m4_ + other.m4_ +
              delta4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
              6.0 * delta2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
              4.0 * delta * (na * other.m3_ - nb * m3_) / n;
    *this = out;
}

FinalizedMoments MomentAccumulator::finalize() const {
    if (count_ < 2) {
        throw InsufficientDataError("finalize: need at least 2 samples, have " +
                                    std::to_string(count_));
    }
    const double n = static_cast<double>(count_);
    FinalizedMoments out;
    out.mean = mean_;
    out.variance = m2_ / n;
    if (out.variance <= 0.0) {
        out.variance = 0.0;
        out.degenerate = true;
        out.skewness = std::numeric_limits<double>::quiet_NaN();
        out.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.skewness = (m3_ / n) / std::pow(out.variance, 1.5);
    out.excess_kurtosis = (m4_ / n) / (out.variance * out.variance) - 3.0;
    return out;
}

}  // namespace nngp
