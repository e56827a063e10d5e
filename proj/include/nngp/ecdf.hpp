#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace nngp {

struct DiffPoint {
    double z;  // standardized bin right edge, y / sigma_hat
    double d;  // ECDF(y) - Phi(z)
};

// Fixed-grid histogram that answers empirical-CDF queries at bin edges
// without ever storing samples. Counting only, so ECDF values at edges
// carry no interpolation error.
class BinnedEcdf {
public:
    BinnedEcdf(double lo, double hi, std::uint64_t n_bins);

    void add(double y);
    void merge(const BinnedEcdf& other);  // grids must match exactly

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::uint64_t n_bins() const { return counts_.size(); }
    std::uint64_t underflow() const { return underflow_; }
    std::uint64_t overflow() const { return overflow_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total() const;

    double right_edge(std::uint64_t bin) const;
    // ECDF evaluated at the right edge of `bin` (exact counting).
    double ecdf_at_edge(std::uint64_t bin) const;

    // (z, d) rows for interior bin edges with |z| <= z_max.
    // Throws InsufficientDataError when total() < 10^4.
    std::vector<DiffPoint> ecdf_diff(double sigma_hat, double z_max = 5.0) const;

    bool operator==(const BinnedEcdf&) const = default;

private:
    double lo_, hi_, width_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t underflow_ = 0;
    std::uint64_t overflow_ = 0;
};

// CSV with header "z,ecdf_diff", one row per table entry.
void write_diff_csv(std::ostream& os, const std::vector<DiffPoint>& table);

}  // namespace nngp
