#include "nngp/ecdf.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nngp/errors.hpp"
#include "nngp/format.hpp"
#include "nngp/special.hpp"

namespace nngp {

BinnedEcdf::BinnedEcdf(double lo, double hi, std::uint64_t n_bins)
    : lo_(lo), hi_(hi), width_((hi - lo) / static_cast<double>(n_bins)) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("BinnedEcdf: need finite lo < hi");
    }
    if (n_bins == 0) throw std::invalid_argument("BinnedEcdf: need at least one bin");
    counts_.assign(n_bins, 0);
}

void BinnedEcdf::add(double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("BinnedEcdf::add: non-finite sample");
    if (y < lo_) {
        ++underflow_;
        return;
    }
    if (y >= hi_) {
        ++overflow_;
        return;
    }
    auto bin = static_cast<std::uint64_t>((y - lo_) / width_);
    if (bin >= counts_.size()) bin = counts_.size() - 1;  // guards y just below hi_
    ++counts_[bin];
}

void BinnedEcdf::merge(const BinnedEcdf& other) {
    if (lo_ != other.lo_ || hi_ != other.hi_ || counts_.size() != other.counts_.size()) {
        throw std::invalid_argument("BinnedEcdf::merge: incompatible grids");
    }
    underflow_ += other.underflow_;
    overflow_ += other.overflow_;
    for (std::uint64_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t BinnedEcdf::total() const {
    std::uint64_t t = underflow_ + overflow_;
    for (auto c : counts_) t += c;
    return t;
}

double BinnedEcdf::right_edge(std::uint64_t bin) const {
    return lo_ + width_ * static_cast<double>(bin + 1);
}

double BinnedEcdf::ecdf_at_edge(std::uint64_t bin) const {
    std::uint64_t below = underflow_;
    for (std::uint64_t i = 0; i <= bin && i < counts_.size(); ++i) below += counts_[i];
    return static_cast<double>(below) / static_cast<double>(total());
}

std::vector<DiffPoint> BinnedEcdf::ecdf_diff(double sigma_hat, double z_max) const {
    const std::uint64_t n = total();
    if (n < 10'000) {
        throw InsufficientDataError("ecdf_diff: need >= 1e4 samples, have " +
                                    std::to_string(n));
    }
    if (!(sigma_hat > 0.0)) throw std::domain_error("ecdf_diff: sigma_hat must be > 0");
    std::vector<DiffPoint> table;
    table.reserve(counts_.size());
    const double inv_n = 1.0 / static_cast<double>(n);
    std::uint64_t below = underflow_;
    for (std::uint64_t bin = 0; bin + 1 < counts_.size(); ++bin) {
        below += counts_[bin];
        const double y = right_edge(bin);
        const double z = y / sigma_hat;
        if (std::abs(z) > z_max) continue;
        const double d = static_cast<double>(below) * inv_n - gaussian_cdf(z, 1.0);
        table.push_back({z, d});
    }
    return table;
}

void write_diff_csv(std::ostream& os, const std::vector<DiffPoint>& table) {
    os << "z,ecdf_diff\n";
    for (const auto& p : table) {
        os << format_double(p.z) << ',' << format_double(p.d) << '\n';
    }
}

}  // namespace nngp
