#include "nngp/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nngp {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrt2 = 0.7071067811865475244;
}  // namespace

double hermite(int n, double z) {
    if (n < 0 || n > kMaxHermiteOrder) {
        throw std::domain_error("hermite: order " + std::to_string(n) +
                                " outside [0, " + std::to_string(kMaxHermiteOrder) + "]");
    }
    if (!std::isfinite(z)) throw std::domain_error("hermite: non-finite argument");
    double prev = 1.0;  // He_0
    if (n == 0) return prev;
    double cur = z;  // He_1
    for (int k = 1; k < n; ++k) {
        double next = z * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double gaussian_pdf(double y, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("gaussian_pdf: sigma must be > 0");
    if (!std::isfinite(y)) throw std::domain_error("gaussian_pdf: non-finite argument");
    const double z = y / sigma;
    return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

double gaussian_cdf(double y, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("gaussian_cdf: sigma must be > 0");
    if (!std::isfinite(y)) throw std::domain_error("gaussian_cdf: non-finite argument");
    return 0.5 * std::erfc(-y / sigma * kInvSqrt2);
}

}  // namespace nngp
