#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace nngp::testing {

// Composite Simpson on a fixed fine grid; n_intervals must be even.
inline double simpson_integral(const std::function<double(double)>& f, double a,
                               double b, int n_intervals = 20000) {
    const double h = (b - a) / n_intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < n_intervals; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Standard normal CDF by quadrature of the density, independent of erfc.
inline double phi_cdf_oracle(double z) {
    const auto pdf = [](double t) {
        return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::acos(-1.0));
    };
    if (z >= 0.0) return 0.5 + simpson_integral(pdf, 0.0, z, 40000);
    return 0.5 - simpson_integral(pdf, z, 0.0, 40000);
}

struct BruteMoments {
    double mean, variance, skewness, excess_kurtosis;
    std::uint64_t count;
};

// Two-pass textbook central moments over a stored sample.
inline BruteMoments brute_force_moments(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0, xs.size()};
}

// Inverse standard normal CDF from a one-time cumulative-trapezoid table.
inline double phi_inverse_oracle(double p) {
    static const std::vector<double> cdf = [] {
        constexpr int kPoints = 800001;  // [-10, 10], h = 2.5e-5
        const double h = 20.0 / (kPoints - 1);
        std::vector<double> table(kPoints);
        const auto pdf = [](double t) {
            return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::acos(-1.0));
        };
        double acc = 0.0;
        double prev = pdf(-10.0);
        table[0] = 0.0;
        for (int i = 1; i < kPoints; ++i) {
            const double cur = pdf(-10.0 + i * h);
            acc += 0.5 * (prev + cur) * h;
            table[i] = acc;
            prev = cur;
        }
        return table;
    }();
    const double h = 20.0 / (cdf.size() - 1);
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
    if (it == cdf.begin()) return -10.0;
    if (it == cdf.end()) return 10.0;
    const auto i = static_cast<std::size_t>(it - cdf.begin());
    const double frac = (p - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
    return -10.0 + (static_cast<double>(i - 1) + frac) * h;
}

}  // namespace nngp::testing
