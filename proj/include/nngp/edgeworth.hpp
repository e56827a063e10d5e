#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "nngp/ecdf.hpp"

namespace nngp {

// Result of fitting the standardized CDF-difference model
//   d(z) = alpha * phi(z) * He_3(z).
struct EdgeworthFit {
    double alpha = 0.0;        // signed amplitude in standardized coordinates
    double c4_std = 0.0;       // alpha * n_width
    std::uint64_t n_width = 1;
    double residual_rms = 0.0;
    double correlation = 0.0;  // Pearson, data vs fitted model
};

struct PowerLawFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;  // natural log
    double r_squared = 0.0;
};

// Gaussian density times [1 - (c4 / N) He_4(y / sigma)].
double perturbed_pdf(double y, double sigma, double c4, std::uint64_t n_width);

// alpha * phi(z) * He_3(z).
double model_cdf_diff(double z, double alpha);

// Closed-form unweighted least squares for alpha over a (z, d) table.
// Requires >= 8 rows spanning both signs of z; throws FitError otherwise.
EdgeworthFit fit_alpha(std::span<const DiffPoint> table, std::uint64_t n_width);

// Same model, rows weighted by the reciprocal binomial ECDF variance
// Phi(z)(1 - Phi(z)) / count. Not the default fitting path.
EdgeworthFit fit_alpha_weighted(std::span<const DiffPoint> table,
                                std::uint64_t n_width, std::uint64_t count);

// Eigenvalue of the width-N composed coarse-graining step: N^(1 - n/2).
double repeated_eigenvalue(int n, std::uint64_t n_width);

// OLS of log|alpha| against log N. Requires >= 3 points with distinct
// widths and nonzero same-sign alphas; throws FitError otherwise.
PowerLawFit fit_power_law(
    std::span<const std::pair<std::uint64_t, double>> points);

void to_json(nlohmann::json& j, const EdgeworthFit& fit);
void to_json(nlohmann::json& j, const PowerLawFit& fit);

}  // namespace nngp
