#pragma once

// Direct-space coarse-graining lab: R[p](y) = sqrt(2) (p * p)(sqrt(2) y),
// i.e. add two independent copies and rescale back to the original
// variance. The convolution runs on an aligned grid (which preserves the
// discrete mass, mean and second moment exactly); the sqrt(2) rescale is
// a cubic interpolation of the convolved values. The Gaussian is the
// fixed point; perturbations phi * He_n contract by 2^(1 - n/2).

#include <cstdint>
#include <functional>
#include <vector>

namespace nngp {

struct GriddedDensity {
    double hi = 12.0;  // grid is [-hi, hi], endpoints included
    std::vector<double> values;
    bool is_signed = false;  // perturbed test functions may dip below zero

    double lo() const { return -hi; }
    std::uint64_t n_points() const { return values.size(); }
    double spacing() const {
        return 2.0 * hi / static_cast<double>(values.size() - 1);
    }
    double point(std::uint64_t i) const { return -hi + spacing() * static_cast<double>(i); }

    double mass() const;       // trapezoid integral
    double mean() const;
    double variance() const;
    double sup_distance(const GriddedDensity& other) const;

    // Same grid with values divided by mass(). Grid sampling of a density
    // with jumps can be off by O(spacing), which the operator's relevant
    // mass direction would then double every application.
    GriddedDensity normalized() const;

    // Samples f on the grid. Throws std::invalid_argument unless n_points
    // is a power of two >= 1024.
    static GriddedDensity sample(const std::function<double(double)>& f,
                                 double hi, std::uint64_t n_points,
                                 bool is_signed = false);
};

struct RgGrid {
    double hi = 12.0;
    std::uint64_t n_points = 4096;
};

// One application of the coarse-graining operator. Requires the absolute
// tail mass beyond |y| > hi / sqrt(2) to be below 1e-10; throws
// TruncationError (with the measured leakage) otherwise.
GriddedDensity renormalize(const GriddedDensity& p);

// Perturbs the Gaussian fixed point along phi He_n, applies the operator
// once and projects the response back onto He_n:
//   lambda_hat = (1 / (eps n!)) integral (R[p_eps] - phi) He_n dy.
// Valid for 1e-5 <= epsilon <= 1e-2 and n <= 8. Throws ResolutionError
// when the response leaks into other He_m directions.
double measure_eigenvalue(int n, double epsilon, const RgGrid& grid = {});

// Applies the operator `steps` times (steps <= 20) and returns the
// sup-norm distances to the variance-matched Gaussian, including the
// starting distance (steps + 1 entries).
std::vector<double> iterate_to_fixed_point(const GriddedDensity& p, int steps);

}  // namespace nngp
