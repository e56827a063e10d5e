#pragma once

namespace nngp {

// Highest supported Hermite order; beyond this the three-term recurrence
// starts losing digits to cancellation for the arguments we care about.
inline constexpr int kMaxHermiteOrder = 16;

// Probabilists' Hermite polynomial He_n(z):
//   He_0 = 1, He_1 = z, He_{n+1}(z) = z He_n(z) - n He_{n-1}(z).
// Throws std::domain_error for n < 0 or n > kMaxHermiteOrder.
double hermite(int n, double z);

// Normal density N(y; 0, sigma^2). Throws std::domain_error on sigma <= 0.
double gaussian_pdf(double y, double sigma);

// Normal CDF Phi(y / sigma), absolute error below 1e-12 (std::erfc based).
double gaussian_cdf(double y, double sigma);

}  // namespace nngp
