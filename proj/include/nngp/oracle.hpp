#pragma once

// Exact moments of the single-unit product v * f(u * x): closed forms
// where the activation allows them, adaptive quadrature otherwise. These
// are the ground truth the Monte-Carlo pipeline is checked against.

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nngp/model.hpp"

namespace nngp {

enum class MomentMethod { closed_form, quadrature };

struct SingleTermMoments {
    double m2 = 0.0;      // E[(hv)^2]
    double m4 = 0.0;      // E[(hv)^4]
    double gamma2 = 0.0;  // m4 / m2^2 - 3; NaN when m2 == 0 (degenerate)
    MomentMethod method = MomentMethod::closed_form;
};

// u and v are independent, so m2 = E[v^2] E[f(ux)^2] and
// m4 = E[v^4] E[f(ux)^4]. Odd moments vanish by the symmetry of v.
SingleTermMoments single_term_moments(Activation activation,
                                      const ResolvedInit& init_hidden,
                                      const ResolvedInit& init_output, double x);

// Output variance N * m2, with inits resolved at fan (1, N) and (N, 1).
double predicted_variance(const NetworkConfig& config, double x);

// Standardized CDF-difference amplitude implied by the first surviving
// correction term: -gamma2 / (24 N). Throws std::domain_error when the
// predicted variance is degenerate.
double predicted_alpha(const NetworkConfig& config, double x);

struct McMoments {
    double m2 = 0.0;
    double m4 = 0.0;
    double m2_stderr = 0.0;
    double m4_stderr = 0.0;
    double gamma2 = 0.0;
    std::uint64_t n_draws = 0;
};

// Brute-force check of the closed forms: direct sampling of v * f(u * x).
// Chunked and merged in fixed order, same determinism contract as the
// ensemble sampler.
McMoments mc_moment_oracle(Activation activation, const ResolvedInit& init_hidden,
                           const ResolvedInit& init_output, double x,
                           std::uint64_t n_draws, std::uint64_t seed,
                           int threads = 0);

struct OraclePrediction {
    double m2 = 0.0;
    double m4 = 0.0;
    double gamma2 = 0.0;
    double sigma2_pred = 0.0;
    double alpha_pred = 0.0;
    std::string method;
};

// Bundles the predictions for one network configuration.
OraclePrediction predict(const NetworkConfig& config, double x);

void to_json(nlohmann::json& j, const OraclePrediction& p);

}  // namespace nngp
