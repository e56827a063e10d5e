#include "nngp/oracle.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "nngp/errors.hpp"
#include "nngp/rng.hpp"
#include "nngp/special.hpp"

namespace nngp {

namespace {

// Raw even moments E[w^2], E[w^4] of a resolved init distribution.
double raw_moment(const ResolvedInit& init, int order) {
    const double s = init.scale;
    if (init.family == ResolvedInit::Family::uniform) {
        return order == 2 ? s * s / 3.0 : s * s * s * s / 5.0;
    }
    return order == 2 ? s * s : 3.0 * s * s * s * s;
}

// E[relu(u)^k] for symmetric u: half-range moments.
double relu_moment(const ResolvedInit& init, int order) {
    const double s = init.scale;
    if (init.family == ResolvedInit::Family::uniform) {
        return order == 2 ? s * s / 6.0 : s * s * s * s / 10.0;
    }
    return order == 2 ? s * s / 2.0 : 1.5 * s * s * s * s;
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) {
        throw QuadratureError("adaptive quadrature failed to converge; residual " +
                              std::to_string(std::abs(delta)));
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    // Size the absolute budget from a composite estimate; the 3-point
    // opening rule can miss narrow integrands entirely.
    constexpr int kPanels = 128;
    const double h = (b - a) / kPanels;
    double estimate = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + i * h;
        estimate += simpson(lo, lo + h, f(lo), f(lo + 0.5 * h), f(lo + h));
    }
    const double scale = std::max(std::abs(estimate), 1e-300);
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(a, b, fa, fm, fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, rel_tol * scale, 40);
}

// E[f(u x)^k] by quadrature over the hidden-weight density; the output
// layer's polynomial moments always have closed forms, so only this
// factor ever needs numerics.
double activation_moment_quadrature(Activation act, const ResolvedInit& init,
                                    double x, int order) {
    const auto g = [&](double u) {
        const double h = apply_activation(act, u * x);
        return order == 2 ? h * h : h * h * h * h;
    };
    constexpr double kRelTol = 1e-10;
    if (init.family == ResolvedInit::Family::uniform) {
        const double a = init.scale;
        const auto f = [&](double u) { return g(u) / (2.0 * a); };
        return integrate(f, -a, 0.0, kRelTol) + integrate(f, 0.0, a, kRelTol);
    }
    const double s = init.scale;
    const auto f = [&](double u) { return g(u) * gaussian_pdf(u, s); };
    // Gaussian tail past 12 sigma is ~1e-32 of the mass.
    return integrate(f, -12.0 * s, 0.0, kRelTol) + integrate(f, 0.0, 12.0 * s, kRelTol);
}

struct ActivationMoments {
    double second;
    double fourth;
    MomentMethod method;
};

ActivationMoments activation_moments(Activation act, const ResolvedInit& init, double x) {
    switch (act) {
        case Activation::identity: {
            const double x2 = x * x;
            return {x2 * raw_moment(init, 2), x2 * x2 * raw_moment(init, 4),
                    MomentMethod::closed_form};
        }
        case Activation::relu: {
            if (x == 0.0) return {0.0, 0.0, MomentMethod::closed_form};
            // relu(u x) for symmetric u has the same law as |x| relu(u).
            const double x2 = x * x;
            return {x2 * relu_moment(init, 2), x2 * x2 * relu_moment(init, 4),
                    MomentMethod::closed_form};
        }
        case Activation::tanh_:
            return {activation_moment_quadrature(act, init, x, 2),
                    activation_moment_quadrature(act, init, x, 4),
                    MomentMethod::quadrature};
    }
    throw std::logic_error("activation_moments: unknown activation");
}

}  // namespace

SingleTermMoments single_term_moments(Activation activation,
                                      const ResolvedInit& init_hidden,
                                      const ResolvedInit& init_output, double x) {
    if (!std::isfinite(x)) throw std::domain_error("single_term_moments: non-finite x");
    const ActivationMoments h = activation_moments(activation, init_hidden, x);
    SingleTermMoments out;
    out.m2 = raw_moment(init_output, 2) * h.second;
    out.m4 = raw_moment(init_output, 4) * h.fourth;
    out.method = h.method;
    out.gamma2 = out.m2 > 0.0 ? out.m4 / (out.m2 * out.m2) - 3.0
                              : std::numeric_limits<double>::quiet_NaN();
    return out;
}

double predicted_variance(const NetworkConfig& config, double x) {
    if (config.width == 0) throw std::invalid_argument("predicted_variance: width must be >= 1");
    const auto hidden = resolve_init(config.init_hidden, 1, config.width);
    const auto output = resolve_init(config.init_output, config.width, 1);
    const auto moments = single_term_moments(config.activation, hidden, output, x);
    return static_cast<double>(config.width) * moments.m2;
}

double predicted_alpha(const NetworkConfig& config, double x) {
    const auto hidden = resolve_init(config.init_hidden, 1, config.width);
    const auto output = resolve_init(config.init_output, config.width, 1);
    const auto moments = single_term_moments(config.activation, hidden, output, x);
    if (!(moments.m2 > 0.0)) {
        throw std::domain_error("predicted_alpha: degenerate output variance");
    }
    return -moments.gamma2 / (24.0 * static_cast<double>(config.width));
}

McMoments mc_moment_oracle(Activation activation, const ResolvedInit& init_hidden,
                           const ResolvedInit& init_output, double x,
                           std::uint64_t n_draws, std::uint64_t seed, int threads) {
    if (n_draws < 100'000) {
        throw std::invalid_argument("mc_moment_oracle: need at least 1e5 draws");
    }
    constexpr std::uint64_t kChunk = 65536;
    const std::uint64_t n_chunks = (n_draws + kChunk - 1) / kChunk;
    struct Sums {
        double s2 = 0.0, s4 = 0.0, s8 = 0.0;
    };
    std::vector<Sums> chunk_sums(n_chunks);

    const int n_threads = threads > 0 ? threads : omp_get_max_threads();
    std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(static) num_threads(n_threads)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
        if (error) continue;
        try {
            const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
            const std::uint64_t end = std::min(begin + kChunk, n_draws);
            Sums s;
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                Philox rng(seed, idx);
                const double u = init_hidden.family == ResolvedInit::Family::uniform
                                     ? rng.next_uniform_sym(init_hidden.scale)
                                     : rng.next_normal(init_hidden.scale);
                const double v = init_output.family == ResolvedInit::Family::uniform
                                     ? rng.next_uniform_sym(init_output.scale)
                                     : rng.next_normal(init_output.scale);
                const double p = v * apply_activation(activation, u * x);
                const double p2 = p * p;
                const double p4 = p2 * p2;
                s.s2 += p2;
                s.s4 += p4;
                s.s8 += p4 * p4;
            }
            chunk_sums[static_cast<std::size_t>(c)] = s;
        } catch (...) {
#pragma omp critical(nngp_mc_oracle_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    Sums total;
    for (const auto& s : chunk_sums) {
        total.s2 += s.s2;
        total.s4 += s.s4;
        total.s8 += s.s8;
    }
    const double n = static_cast<double>(n_draws);
    McMoments out;
    out.n_draws = n_draws;
    out.m2 = total.s2 / n;
    out.m4 = total.s4 / n;
    out.m2_stderr = std::sqrt(std::max(total.s4 / n - out.m2 * out.m2, 0.0) / n);
    out.m4_stderr = std::sqrt(std::max(total.s8 / n - out.m4 * out.m4, 0.0) / n);
    out.gamma2 = out.m2 > 0.0 ? out.m4 / (out.m2 * out.m2) - 3.0
                              : std::numeric_limits<double>::quiet_NaN();
    return out;
}

OraclePrediction predict(const NetworkConfig& config, double x) {
    const auto hidden = resolve_init(config.init_hidden, 1, config.width);
    const auto output = resolve_init(config.init_output, config.width, 1);
    const auto moments = single_term_moments(config.activation, hidden, output, x);
    OraclePrediction p;
    p.m2 = moments.m2;
    p.m4 = moments.m4;
    p.gamma2 = moments.gamma2;
    p.sigma2_pred = static_cast<double>(config.width) * moments.m2;
    p.alpha_pred = predicted_alpha(config, x);
    p.method = moments.method == MomentMethod::closed_form ? "closed_form" : "quadrature";
    return p;
}

void to_json(nlohmann::json& j, const OraclePrediction& p) {
    j = nlohmann::json{{"m2", p.m2},
                       {"m4", p.m4},
                       {"gamma2", p.gamma2},
                       {"sigma2_pred", p.sigma2_pred},
                       {"alpha_pred", p.alpha_pred},
                       {"method", p.method}};
}

}  // namespace nngp
