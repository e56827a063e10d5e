#include "nngp/edgeworth.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nngp/errors.hpp"
#include "nngp/special.hpp"

namespace nngp {

double perturbed_pdf(double y, double sigma, double c4, std::uint64_t n_width) {
    if (n_width == 0) throw std::invalid_argument("perturbed_pdf: n_width must be >= 1");
    const double z = y / sigma;
    return gaussian_pdf(y, sigma) *
           (1.0 - c4 / static_cast<double>(n_width) * hermite(4, z));
}

double model_cdf_diff(double z, double alpha) {
    return alpha * gaussian_pdf(z, 1.0) * hermite(3, z);
}

namespace {

EdgeworthFit fit_alpha_impl(std::span<const DiffPoint> table, std::uint64_t n_width,
                            const std::vector<double>& weights) {
    if (n_width == 0) throw std::invalid_argument("fit_alpha: n_width must be >= 1");
    if (table.size() < 8) {
        throw FitError("fit_alpha: need at least 8 rows, have " +
                       std::to_string(table.size()));
    }
    bool has_neg = false, has_pos = false;
    for (const auto& p : table) {
        has_neg = has_neg || p.z < 0.0;
        has_pos = has_pos || p.z > 0.0;
    }
    if (!has_neg || !has_pos) {
        throw FitError("fit_alpha: table must span both signs of z");
    }

    double sdm = 0.0, smm = 0.0;
    std::vector<double> model(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) {
        const double m = gaussian_pdf(table[j].z, 1.0) * hermite(3, table[j].z);
        model[j] = m;
        const double w = weights.empty() ? 1.0 : weights[j];
        sdm += w * table[j].d * m;
        smm += w * m * m;
    }
    if (smm <= 0.0) throw FitError("fit_alpha: degenerate grid, model vanishes everywhere");

    EdgeworthFit fit;
    fit.alpha = sdm / smm;
    fit.n_width = n_width;
    fit.c4_std = fit.alpha * static_cast<double>(n_width);

    const double n = static_cast<double>(table.size());
    double ss_res = 0.0, sum_d = 0.0, sum_f = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) {
        const double f = fit.alpha * model[j];
        const double r = table[j].d - f;
        ss_res += r * r;
        sum_d += table[j].d;
        sum_f += f;
    }
    fit.residual_rms = std::sqrt(ss_res / n);

    const double mean_d = sum_d / n;
    const double mean_f = sum_f / n;
    double cov = 0.0, var_d = 0.0, var_f = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) {
        const double dd = table[j].d - mean_d;
        const double df = fit.alpha * model[j] - mean_f;
        cov += dd * df;
        var_d += dd * dd;
        var_f += df * df;
    }
    fit.correlation =
        (var_d > 0.0 && var_f > 0.0) ? cov / std::sqrt(var_d * var_f) : 0.0;
    return fit;
}

}  // namespace

EdgeworthFit fit_alpha(std::span<const DiffPoint> table, std::uint64_t n_width) {
    return fit_alpha_impl(table, n_width, {});
}

EdgeworthFit fit_alpha_weighted(std::span<const DiffPoint> table,
                                std::uint64_t n_width, std::uint64_t count) {
    if (count == 0) throw std::invalid_argument("fit_alpha_weighted: count must be >= 1");
    std::vector<double> weights(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) {
        const double p = gaussian_cdf(table[j].z, 1.0);
        const double var = p * (1.0 - p) / static_cast<double>(count);
        weights[j] = var > 0.0 ? 1.0 / var : 0.0;
    }
    return fit_alpha_impl(table, n_width, weights);
}

double repeated_eigenvalue(int n, std::uint64_t n_width) {
    if (n < 0 || n > kMaxHermiteOrder) {
        throw std::domain_error("repeated_eigenvalue: order outside [0, 16]");
    }
    if (n_width == 0) {
        throw std::invalid_argument("repeated_eigenvalue: n_width must be >= 1");
    }
    return std::pow(static_cast<double>(n_width), 1.0 - static_cast<double>(n) / 2.0);
}

PowerLawFit fit_power_law(std::span<const std::pair<std::uint64_t, double>> points) {
    if (points.size() < 3) {
        throw FitError("fit_power_law: need at least 3 points, have " +
                       std::to_string(points.size()));
    }
    const double first_sign = points.front().second;
    for (const auto& [width, alpha] : points) {
        if (width == 0) throw FitError("fit_power_law: width must be >= 1");
        if (alpha == 0.0) throw FitError("fit_power_law: zero alpha point");
        if (alpha * first_sign < 0.0) {
            throw FitError("fit_power_law: mixed-sign alphas indicate a broken upstream fit");
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].first == points[j].first) {
                throw FitError("fit_power_law: duplicate width " +
                               std::to_string(points[i].first));
            }
        }
    }

    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [width, alpha] : points) {
        sx += std::log(static_cast<double>(width));
        sy += std::log(std::abs(alpha));
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [width, alpha] : points) {
        const double dx = std::log(static_cast<double>(width)) - mx;
        const double dy = std::log(std::abs(alpha)) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw FitError("fit_power_law: degenerate width spread");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

void to_json(nlohmann::json& j, const EdgeworthFit& fit) {
    j = nlohmann::json{{"alpha", fit.alpha},
                       {"c4_std", fit.c4_std},
                       {"n_width", fit.n_width},
                       {"residual_rms", fit.residual_rms},
                       {"correlation", fit.correlation}};
}

void to_json(nlohmann::json& j, const PowerLawFit& fit) {
    j = nlohmann::json{{"exponent", fit.exponent},
                       {"log_prefactor", fit.log_prefactor},
                       {"r_squared", fit.r_squared}};
}

}  // namespace nngp
