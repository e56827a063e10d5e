#include "nngp/rg.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "nngp/errors.hpp"
#include "nngp/special.hpp"

namespace nngp {

namespace {

bool power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

void check_grid(const GriddedDensity& p, const char* where) {
    if (p.values.size() < 1024 || !power_of_two(p.values.size())) {
        throw std::invalid_argument(std::string(where) +
                                    ": n_points must be a power of two >= 1024");
    }
    if (!(p.hi > 0.0) || !std::isfinite(p.hi)) {
        throw std::invalid_argument(std::string(where) + ": hi must be positive and finite");
    }
}

// 4-point Lagrange interpolation on a uniform grid; zero outside.
double cubic_at(const std::vector<double>& q, double t) {
    const auto n = static_cast<std::int64_t>(q.size());
    const double fi = std::floor(t);
    const auto i1 = static_cast<std::int64_t>(fi);
    const double f = t - fi;
    const auto at = [&](std::int64_t i) -> double {
        return (i >= 0 && i < n) ? q[static_cast<std::size_t>(i)] : 0.0;
    };
    const double a = at(i1 - 1), b = at(i1), c = at(i1 + 1), d = at(i1 + 2);
    const double wa = -f * (f - 1.0) * (f - 2.0) / 6.0;
    const double wb = (f * f - 1.0) * (f - 2.0) / 2.0;
    const double wc = -f * (f + 1.0) * (f - 2.0) / 2.0;
    const double wd = f * (f * f - 1.0) / 6.0;
    return wa * a + wb * b + wc * c + wd * d;
}

}  // namespace

double GriddedDensity::mass() const {
    const double h = spacing();
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * h;
}

double GriddedDensity::mean() const {
    const double h = spacing();
    double sum = 0.5 * (point(0) * values.front() +
                        point(values.size() - 1) * values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += point(i) * values[i];
    return sum * h / mass();
}

double GriddedDensity::variance() const {
    const double h = spacing();
    const double m0 = mass();
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
        const double y = point(i);
        m1 += w * y * values[i];
        m2 += w * y * y * values[i];
    }
    m1 *= h / m0;
    m2 *= h / m0;
    return m2 - m1 * m1;
}

double GriddedDensity::sup_distance(const GriddedDensity& other) const {
    if (other.values.size() != values.size() || other.hi != hi) {
        throw std::invalid_argument("sup_distance: grids differ");
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sup = std::max(sup, std::abs(values[i] - other.values[i]));
    }
    return sup;
}

GriddedDensity GriddedDensity::normalized() const {
    const double m = mass();
    if (!(m > 0.0)) throw std::invalid_argument("normalized: nonpositive mass");
    GriddedDensity out = *this;
    for (auto& v : out.values) v /= m;
    return out;
}

GriddedDensity GriddedDensity::sample(const std::function<double(double)>& f,
                                      double hi, std::uint64_t n_points,
                                      bool is_signed) {
    GriddedDensity p;
    p.hi = hi;
    p.is_signed = is_signed;
    p.values.resize(n_points);
    check_grid(p, "GriddedDensity::sample");
    for (std::uint64_t i = 0; i < n_points; ++i) p.values[i] = f(p.point(i));
    if (!is_signed) {
        for (double v : p.values) {
            if (v < -1e-12) {
                throw std::invalid_argument(
                    "GriddedDensity::sample: negative density value; flag as signed "
                    "if this is a perturbed test function");
            }
        }
    }
    return p;
}

GriddedDensity renormalize(const GriddedDensity& p) {
    check_grid(p, "renormalize");
    // Mass is a relevant direction (doubled per application), so an
    // unnormalized density diverges instead of flowing to the Gaussian.
    // Signed linearization probes legitimately carry mass != 1.
    if (!p.is_signed && std::abs(p.mass() - 1.0) > 1e-4) {
        throw std::invalid_argument("renormalize: density mass " +
                                    std::to_string(p.mass()) +
                                    " is not 1; normalize the grid values first");
    }
    const auto n = static_cast<std::int64_t>(p.values.size());
    const double h = p.spacing();

    // Tail mass beyond hi / sqrt(2) would be folded past the grid edge by
    // the rescale; refuse if it is not negligible.
    const double cutoff = p.hi / std::sqrt(2.0);
    double leak = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (std::abs(p.point(static_cast<std::uint64_t>(i))) > cutoff) {
            leak += std::abs(p.values[static_cast<std::size_t>(i)]) * h;
        }
    }
    if (leak > 1e-10) {
        throw TruncationError("renormalize: tail mass " + std::to_string(leak) +
                                  " beyond hi/sqrt(2) exceeds 1e-10",
                              leak);
    }

    // Self-convolution on the aligned grid: q_m ~ (p * p)(2 lo + m h).
    // On aligned grids the plain Riemann sum preserves the discrete mass,
    // mean and second moment of the convolution exactly.
    std::vector<double> q(static_cast<std::size_t>(2 * n - 1), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < 2 * n - 1; ++m) {
        const std::int64_t j_lo = std::max<std::int64_t>(0, m - (n - 1));
        const std::int64_t j_hi = std::min<std::int64_t>(n - 1, m);
        double sum = 0.0;
        for (std::int64_t j = j_lo; j <= j_hi; ++j) {
            sum += p.values[static_cast<std::size_t>(j)] *
                   p.values[static_cast<std::size_t>(m - j)];
        }
        q[static_cast<std::size_t>(m)] = sum * h;
    }

    // R[p](y) = sqrt(2) (p * p)(sqrt(2) y); q lives on [2 lo, 2 hi] so the
    // argument sqrt(2) y always stays interior.
    GriddedDensity out;
    out.hi = p.hi;
    out.is_signed = p.is_signed;
    out.values.resize(static_cast<std::size_t>(n));
    const double sqrt2 = std::sqrt(2.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double s = sqrt2 * out.point(static_cast<std::uint64_t>(i));
        const double t = (s + 2.0 * p.hi) / h;  // index into q
        out.values[static_cast<std::size_t>(i)] = sqrt2 * cubic_at(q, t);
    }
    return out;
}

double measure_eigenvalue(int n, double epsilon, const RgGrid& grid) {
    if (n < 0 || n > 8) throw std::domain_error("measure_eigenvalue: order outside [0, 8]");
    if (!(epsilon >= 1e-5 && epsilon <= 1e-2)) {
        throw std::invalid_argument("measure_eigenvalue: epsilon outside [1e-5, 1e-2]");
    }
    const auto p_eps = GriddedDensity::sample(
        [&](double y) { return gaussian_pdf(y, 1.0) * (1.0 + epsilon * hermite(n, y)); },
        grid.hi, grid.n_points, /*is_signed=*/true);
    const GriddedDensity response = renormalize(p_eps);

    const double h = p_eps.spacing();
    std::vector<double> diff(p_eps.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = response.values[i] -
                  gaussian_pdf(response.point(static_cast<std::uint64_t>(i)), 1.0);
    }

    // Project with the orthogonality integral He_m He_n phi dy = n! delta_mn.
    const auto project = [&](int order) {
        double factorial = 1.0;
        for (int k = 2; k <= order; ++k) factorial *= k;
        double sum = 0.0;
        for (std::size_t i = 0; i < diff.size(); ++i) {
            const double w = (i == 0 || i + 1 == diff.size()) ? 0.5 : 1.0;
            sum += w * diff[i] *
                   hermite(order, response.point(static_cast<std::uint64_t>(i)));
        }
        return sum * h / (epsilon * factorial);
    };

    const double lambda = project(n);
    for (int m = 0; m <= 8; ++m) {
        if (m == n) continue;
        const double spill = project(m);
        if (std::abs(spill) > 1e-2) {
            throw ResolutionError("measure_eigenvalue: response leaks " +
                                  std::to_string(spill) + " into He_" +
                                  std::to_string(m) + "; grid too coarse");
        }
    }
    return lambda;
}

std::vector<double> iterate_to_fixed_point(const GriddedDensity& p, int steps) {
    if (steps < 1 || steps > 20) {
        throw std::invalid_argument("iterate_to_fixed_point: steps must be in [1, 20]");
    }
    check_grid(p, "iterate_to_fixed_point");
    const double sigma = std::sqrt(p.variance());
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("iterate_to_fixed_point: zero-variance start");
    }
    const auto target = GriddedDensity::sample(
        [&](double y) { return gaussian_pdf(y, sigma); }, p.hi, p.n_points());

    std::vector<double> distances;
    distances.reserve(static_cast<std::size_t>(steps) + 1);
    GriddedDensity current = p.normalized();
    distances.push_back(current.sup_distance(target));
    for (int k = 0; k < steps; ++k) {
        // Re-normalize each step: discretization feeds a little mass error
        // into the relevant (doubling) direction, which would otherwise
        // swamp the contraction being measured after ~10 applications.
        current = renormalize(current).normalized();
        distances.push_back(current.sup_distance(target));
    }
    return distances;
}

}  // namespace nngp
