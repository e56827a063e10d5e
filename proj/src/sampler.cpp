#include "nngp/sampler.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "nngp/errors.hpp"
#include "nngp/oracle.hpp"
#include "nngp/rng.hpp"

namespace nngp {

ChunkPlan ChunkPlan::for_samples(std::uint64_t n_samples, std::uint64_t chunk_size) {
    if (n_samples == 0) throw std::invalid_argument("ChunkPlan: n_samples must be >= 1");
    if (chunk_size == 0) throw std::invalid_argument("ChunkPlan: chunk_size must be >= 1");
    return {chunk_size, (n_samples + chunk_size - 1) / chunk_size};
}

double forward(const NetworkConfig& config, std::span<const double> u,
               std::span<const double> v, double x) {
    if (u.size() != config.width || v.size() != config.width) {
        throw ShapeError("forward: weight vectors must have length N = " +
                         std::to_string(config.width));
    }
    double y = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        y += v[i] * apply_activation(config.activation, u[i] * x);
    }
    return y;
}

namespace {

inline double draw_weight(const ResolvedInit& init, Philox& rng) {
    return init.family == ResolvedInit::Family::uniform
               ? rng.next_uniform_sym(init.scale)
               : rng.next_normal(init.scale);
}

// Draw order per network is fixed: all N hidden weights u, then all N
// output weights v. The activations of the u pass are staged in scratch.
double sample_output(Activation act, double x, std::uint64_t width,
                     const ResolvedInit& init_hidden, const ResolvedInit& init_output,
                     Philox& rng, std::vector<double>& scratch) {
    for (std::uint64_t i = 0; i < width; ++i) {
        scratch[i] = apply_activation(act, draw_weight(init_hidden, rng) * x);
    }
    double y = 0.0;
    for (std::uint64_t i = 0; i < width; ++i) {
        y += draw_weight(init_output, rng) * scratch[i];
    }
    return y;
}

struct ResolvedSpec {
    ResolvedInit hidden;
    ResolvedInit output;
};

ResolvedSpec resolve_or_throw(const EnsembleSpec& spec) {
    const auto violations = validate_spec(spec);
    if (!violations.empty()) {
        std::string msg = "invalid ensemble spec:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
    if (spec.n_samples >= (std::uint64_t{1} << 63)) {
        throw CapacityError("run_ensemble: n_samples exceeds the 2^63 counter budget");
    }
    return {resolve_init(spec.network.init_hidden, 1, spec.network.width),
            resolve_init(spec.network.init_output, spec.network.width, 1)};
}

BinnedEcdf make_grid(const EnsembleSpec& spec, const RunOptions& opts) {
    double sigma = opts.grid_sigma;
    if (sigma <= 0.0) {
        const double var = predicted_variance(spec.network, spec.x);
        if (!(var > 0.0)) {
            throw std::domain_error(
                "run_ensemble: predicted output variance is degenerate (x = 0 with a "
                "homogeneous activation?); pass an explicit grid_sigma");
        }
        sigma = std::sqrt(var);
    }
    const double half = opts.ecdf_halfwidth_sigmas * sigma;
    return BinnedEcdf(-half, half, opts.ecdf_bins);
}

}  // namespace

double sample_network_output(const EnsembleSpec& spec, std::uint64_t stream_index) {
    const auto resolved = resolve_or_throw(spec);
    Philox rng(spec.seed, stream_index);
    std::vector<double> scratch(spec.network.width);
    return sample_output(spec.network.activation, spec.x, spec.network.width,
                         resolved.hidden, resolved.output, rng, scratch);
}

EnsembleSummary run_ensemble(const EnsembleSpec& spec, const RunOptions& opts) {
    const auto resolved = resolve_or_throw(spec);
    const BinnedEcdf grid = make_grid(spec, opts);
    const ChunkPlan plan = ChunkPlan::for_samples(spec.n_samples, opts.chunk_size);

    const int n_threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
    std::vector<MomentAccumulator> chunk_moments(plan.n_chunks);
    std::vector<BinnedEcdf> thread_ecdfs(static_cast<std::size_t>(n_threads), grid);

    std::exception_ptr error = nullptr;
#pragma omp parallel num_threads(n_threads)
    {
        std::vector<double> scratch(spec.network.width);
        BinnedEcdf& local_ecdf = thread_ecdfs[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(plan.n_chunks); ++c) {
            if (error) continue;
            try {
                const std::uint64_t begin = static_cast<std::uint64_t>(c) * plan.chunk_size;
                const std::uint64_t end =
                    std::min(begin + plan.chunk_size, spec.n_samples);
                MomentAccumulator acc;
                for (std::uint64_t idx = begin; idx < end; ++idx) {
                    Philox rng(spec.seed, idx);
                    const double y =
                        sample_output(spec.network.activation, spec.x, spec.network.width,
                                      resolved.hidden, resolved.output, rng, scratch);
                    acc.add(y);
                    local_ecdf.add(y);
                }
                chunk_moments[static_cast<std::size_t>(c)] = acc;
            } catch (...) {
#pragma omp critical(nngp_run_ensemble_error)
                if (!error) error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);

    EnsembleSummary out{MomentAccumulator{}, grid};
    for (const auto& acc : chunk_moments) out.moments.merge(acc);
    for (const auto& e : thread_ecdfs) out.ecdf.merge(e);
    return out;
}

EnsembleSummary run_ensemble_serial(const EnsembleSpec& spec, const RunOptions& opts) {
    const auto resolved = resolve_or_throw(spec);
    EnsembleSummary out{MomentAccumulator{}, make_grid(spec, opts)};
    std::vector<double> scratch(spec.network.width);
    for (std::uint64_t idx = 0; idx < spec.n_samples; ++idx) {
        Philox rng(spec.seed, idx);
        const double y = sample_output(spec.network.activation, spec.x, spec.network.width,
                                       resolved.hidden, resolved.output, rng, scratch);
        out.moments.add(y);
        out.ecdf.add(y);
    }
    return out;
}

nlohmann::json summary_to_json(const EnsembleSummary& summary) {
    nlohmann::json j;
    const auto& m = summary.moments;
    j["count"] = m.count();
    j["mean"] = m.count() >= 1 ? nlohmann::json(m.mean()) : nlohmann::json(nullptr);
    j["variance"] = nullptr;
    j["skewness"] = nullptr;
    j["excess_kurtosis"] = nullptr;
    if (m.count() >= 2) {
        const auto fin = m.finalize();
        j["variance"] = fin.variance;
        if (!fin.degenerate) {
            j["skewness"] = fin.skewness;
            j["excess_kurtosis"] = fin.excess_kurtosis;
        }
    }
    const auto& e = summary.ecdf;
    std::vector<std::uint64_t> cumulative(e.counts().size());
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        running += e.counts()[i];
        cumulative[i] = running;
    }
    j["ecdf"] = nlohmann::json{{"lo", e.lo()},
                               {"hi", e.hi()},
                               {"n_bins", e.n_bins()},
                               {"underflow", e.underflow()},
                               {"overflow", e.overflow()},
                               {"cumulative_counts", cumulative}};
    return j;
}

}  // namespace nngp
