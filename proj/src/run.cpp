#include "nngp/run.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nngp/errors.hpp"
#include "nngp/special.hpp"
#include "nngp/version.hpp"

namespace nngp {

RunArtifact simulate_run(const EnsembleSpec& spec, const SimulateOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const OraclePrediction oracle = predict(spec.network, spec.x);

    RunOptions run_opts;
    run_opts.threads = opts.threads;
    EnsembleSummary summary = run_ensemble(spec, run_opts);

    const auto fin = summary.moments.finalize();
    if (fin.degenerate) {
        throw std::domain_error("simulate_run: degenerate sample variance, nothing to fit");
    }
    const double sigma_hat = std::sqrt(fin.variance);
    const auto table = summary.ecdf.ecdf_diff(sigma_hat);
    const EdgeworthFit fit =
        opts.weighted_fit
            ? fit_alpha_weighted(table, spec.network.width, summary.moments.count())
            : fit_alpha(table, spec.network.width);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return RunArtifact{spec, std::move(summary), fit, oracle, kToolVersion, wall};
}

nlohmann::json artifact_to_json(const RunArtifact& artifact, bool with_wall_time) {
    nlohmann::json j;
    j["spec"] = artifact.spec;
    j["summary"] = summary_to_json(artifact.summary);
    j["fit"] = artifact.fit;
    j["oracle"] = artifact.oracle;
    j["tool_version"] = artifact.tool_version;
    if (with_wall_time) j["wall_time_seconds"] = artifact.wall_time_seconds;
    return j;
}

SweepResult run_sweep(const SweepOptions& opts) {
    std::vector<std::uint64_t> widths;
    for (std::uint64_t w = opts.width_min; w <= opts.width_max; w += opts.width_step) {
        widths.push_back(w);
        if (opts.width_step == 0) break;
    }
    if (widths.empty()) throw FitError("run_sweep: no fit points");

    SweepResult result;
    std::vector<std::pair<std::uint64_t, double>> points;
    for (const auto w : widths) {
        EnsembleSpec spec;
        spec.network.width = w;
        spec.network.activation = opts.activation;
        spec.network.init_hidden = opts.init_hidden;
        spec.network.init_output = opts.init_output;
        spec.x = opts.x;
        spec.n_samples = opts.n_samples;
        spec.seed = opts.seed + w;  // distinct substream universe per width
        SimulateOptions sim;
        sim.threads = opts.threads;
        sim.weighted_fit = opts.weighted_fit;
        result.runs.push_back(simulate_run(spec, sim));
        points.emplace_back(w, result.runs.back().fit.alpha);
    }
    result.power_law = fit_power_law(points);
    return result;
}

std::vector<EigenvalueRow> rg_spectrum(double epsilon, const RgGrid& grid) {
    std::vector<EigenvalueRow> rows;
    for (int n = 0; n <= 6; ++n) {
        const double measured = measure_eigenvalue(n, epsilon, grid);
        const double expected = std::exp2(1.0 - static_cast<double>(n) / 2.0);
        rows.push_back({n, measured, expected, std::abs(measured - expected)});
    }
    return rows;
}

void write_fig1_csv(std::ostream& os, const RunArtifact& artifact) {
    const auto fin = artifact.summary.moments.finalize();
    const auto table = artifact.summary.ecdf.ecdf_diff(std::sqrt(fin.variance));
    os << "z,ecdf_diff,model_diff\n";
    for (const auto& p : table) {
        os << format_double(p.z) << ',' << format_double(p.d) << ','
           << format_double(model_cdf_diff(p.z, artifact.fit.alpha)) << '\n';
    }
}

void write_fig2_csv(std::ostream& os, const SweepResult& sweep) {
    os << "width,alpha_abs,alpha_sign,pred_alpha_abs\n";
    for (const auto& run : sweep.runs) {
        const double alpha = run.fit.alpha;
        os << run.spec.network.width << ',' << format_double(std::abs(alpha)) << ','
           << (alpha < 0.0 ? "-1" : "1") << ','
           << format_double(std::abs(run.oracle.alpha_pred)) << '\n';
    }
}

void write_rg_csv(std::ostream& os, const std::vector<EigenvalueRow>& rows) {
    os << "n,lambda_measured,lambda_expected,abs_error\n";
    for (const auto& r : rows) {
        os << r.n << ',' << format_double(r.lambda_measured) << ','
           << format_double(r.lambda_expected) << ',' << format_double(r.abs_error)
           << '\n';
    }
}

}  // namespace nngp
