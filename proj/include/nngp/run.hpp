#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nngp/edgeworth.hpp"
#include "nngp/format.hpp"
#include "nngp/oracle.hpp"
#include "nngp/rg.hpp"
#include "nngp/sampler.hpp"

namespace nngp {

// Self-describing result of one ensemble experiment: re-running the
// embedded spec reproduces the summary bit-for-bit.
struct RunArtifact {
    EnsembleSpec spec;
    EnsembleSummary summary;
    EdgeworthFit fit;
    OraclePrediction oracle;
    std::string tool_version;
    double wall_time_seconds = 0.0;
};

struct SimulateOptions {
    int threads = 0;
    bool weighted_fit = false;
};

RunArtifact simulate_run(const EnsembleSpec& spec, const SimulateOptions& opts = {});

// wall_time_seconds is informational; with_wall_time=false omits it so
// artifacts can be compared byte-for-byte.
nlohmann::json artifact_to_json(const RunArtifact& artifact,
                                bool with_wall_time = true);

struct SweepOptions {
    std::uint64_t width_min = 8;
    std::uint64_t width_max = 148;
    std::uint64_t width_step = 8;
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;  // per-width master seed = seed + width
    Activation activation = Activation::relu;
    InitScheme init_hidden = InitScheme::glorot();
    InitScheme init_output = InitScheme::glorot();
    double x = 1.0;
    int threads = 0;
    bool weighted_fit = false;
};

struct SweepResult {
    std::vector<RunArtifact> runs;
    PowerLawFit power_law;
};

SweepResult run_sweep(const SweepOptions& opts);

struct EigenvalueRow {
    int n;
    double lambda_measured;
    double lambda_expected;
    double abs_error;
};

std::vector<EigenvalueRow> rg_spectrum(double epsilon = 1e-4,
                                       const RgGrid& grid = {});

// fig1.csv: z,ecdf_diff,model_diff
void write_fig1_csv(std::ostream& os, const RunArtifact& artifact);
// fig2.csv: width,alpha_abs,alpha_sign,pred_alpha_abs
void write_fig2_csv(std::ostream& os, const SweepResult& sweep);
// rg.csv: n,lambda_measured,lambda_expected,abs_error
void write_rg_csv(std::ostream& os, const std::vector<EigenvalueRow>& rows);


int run_cli(int argc, const char* const* argv);

}  // namespace nngp
