#pragma once

#include <cstdint>
#include <span>

#include <nlohmann/json_fwd.hpp>

#include "nngp/ecdf.hpp"
#include "nngp/model.hpp"
#include "nngp/moments.hpp"

namespace nngp {

// Work units for parallel generation. Chunk boundaries depend only on the
// sample count, never on the worker count, so merges happen in a fixed
// order and results are bit-identical for any number of threads.
struct ChunkPlan {
    std::uint64_t chunk_size = 65536;
    std::uint64_t n_chunks = 1;

    static ChunkPlan for_samples(std::uint64_t n_samples,
                                 std::uint64_t chunk_size = 65536);
};

// y = sum_i v_i f(u_i x), no bias. Throws ShapeError on length mismatch.
double forward(const NetworkConfig& config, std::span<const double> u,
               std::span<const double> v, double x);

// Output of the network with index `stream_index` in the ensemble: draws
// the N hidden weights u first, then the N output weights v, from the
// Philox substream (spec.seed, stream_index). Bit-reproducible.
double sample_network_output(const EnsembleSpec& spec, std::uint64_t stream_index);

struct EnsembleSummary {
    MomentAccumulator moments;
    BinnedEcdf ecdf;
};

struct RunOptions {
    int threads = 0;                  // 0 = library default
    std::uint64_t chunk_size = 65536;
    std::uint64_t ecdf_bins = 4096;
    double ecdf_halfwidth_sigmas = 8.0;
    // Predicted output std for the histogram grid; 0 means "ask the
    // analytic oracle", keeping the grid independent of the samples.
    double grid_sigma = 0.0;
};

// OpenMP implementation. Feeds every index 0..n_samples-1 exactly once
// into the moment and ECDF sinks; per-chunk accumulators are merged in
// chunk order, so the result does not depend on the worker count.
EnsembleSummary run_ensemble(const EnsembleSpec& spec, const RunOptions& opts = {});

// Plain sequential loop with a single accumulator and no chunking. Kept
// as the reference implementation for tests and benchmarks; moments agree
// with run_ensemble to merge tolerance, ECDF counts agree exactly.
EnsembleSummary run_ensemble_serial(const EnsembleSpec& spec,
                                    const RunOptions& opts = {});

nlohmann::json summary_to_json(const EnsembleSummary& summary);

}  // namespace nngp
