// Throughput comparison: serial reference loop vs the OpenMP chunked
// sampler, plus one convolution timing. Usage: bench_ensemble [n_samples].

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "nngp/rg.hpp"
#include "nngp/sampler.hpp"
#include "nngp/special.hpp"

namespace {

double seconds(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t n_samples = 2'000'000;
    if (argc > 1) n_samples = std::strtoull(argv[1], nullptr, 10);

    nngp::EnsembleSpec spec;
    spec.network.width = 128;
    spec.network.activation = nngp::Activation::relu;
    spec.x = 1.0;
    spec.n_samples = n_samples;
    spec.seed = 42;

    std::printf("ensemble: N=%llu, %llu samples\n",
                static_cast<unsigned long long>(spec.network.width),
                static_cast<unsigned long long>(n_samples));

    nngp::EnsembleSummary serial_out{nngp::MomentAccumulator{}, nngp::BinnedEcdf(-1, 1, 2)};
    const double t_serial =
        seconds([&] { serial_out = nngp::run_ensemble_serial(spec); });
    std::printf("%-18s %8.3f s  %7.2f Msamples/s\n", "serial reference", t_serial,
                n_samples / t_serial / 1e6);

    const int max_threads = omp_get_max_threads();
    for (int t = 1; t <= max_threads; t *= 2) {
        nngp::RunOptions opts;
        opts.threads = t;
        nngp::EnsembleSummary out{nngp::MomentAccumulator{}, nngp::BinnedEcdf(-1, 1, 2)};
        const double dt = seconds([&] { out = nngp::run_ensemble(spec, opts); });
        const bool ecdf_match = out.ecdf == serial_out.ecdf;
        std::printf("openmp %2d threads  %8.3f s  %7.2f Msamples/s  speedup %5.2fx  %s\n",
                    t, dt, n_samples / dt / 1e6, t_serial / dt,
                    ecdf_match ? "ecdf==serial" : "ECDF MISMATCH");
    }

    const auto gaussian = nngp::GriddedDensity::sample(
        [](double y) { return nngp::gaussian_pdf(y, 1.0); }, 12.0, 4096);
    const double t_conv = seconds([&] {
        auto g = gaussian;
        for (int i = 0; i < 10; ++i) g = nngp::renormalize(g);
    });
    std::printf("renormalize 4096-point grid: %.3f ms/application\n", t_conv * 100.0);
    return 0;
}
