#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nngp/run.hpp"
#include "nngp/special.hpp"

namespace nngp {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Exit-2 failures: bad flags, bad config files, specs that fail validation.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t width = 0;
    std::string activation;
    std::string init;
    std::string init_hidden;
    std::string init_output;
    double x = 0.0;

    CLI::Option* o_seed = nullptr;
    CLI::Option* o_samples = nullptr;
    CLI::Option* o_width = nullptr;
    CLI::Option* o_activation = nullptr;
    CLI::Option* o_init = nullptr;
    CLI::Option* o_init_hidden = nullptr;
    CLI::Option* o_init_output = nullptr;
    CLI::Option* o_x = nullptr;

    void attach(CLI::App* cmd, bool with_sampling) {
        cmd->add_option("--config", config_path, "EnsembleSpec JSON file; explicit flags override");
        o_width = cmd->add_option("--width", width, "hidden units N");
        o_activation = cmd->add_option("--activation", activation, "relu|identity|tanh");
        o_init = cmd->add_option("--init", init,
                                 "init for both layers: glorot_uniform|uniform:L|normal:S");
        o_init_hidden = cmd->add_option("--init-hidden", init_hidden, "hidden-layer init override");
        o_init_output = cmd->add_option("--init-output", init_output, "output-layer init override");
        o_x = cmd->add_option("--x", x, "probe input");
        if (with_sampling) {
            o_samples = cmd->add_option("--samples", samples, "ensemble size");
            o_seed = cmd->add_option("--seed", seed, "master seed");
        }
    }

    EnsembleSpec build(const EnsembleSpec& defaults) const {
        EnsembleSpec spec = defaults;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw UsageError("cannot read config file '" + config_path + "'");
            nlohmann::json j;
            try {
                in >> j;
                spec = j.get<EnsembleSpec>();
            } catch (const std::exception& e) {
                throw UsageError("bad config file '" + config_path + "': " + e.what());
            }
        }
        try {
            if (o_width && o_width->count()) spec.network.width = width;
            if (o_activation && o_activation->count()) {
                spec.network.activation = activation_from_string(activation);
            }
            if (o_init && o_init->count()) {
                spec.network.init_hidden = scheme_from_string(init);
                spec.network.init_output = scheme_from_string(init);
            }
            if (o_init_hidden && o_init_hidden->count()) {
                spec.network.init_hidden = scheme_from_string(init_hidden);
            }
            if (o_init_output && o_init_output->count()) {
                spec.network.init_output = scheme_from_string(init_output);
            }
            if (o_x && o_x->count()) spec.x = x;
            if (o_samples && o_samples->count()) spec.n_samples = samples;
            if (o_seed && o_seed->count()) spec.seed = seed;
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        const auto violations = validate_spec(spec);
        if (!violations.empty()) {
            std::string msg = "invalid spec:";
            for (const auto& v : violations) msg += "\n  " + v;
            throw UsageError(msg);
        }
        return spec;
    }
};

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << text;
    os.flush();
    if (!os.good()) throw std::runtime_error("write failure on '" + path.string() + "'");
}

std::string csv_string(const std::function<void(std::ostream&)>& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

int cmd_simulate(const SpecFlags& flags, const std::string& out_dir, int threads,
                 bool weighted) {
    EnsembleSpec defaults;
    defaults.network.width = 128;
    defaults.network.activation = Activation::relu;
    defaults.x = 1.0;
    defaults.n_samples = 1'000'000;
    defaults.seed = 42;
    const EnsembleSpec spec = flags.build(defaults);

    SimulateOptions opts;
    opts.threads = threads;
    opts.weighted_fit = weighted;
    const RunArtifact artifact = simulate_run(spec, opts);

    const auto dir = prepare_out_dir(out_dir);
    write_text_file(dir / "run.json", artifact_to_json(artifact).dump(2) + "\n");
    write_text_file(dir / "fig1.csv",
                    csv_string([&](std::ostream& os) { write_fig1_csv(os, artifact); }));

    const auto fin = artifact.summary.moments.finalize();
    std::cout << "samples " << artifact.summary.moments.count() << "  variance "
              << format_double(fin.variance) << " (predicted "
              << format_double(artifact.oracle.sigma2_pred) << ")\n"
              << "alpha " << format_double(artifact.fit.alpha) << " (predicted "
              << format_double(artifact.oracle.alpha_pred) << ")  correlation "
              << format_double(artifact.fit.correlation) << "\n"
              << "wrote " << (dir / "run.json").string() << ", "
              << (dir / "fig1.csv").string() << "\n";
    return kExitOk;
}

int cmd_sweep(SweepOptions opts, const std::string& out_dir) {
    const SweepResult result = run_sweep(opts);

    const auto dir = prepare_out_dir(out_dir);
    write_text_file(dir / "sweep.json",
                    nlohmann::json(result.power_law).dump(2) + "\n");
    write_text_file(dir / "fig2.csv",
                    csv_string([&](std::ostream& os) { write_fig2_csv(os, result); }));
    std::cout << "widths " << result.runs.size() << "  exponent "
              << format_double(result.power_law.exponent) << "  r^2 "
              << format_double(result.power_law.r_squared) << "\n"
              << "wrote " << (dir / "sweep.json").string() << ", "
              << (dir / "fig2.csv").string() << "\n";
    return kExitOk;
}

int cmd_predict(const SpecFlags& flags, const std::string& out_dir) {
    EnsembleSpec defaults;
    defaults.network.width = 128;
    defaults.x = 1.0;
    const EnsembleSpec spec = flags.build(defaults);
    const OraclePrediction prediction = predict(spec.network, spec.x);
    const std::string text = nlohmann::json(prediction).dump(2) + "\n";
    const auto dir = prepare_out_dir(out_dir);
    write_text_file(dir / "predict.json", text);
    std::cout << text;
    return kExitOk;
}

int cmd_rg(double epsilon, std::uint64_t n_points, double hi, const std::string& out_dir) {
    RgGrid grid{hi, n_points};
    const auto rows = rg_spectrum(epsilon, grid);

    const auto gaussian = GriddedDensity::sample(
        [](double y) { return gaussian_pdf(y, 1.0); }, grid.hi, grid.n_points);
    const double fixed_point_defect = renormalize(gaussian).sup_distance(gaussian);

    const auto dir = prepare_out_dir(out_dir);
    write_text_file(dir / "rg.csv",
                    csv_string([&](std::ostream& os) { write_rg_csv(os, rows); }));
    for (const auto& r : rows) {
        std::cout << "n=" << r.n << "  measured " << format_double(r.lambda_measured)
                  << "  expected " << format_double(r.lambda_expected) << "  |err| "
                  << format_double(r.abs_error) << "\n";
    }
    std::cout << "gaussian fixed-point sup defect " << format_double(fixed_point_defect)
              << "\nwrote " << (dir / "rg.csv").string() << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"finite-width deviations of one-hidden-layer network output "
                 "distributions from their Gaussian limit"};
    app.name("nngp");
    app.require_subcommand(1);

    std::string out_dir = ".";
    int threads = 0;
    bool weighted = false;

    auto* simulate = app.add_subcommand("simulate", "run one ensemble, fit the deviation");
    SpecFlags sim_flags;
    sim_flags.attach(simulate, /*with_sampling=*/true);
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--threads", threads, "worker count (never changes results)");
    simulate->add_flag("--weighted-fit", weighted, "variance-weighted least squares");

    auto* sweep = app.add_subcommand("sweep", "fit the deviation across a width range");
    SweepOptions sweep_opts;
    std::string sweep_activation = "relu";
    std::string sweep_init = "glorot_uniform";
    std::string sweep_init_hidden, sweep_init_output;
    sweep->add_option("--width-min", sweep_opts.width_min, "first width")
        ->capture_default_str();
    sweep->add_option("--width-max", sweep_opts.width_max, "last width")
        ->capture_default_str();
    sweep->add_option("--width-step", sweep_opts.width_step, "width increment")
        ->capture_default_str();
    sweep->add_option("--samples", sweep_opts.n_samples, "ensemble size per width")
        ->capture_default_str();
    sweep->add_option("--seed", sweep_opts.seed, "base seed; per-width seed = seed + width")
        ->capture_default_str();
    sweep->add_option("--activation", sweep_activation, "relu|identity|tanh")
        ->capture_default_str();
    sweep->add_option("--init", sweep_init, "init for both layers")->capture_default_str();
    sweep->add_option("--init-hidden", sweep_init_hidden, "hidden-layer init override");
    sweep->add_option("--init-output", sweep_init_output, "output-layer init override");
    sweep->add_option("--x", sweep_opts.x, "probe input")->capture_default_str();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--threads", sweep_opts.threads, "worker count");
    sweep->add_flag("--weighted-fit", sweep_opts.weighted_fit,
                    "variance-weighted least squares");

    auto* predict_cmd = app.add_subcommand("predict", "analytic oracle only, no sampling");
    SpecFlags predict_flags;
    predict_flags.attach(predict_cmd, /*with_sampling=*/false);
    predict_cmd->add_option("--out", out_dir, "output directory");

    auto* rg = app.add_subcommand("rg", "fixed-point and eigenvalue table");
    double rg_epsilon = 1e-4;
    std::uint64_t rg_points = 4096;
    double rg_hi = 12.0;
    rg->add_option("--epsilon", rg_epsilon, "perturbation amplitude")->capture_default_str();
    rg->add_option("--n-points", rg_points, "grid points (power of two)")
        ->capture_default_str();
    rg->add_option("--hi", rg_hi, "grid half-width in standard deviations")
        ->capture_default_str();
    rg->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim_flags, out_dir, threads, weighted);
        if (sweep->parsed()) {
            try {
                sweep_opts.activation = activation_from_string(sweep_activation);
                sweep_opts.init_hidden = scheme_from_string(sweep_init);
                sweep_opts.init_output = sweep_opts.init_hidden;
                if (!sweep_init_hidden.empty()) {
                    sweep_opts.init_hidden = scheme_from_string(sweep_init_hidden);
                }
                if (!sweep_init_output.empty()) {
                    sweep_opts.init_output = scheme_from_string(sweep_init_output);
                }
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            return cmd_sweep(sweep_opts, out_dir);
        }
        if (predict_cmd->parsed()) return cmd_predict(predict_flags, out_dir);
        if (rg->parsed()) return cmd_rg(rg_epsilon, rg_points, rg_hi, out_dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace nngp
