#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nngp/run.hpp"
#include "nngp/sampler.hpp"

using namespace nngp;
namespace fs = std::filesystem;

namespace {

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"nngp"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("nngp_cli_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("usage errors exit 2 before any computation") {
    CHECK(cli({}) == 2);
    CHECK(cli({"frobnicate"}) == 2);
    CHECK(cli({"simulate", "--no-such-flag"}) == 2);
    CHECK(cli({"simulate", "--samples", "0", "--width", "8"}) == 2);
    CHECK(cli({"simulate", "--width", "0", "--samples", "100"}) == 2);
    CHECK(cli({"simulate", "--activation", "gelu"}) == 2);
    CHECK(cli({"predict", "--init", "uniform:-1"}) == 2);
    CHECK(cli({"simulate", "--config", "/no/such/file.json"}) == 2);
    CHECK(cli({"--help"}) == 0);
}

TEST_CASE("predict writes and prints the oracle record") {
    const auto dir = fresh_dir("predict");
    CHECK(cli({"predict", "--width", "128", "--activation", "relu", "--init",
               "glorot_uniform", "--x", "1", "--out", dir.string()}) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "predict.json"));
    CHECK(j["sigma2_pred"].get<double>() == doctest::Approx(0.0153836909).epsilon(1e-8));
    CHECK(j["alpha_pred"].get<double>() == doctest::Approx(-1.1328125e-3).epsilon(1e-8));
    CHECK(j["method"] == "closed_form");
}

TEST_CASE("rg emits the spectrum table") {
    const auto dir = fresh_dir("rg");
    CHECK(cli({"rg", "--out", dir.string()}) == 0);
    const auto text = slurp(dir / "rg.csv");
    CHECK(first_line(text) == "n,lambda_measured,lambda_expected,abs_error");
    // Row n = 4: measured within 1e-3 of 0.5.
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    int rows = 0;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string n_str, measured_str, expected_str, err_str;
        std::getline(fields, n_str, ',');
        std::getline(fields, measured_str, ',');
        std::getline(fields, expected_str, ',');
        std::getline(fields, err_str, ',');
        if (n_str == "4") {
            CHECK(std::stod(measured_str) == doctest::Approx(0.5).epsilon(2e-3));
            CHECK(std::stod(expected_str) == 0.5);
            CHECK(std::stod(err_str) < 1e-3);
        }
        ++rows;
    }
    CHECK(rows == 7);
}

TEST_CASE("simulate writes a reproducible artifact") {
    const auto dir = fresh_dir("simulate");
    CHECK(cli({"simulate", "--width", "16", "--samples", "200000", "--seed", "9", "--x",
               "1", "--out", dir.string(), "--threads", "2"}) == 0);
    const auto run = nlohmann::json::parse(slurp(dir / "run.json"));
    for (const char* key :
         {"spec", "summary", "fit", "oracle", "tool_version", "wall_time_seconds"}) {
        CHECK(run.contains(key));
    }
    CHECK(first_line(slurp(dir / "fig1.csv")) == "z,ecdf_diff,model_diff");

    // Re-running the embedded spec reproduces the summary bit-for-bit.
    const auto spec = run["spec"].get<EnsembleSpec>();
    const auto replay = run_ensemble(spec);
    CHECK(summary_to_json(replay) == run["summary"]);
}

TEST_CASE("thread count changes nothing but the wall time") {
    const auto dir1 = fresh_dir("threads1");
    const auto dir8 = fresh_dir("threads8");
    const std::vector<std::string> base{"simulate", "--width", "16",     "--samples",
                                        "120000",   "--seed",  "31337", "--x",
                                        "0.5"};
    auto with = [&](const fs::path& dir, const char* threads) {
        auto args = base;
        args.insert(args.end(), {"--out", dir.string(), "--threads", threads});
        return args;
    };
    CHECK(cli(with(dir1, "1")) == 0);
    CHECK(cli(with(dir8, "8")) == 0);
    auto j1 = nlohmann::json::parse(slurp(dir1 / "run.json"));
    auto j8 = nlohmann::json::parse(slurp(dir8 / "run.json"));
    j1.erase("wall_time_seconds");
    j8.erase("wall_time_seconds");
    CHECK(j1.dump() == j8.dump());
    CHECK(slurp(dir1 / "fig1.csv") == slurp(dir8 / "fig1.csv"));
}

TEST_CASE("config file with flag overrides") {
    const auto dir = fresh_dir("config");
    EnsembleSpec spec;
    spec.network.width = 8;
    spec.network.activation = Activation::identity;
    spec.network.init_hidden = InitScheme::uniform(1.0);
    spec.network.init_output = InitScheme::uniform(1.0);
    spec.x = 1.0;
    spec.n_samples = 50'000;
    spec.seed = 4;
    {
        std::ofstream os(dir / "spec.json");
        os << nlohmann::json(spec).dump(2);
    }
    CHECK(cli({"simulate", "--config", (dir / "spec.json").string(), "--width", "12",
               "--out", dir.string()}) == 0);
    const auto run = nlohmann::json::parse(slurp(dir / "run.json"));
    CHECK(run["spec"]["width"] == 12);             // flag wins
    CHECK(run["spec"]["activation"] == "identity");  // config survives
    CHECK(run["spec"]["n_samples"] == 50'000);
}

TEST_CASE("sweep emits fig2 and the power-law fit") {
    const auto dir = fresh_dir("sweep");
    CHECK(cli({"sweep", "--width-min", "8", "--width-max", "32", "--width-step", "8",
               "--samples", "200000", "--seed", "2024", "--out", dir.string()}) == 0);
    const auto fig2 = slurp(dir / "fig2.csv");
    CHECK(first_line(fig2) == "width,alpha_abs,alpha_sign,pred_alpha_abs");

    std::istringstream lines(fig2);
    std::string line;
    std::getline(lines, line);
    double prev_pred = 1e9;
    int rows = 0;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string w, a_abs, a_sign, pred;
        std::getline(fields, w, ',');
        std::getline(fields, a_abs, ',');
        std::getline(fields, a_sign, ',');
        std::getline(fields, pred, ',');
        CHECK(a_sign == "-1");  // relu kurtosis is positive, alpha negative
        CHECK(std::stod(pred) < prev_pred);  // oracle column: exactly monotone
        prev_pred = std::stod(pred);
        ++rows;
    }
    CHECK(rows == 4);

    const auto sweep = nlohmann::json::parse(slurp(dir / "sweep.json"));
    for (const char* key : {"exponent", "log_prefactor", "r_squared"}) {
        CHECK(sweep.contains(key));
    }
    CHECK(sweep.size() == 3);
    // Coarse run: just bracket the inverse-width trend loosely.
    CHECK(sweep["exponent"].get<double>() < -0.6);
    CHECK(sweep["exponent"].get<double>() > -1.6);
}

TEST_CASE("empty sweep exits 1 with no fit points") {
    CHECK(cli({"sweep", "--width-min", "64", "--width-max", "8"}) == 1);
}

TEST_CASE("malformed invocations exit 2 without touching the output dir") {
    const auto dir = fs::temp_directory_path() / "nngp_cli_test_untouched";
    fs::remove_all(dir);
    const std::vector<std::vector<std::string>> bad = {
        {"simulate", "--samples"},                     // missing value
        {"simulate", "--samples", "many"},             // not a number
        {"simulate", "--width", "-3"},                 // negative width
        {"simulate", "--init", "uniform:zero"},        // bad init parameter
        {"simulate", "--init", "uniform:0"},           // degenerate scale
        {"simulate", "--x", "nan"},                    // non-finite probe
        {"sweep", "--width-step", "eight"},            // not a number
        {"predict", "--activation", ""},               // empty name
        {"rg", "--bogus"},                             // unknown flag
        {"simulate", "extra_positional"},              // stray argument
    };
    for (const auto& args : bad) {
        auto with_out = args;
        with_out.insert(with_out.end(), {"--out", dir.string()});
        CHECK(cli(with_out) == 2);
        CHECK(!fs::exists(dir));  // rejected before any computation or output
    }
}
