#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace nngp {

// Scalar activation applied element-wise to the hidden pre-activations.
enum class Activation { relu, identity, tanh_ };

double apply_activation(Activation a, double s);

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// Weight initialization scheme for one layer. glorot_uniform carries no
// parameter; its limit is derived from the layer fan at resolve time.
struct InitScheme {
    enum class Kind { glorot_uniform, uniform, normal };
    Kind kind = Kind::glorot_uniform;
    double param = 0.0;  // limit for uniform, std for normal, unused for glorot

    static InitScheme glorot() { return {Kind::glorot_uniform, 0.0}; }
    static InitScheme uniform(double limit) { return {Kind::uniform, limit}; }
    static InitScheme normal(double std_dev) { return {Kind::normal, std_dev}; }

    bool operator==(const InitScheme&) const = default;
};

// A scheme with the fan dependence resolved away: a concrete zero-mean
// symmetric distribution, either U(-scale, scale) or N(0, scale^2).
struct ResolvedInit {
    enum class Family { uniform, normal };
    Family family = Family::uniform;
    double scale = 0.0;  // uniform limit or normal std, always > 0

    double variance() const;

    bool operator==(const ResolvedInit&) const = default;
};

// Uniform init limit sqrt(6 / (fan_in + fan_out)).
double glorot_limit(std::uint64_t fan_in, std::uint64_t fan_out);

// Turns a scheme into a concrete distribution for a layer with the given
// fan. Throws std::invalid_argument for non-positive explicit scales.
ResolvedInit resolve_init(const InitScheme& scheme, std::uint64_t fan_in,
                          std::uint64_t fan_out);

struct NetworkConfig {
    std::uint64_t width = 1;  // hidden units N
    Activation activation = Activation::relu;
    InitScheme init_hidden = InitScheme::glorot();
    InitScheme init_output = InitScheme::glorot();

    bool operator==(const NetworkConfig&) const = default;
};

// Everything needed to reproduce one ensemble experiment bit-for-bit.
struct EnsembleSpec {
    NetworkConfig network;
    double x = 1.0;  // probe input
    std::uint64_t n_samples = 1;
    std::uint64_t seed = 0;

    bool operator==(const EnsembleSpec&) const = default;
};

// Returns every invariant violation; empty means the experiment is runnable.
std::vector<std::string> validate_spec(const EnsembleSpec& spec);

std::string scheme_to_string(const InitScheme& scheme);
InitScheme scheme_from_string(const std::string& text);

void to_json(nlohmann::json& j, const InitScheme& s);
void from_json(const nlohmann::json& j, InitScheme& s);
void to_json(nlohmann::json& j, const EnsembleSpec& spec);
void from_json(const nlohmann::json& j, EnsembleSpec& spec);

}  // namespace nngp
