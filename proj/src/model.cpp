#include "nngp/model.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nngp {

double apply_activation(Activation a, double s) {
    switch (a) {
        case Activation::relu: return s > 0.0 ? s : 0.0;
        case Activation::identity: return s;
        case Activation::tanh_: return std::tanh(s);
    }
    throw std::logic_error("apply_activation: unknown activation");
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::identity: return "identity";
        case Activation::tanh_: return "tanh";
    }
    throw std::logic_error("to_string: unknown activation");
}

Activation activation_from_string(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "identity") return Activation::identity;
    if (name == "tanh") return Activation::tanh_;
    throw std::invalid_argument("unknown activation '" + name + "'");
}

double ResolvedInit::variance() const {
    return family == Family::uniform ? scale * scale / 3.0 : scale * scale;
}

double glorot_limit(std::uint64_t fan_in, std::uint64_t fan_out) {
    if (fan_in == 0 || fan_out == 0) {
        throw std::invalid_argument("glorot_limit: fans must be >= 1");
    }
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

ResolvedInit resolve_init(const InitScheme& scheme, std::uint64_t fan_in,
                          std::uint64_t fan_out) {
    switch (scheme.kind) {
        case InitScheme::Kind::glorot_uniform:
            return {ResolvedInit::Family::uniform, glorot_limit(fan_in, fan_out)};
        case InitScheme::Kind::uniform:
            if (!(scheme.param > 0.0) || !std::isfinite(scheme.param)) {
                throw std::invalid_argument("uniform init limit must be positive and finite");
            }
            return {ResolvedInit::Family::uniform, scheme.param};
        case InitScheme::Kind::normal:
            if (!(scheme.param > 0.0) || !std::isfinite(scheme.param)) {
                throw std::invalid_argument("normal init std must be positive and finite");
            }
            return {ResolvedInit::Family::normal, scheme.param};
    }
    throw std::logic_error("resolve_init: unknown scheme");
}

namespace {

void validate_scheme(const InitScheme& s, const char* layer,
                     std::vector<std::string>& out) {
    if (s.kind != InitScheme::Kind::glorot_uniform &&
        (!(s.param > 0.0) || !std::isfinite(s.param))) {
        out.push_back(std::string(layer) + " init scale must be positive and finite");
    }
}

}  // namespace

std::vector<std::string> validate_spec(const EnsembleSpec& spec) {
    std::vector<std::string> violations;
    if (spec.network.width == 0) violations.push_back("width must be >= 1");
    if (spec.n_samples == 0) violations.push_back("n_samples must be >= 1");
    if (!std::isfinite(spec.x)) violations.push_back("probe input must be finite");
    validate_scheme(spec.network.init_hidden, "hidden", violations);
    validate_scheme(spec.network.init_output, "output", violations);
    return violations;
}

std::string scheme_to_string(const InitScheme& scheme) {
    switch (scheme.kind) {
        case InitScheme::Kind::glorot_uniform: return "glorot_uniform";
        case InitScheme::Kind::uniform: return "uniform:" + std::to_string(scheme.param);
        case InitScheme::Kind::normal: return "normal:" + std::to_string(scheme.param);
    }
    throw std::logic_error("scheme_to_string: unknown scheme");
}

InitScheme scheme_from_string(const std::string& text) {
    if (text == "glorot_uniform") return InitScheme::glorot();
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head != "uniform" && head != "normal") {
        throw std::invalid_argument("unknown init scheme '" + text + "'");
    }
    if (colon == std::string::npos) {
        throw std::invalid_argument("init scheme '" + head + "' needs a parameter, e.g. " +
                                    head + ":1.0");
    }
    double param = 0.0;
    try {
        param = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad init parameter in '" + text + "'");
    }
    return head == "uniform" ? InitScheme::uniform(param) : InitScheme::normal(param);
}

void to_json(nlohmann::json& j, const InitScheme& s) {
    switch (s.kind) {
        case InitScheme::Kind::glorot_uniform:
            j = nlohmann::json{{"kind", "glorot_uniform"}};
            return;
        case InitScheme::Kind::uniform:
            j = nlohmann::json{{"kind", "uniform"}, {"limit", s.param}};
            return;
        case InitScheme::Kind::normal:
            j = nlohmann::json{{"kind", "normal"}, {"std", s.param}};
            return;
    }
}

void from_json(const nlohmann::json& j, InitScheme& s) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "glorot_uniform") {
        s = InitScheme::glorot();
    } else if (kind == "uniform") {
        s = InitScheme::uniform(j.at("limit").get<double>());
    } else if (kind == "normal") {
        s = InitScheme::normal(j.at("std").get<double>());
    } else {
        throw std::invalid_argument("unknown init scheme kind '" + kind + "'");
    }
}

void to_json(nlohmann::json& j, const EnsembleSpec& spec) {
    j = nlohmann::json{{"width", spec.network.width},
                       {"activation", to_string(spec.network.activation)},
                       {"init_hidden", spec.network.init_hidden},
                       {"init_output", spec.network.init_output},
                       {"x", spec.x},
                       {"n_samples", spec.n_samples},
                       {"seed", spec.seed}};
}

void from_json(const nlohmann::json& j, EnsembleSpec& spec) {
    spec.network.width = j.at("width").get<std::uint64_t>();
    spec.network.activation = activation_from_string(j.at("activation").get<std::string>());
    spec.network.init_hidden = j.at("init_hidden").get<InitScheme>();
    spec.network.init_output = j.at("init_output").get<InitScheme>();
    spec.x = j.at("x").get<double>();
    spec.n_samples = j.at("n_samples").get<std::uint64_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
}

}  // namespace nngp
