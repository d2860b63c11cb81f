#include "tensorlab/experiments.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace tensorlab {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "experiment", "dims",         "ranks",       "n_convention", "n_param",
    "omega",      "omega_grid",   "n_grid",      "trials",       "base_seed",
    "tol",        "max_iter",     "epsilon_outlier", "c_universal", "delta",
    "s_sq",       "output_path",
};

ExperimentKind parse_kind(const std::string& s) {
    if (s == "esd") return ExperimentKind::esd;
    if (s == "alignment_sweep") return ExperimentKind::alignment_sweep;
    if (s == "hooi_scaling") return ExperimentKind::hooi_scaling;
    if (s == "predict") return ExperimentKind::predict;
    throw ConfigError("unknown experiment '" + s + "'");
}

NConvention parse_convention(const std::string& s) {
    if (s == "sum_dims") return NConvention::sum_dims;
    if (s == "first_dim") return NConvention::first_dim;
    if (s == "custom") return NConvention::custom;
    throw ConfigError("unknown n_convention '" + s + "'");
}

template <class T>
std::vector<T> as_vector(const json& j, const std::string& key) {
    if (!j.is_array()) throw ConfigError("'" + key + "' must be an array");
    std::vector<T> out;
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError("'" + key + "' entries must be numbers");
        out.push_back(e.get<T>());
    }
    return out;
}

}  // namespace

Index ExperimentConfig::resolved_n() const {
    switch (n_convention) {
        case NConvention::sum_dims: {
            Index sum = 0;
            for (Index d : dims) sum += d;
            return sum;
        }
        case NConvention::first_dim:
            return dims.empty() ? 0 : dims.front();
        case NConvention::custom:
            return n_param;
    }
    return 0;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    for (const auto& [key, _] : j.items()) {
        if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }

    ExperimentConfig cfg;
    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        throw ConfigError("'experiment' is required and must be a string");
    }
    cfg.experiment = parse_kind(j["experiment"].get<std::string>());

    if (!j.contains("dims")) throw ConfigError("'dims' is required");
    cfg.dims = as_vector<Index>(j["dims"], "dims");
    if (j.contains("ranks")) cfg.ranks = as_vector<Index>(j["ranks"], "ranks");
    if (j.contains("n_convention")) {
        cfg.n_convention = parse_convention(j["n_convention"].get<std::string>());
    }
    if (j.contains("n_param")) cfg.n_param = j["n_param"].get<Index>();
    if (j.contains("omega")) cfg.omega = j["omega"].get<double>();
    if (j.contains("omega_grid")) cfg.omega_grid = as_vector<double>(j["omega_grid"], "omega_grid");
    if (j.contains("n_grid")) cfg.n_grid = as_vector<Index>(j["n_grid"], "n_grid");
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("max_iter")) cfg.max_iter = j["max_iter"].get<int>();
    if (j.contains("epsilon_outlier")) cfg.epsilon_outlier = j["epsilon_outlier"].get<double>();
    if (j.contains("c_universal")) cfg.c_universal = j["c_universal"].get<double>();
    if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
    if (j.contains("s_sq")) cfg.s_sq = as_vector<double>(j["s_sq"], "s_sq");
    if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();

    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.dims.empty()) throw ConfigError("'dims' must be non-empty");
    for (Index d : cfg.dims) {
        if (d < 1) throw ConfigError("'dims' entries must be >= 1");
    }
    if (cfg.experiment != ExperimentKind::predict || !cfg.ranks.empty()) {
        if (cfg.ranks.size() != cfg.dims.size()) {
            throw ConfigError("'ranks' must match 'dims' in length");
        }
        for (std::size_t l = 0; l < cfg.ranks.size(); ++l) {
            if (cfg.ranks[l] < 1) throw ConfigError("'ranks' entries must be >= 1");
            // The scaling experiment treats dims as ratios; per-N shapes are
            // validated when they are materialized.
            if (cfg.experiment != ExperimentKind::hooi_scaling && cfg.ranks[l] > cfg.dims[l]) {
                throw ConfigError("rank exceeds dimension");
            }
        }
    }
    if (cfg.experiment != ExperimentKind::predict && cfg.ranks.empty()) {
        throw ConfigError("'ranks' is required");
    }
    if (cfg.n_convention == NConvention::custom && cfg.n_param < 1) {
        throw ConfigError("'n_param' must be >= 1 with the custom convention");
    }
    if (cfg.trials < 1) throw ConfigError("'trials' must be >= 1");
    if (cfg.tol <= 0.0) throw ConfigError("'tol' must be positive");
    if (cfg.max_iter < 1) throw ConfigError("'max_iter' must be >= 1");
    if (cfg.epsilon_outlier <= 0.0) throw ConfigError("'epsilon_outlier' must be positive");
    if (cfg.c_universal <= 0.0) throw ConfigError("'c_universal' must be positive");
    if (cfg.delta <= 0.0 || cfg.delta >= 1.0) throw ConfigError("'delta' must lie in (0, 1)");
    if (cfg.omega < 0.0) throw ConfigError("'omega' must be >= 0");
    for (double w : cfg.omega_grid) {
        if (w < 0.0) throw ConfigError("'omega_grid' entries must be >= 0");
    }
    for (double s : cfg.s_sq) {
        if (s < 0.0) throw ConfigError("'s_sq' entries must be >= 0");
    }

    switch (cfg.experiment) {
        case ExperimentKind::esd:
            break;  // omega = 0 is the pure-noise run

        case ExperimentKind::alignment_sweep:
            if (cfg.omega_grid.empty()) throw ConfigError("alignment_sweep requires 'omega_grid'");
            break;
        case ExperimentKind::hooi_scaling:
            if (cfg.omega <= 0.0) throw ConfigError("hooi_scaling requires 'omega' > 0");
            if (cfg.n_grid.empty()) throw ConfigError("hooi_scaling requires 'n_grid'");
            for (Index n : cfg.n_grid) {
                if (n < 1) throw ConfigError("'n_grid' entries must be >= 1");
            }
            break;
        case ExperimentKind::predict:
            break;
    }
}

void apply_profile(ExperimentConfig& cfg, const std::string& profile) {
    const bool small = profile == "small";
    if (!small && profile != "paper") {
        throw ConfigError("unknown profile '" + profile + "' (expected small|paper)");
    }
    switch (cfg.experiment) {
        case ExperimentKind::esd:
            cfg.dims = small ? std::vector<Index>{60, 100, 140} : std::vector<Index>{300, 500, 700};
            break;
        case ExperimentKind::alignment_sweep:
            cfg.dims = small ? std::vector<Index>{50, 100, 150} : std::vector<Index>{100, 200, 300};
            break;
        case ExperimentKind::hooi_scaling:
            cfg.dims = {1, 2, 3};
            cfg.n_grid = small ? std::vector<Index>{60, 120, 240}
                               : std::vector<Index>{120, 240, 480, 960};
            break;
        case ExperimentKind::predict:
            break;
    }
    validate(cfg);
}

void apply_env_overrides(ExperimentConfig& cfg) {
    const char* env = std::getenv("TENSORLAB_SEED");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') {
        throw ConfigError("TENSORLAB_SEED must be an unsigned integer");
    }
    cfg.base_seed = static_cast<std::uint64_t>(v);
}

}  // namespace tensorlab
