#include "nsc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nsc {
namespace {

using nlohmann::json;

Vec3 vec_from(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string(where) + ": expected an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg;
    read_if(j, "nu", cfg.nu);
    read_if(j, "p", cfg.p);
    read_if(j, "alpha", cfg.alpha);
    read_if(j, "beta", cfg.beta);
    read_if(j, "epsilon", cfg.epsilon);
    read_if(j, "mode", cfg.mode);
    read_if(j, "n", cfg.n);
    read_if(j, "seed", cfg.seed);
    read_if(j, "workers", cfg.workers);
    read_if(j, "depth_cap", cfg.depth_cap);
    if (j.contains("kernel")) {
        const json& k = j.at("kernel");
        read_if(k, "name", cfg.kernel.name);
        read_if(k, "c_h", cfg.kernel.c_h);
        read_if(k, "c_ht", cfg.kernel.c_ht);
        read_if(k, "profile", cfg.kernel.profile);
        read_if(k, "p", cfg.kernel.p);
        read_if(k, "standardize", cfg.kernel.standardize);
    }
    if (j.contains("u0")) {
        const json& k = j.at("u0");
        read_if(k, "fixture", cfg.u0.fixture);
        read_if(k, "delta", cfg.u0.delta);
        read_if(k, "sigma", cfg.u0.sigma);
        if (k.contains("axis")) cfg.u0.axis = vec_from(k.at("axis"), "u0.axis");
    }
    if (j.contains("forcing")) {
        const json& k = j.at("forcing");
        read_if(k, "fixture", cfg.forcing.fixture);
        read_if(k, "amplitude", cfg.forcing.amplitude);
        read_if(k, "lambda", cfg.forcing.lambda);
        if (k.contains("axis")) cfg.forcing.axis = vec_from(k.at("axis"), "forcing.axis");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not readable: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["nu"] = cfg.nu;
    j["p"] = cfg.p;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["epsilon"] = cfg.epsilon;
    j["mode"] = cfg.mode;
    j["n"] = cfg.n;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["depth_cap"] = cfg.depth_cap;
    j["kernel"] = {{"name", cfg.kernel.name},   {"c_h", cfg.kernel.c_h},
                   {"c_ht", cfg.kernel.c_ht},   {"profile", cfg.kernel.profile},
                   {"p", cfg.kernel.p},         {"standardize", cfg.kernel.standardize}};
    j["u0"] = {{"fixture", cfg.u0.fixture},
               {"delta", cfg.u0.delta},
               {"sigma", cfg.u0.sigma},
               {"axis", {cfg.u0.axis.x1, cfg.u0.axis.x2, cfg.u0.axis.x3}}};
    j["forcing"] = {{"fixture", cfg.forcing.fixture},
                    {"amplitude", cfg.forcing.amplitude},
                    {"lambda", cfg.forcing.lambda},
                    {"axis", {cfg.forcing.axis.x1, cfg.forcing.axis.x2, cfg.forcing.axis.x3}}};
    return j.dump();  // nlohmann objects keep keys sorted
}

std::string config_hash(const RunConfig& cfg) {
    // workers is execution topology, not part of the problem: results are
    // identical for any worker count, so the hash must be too
    RunConfig canon = cfg;
    canon.workers = 1;
    const std::string s = serialize_config(canon);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

BuiltProblem build_problem(const RunConfig& cfg) {
    if (!(cfg.nu > 0.0)) throw ConfigError("hypothesis violated: nu > 0");
    if (!(cfg.p > 0.0 && cfg.p <= 0.5))
        throw ConfigError("hypothesis violated: p in (0, 1/2]");
    if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0))
        throw ConfigError("hypothesis violated: alpha in [0, 1)");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0 - cfg.alpha))
        throw ConfigError("hypothesis violated: epsilon in (0, 1 - alpha)");
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0 - cfg.alpha))
        throw ConfigError("hypothesis violated: beta in (0, 1 - alpha)");
    if (cfg.mode != "Xi" && cfg.mode != "Upsilon")
        throw ConfigError("mode must be Xi or Upsilon");
    if (cfg.n < 2) throw ConfigError("n must be >= 2");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    if (cfg.depth_cap < 1) throw ConfigError("depth_cap must be >= 1");

    KernelPair pair;
    if (cfg.kernel.name == "h0") {
        const ForcingProfile prof = cfg.kernel.profile == "smooth"
                                        ? smooth_forcing_profile()
                                        : default_forcing_profile();
        if (cfg.kernel.profile != "smooth" && cfg.kernel.profile != "default")
            throw ConfigError("kernel.profile must be default or smooth");
        pair = make_h0_pair(prof, cfg.kernel.c_h, cfg.kernel.c_ht);
    } else if (cfg.kernel.name == "H") {
        pair = make_H_pair();
    } else if (cfg.kernel.name == "Hp") {
        pair = make_Hp_pair(cfg.kernel.p);
    } else {
        throw ConfigError("kernel.name must be h0, H or Hp");
    }
    if (cfg.kernel.standardize) pair = standardized(pair);

    const double gamma_cap = 8.0 * M_PI * cfg.nu * cfg.p / 11.0;
    if (!(pair.gamma <= gamma_cap))
        throw ConfigError("hypothesis violated: gamma > 8*pi*nu*p/11");
    const double gt_cap = 2.0 * M_PI * cfg.nu * (1.0 - cfg.p);
    if (!(pair.gamma_tilde <= gt_cap))
        throw ConfigError("hypothesis violated: gamma_tilde > 2*pi*nu*(1-p)");
    if (cfg.mode == "Upsilon" && !pair.excessive)
        throw ConfigError("hypothesis violated: Upsilon mode requires an excessive kernel");

    BuiltProblem built;
    built.cfg = cfg;
    built.hash = config_hash(cfg);

    if (cfg.u0.fixture == "vortex") {
        built.velocity = make_vortex_u0(cfg.u0.delta, cfg.u0.sigma, cfg.u0.axis, cfg.nu, pair);
    } else if (cfg.u0.fixture == "zero") {
        built.velocity = make_zero_u0();
    } else {
        throw ConfigError("u0.fixture must be zero or vortex");
    }
    if (cfg.forcing.fixture == "azimuthal") {
        if (!pair.has_forcing())
            throw ConfigError("hypothesis violated: forcing requires h_tilde > 0 (kernel has none)");
        built.forcing =
            make_azimuthal_forcing(cfg.forcing.amplitude, cfg.forcing.axis, cfg.forcing.lambda, pair);
    } else if (cfg.forcing.fixture == "zero") {
        built.forcing = make_zero_forcing();
    } else {
        throw ConfigError("forcing.fixture must be zero or azimuthal");
    }

    // sampled admissibility check (necessary, not a sup proof)
    if (cfg.u0.fixture != "zero" &&
        built.velocity.sup_conv_ratio > cfg.alpha * cfg.epsilon * (1.0 + 1e-9))
        throw ConfigError("hypothesis violated: sup |u0*K|/h > alpha*epsilon (sampled check)");
    if (built.forcing.g && built.forcing.sup_g_ratio > cfg.beta * cfg.epsilon * (1.0 + 1e-9))
        throw ConfigError("hypothesis violated: sup |g|/h_tilde > beta*epsilon (sampled check)");

    built.spec.nu = cfg.nu;
    built.spec.p = cfg.p;
    built.spec.pair = pair;
    built.spec.mode = cfg.mode == "Xi" ? CascadeMode::Xi : CascadeMode::Upsilon;
    built.spec.depth_cap = cfg.depth_cap;
    if (cfg.u0.fixture != "zero") {
        built.spec.u0 = built.velocity.u0;
        built.spec.u0_heat_conv = built.velocity.heat_conv;
    }
    if (built.forcing.phi) built.spec.phi = built.forcing.phi;
    return built;
}

}  // namespace nsc
