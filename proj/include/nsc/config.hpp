#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nsc/cascade.hpp"
#include "nsc/fixtures.hpp"

namespace nsc {

/// Invalid configuration; the message names the first violated hypothesis.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct KernelConfig {
    std::string name = "h0";       // h0 | H | Hp
    double c_h = 1.0, c_ht = 1.0;  // h0 only
    std::string profile = "default";  // h0 forcing profile: default | smooth
    double p = 2.0;                // Hp exponent
    bool standardize = false;
};

struct U0Config {
    std::string fixture = "zero";  // zero | vortex
    double delta = 0.0, sigma = 1.0;
    Vec3 axis{0.0, 0.0, 1.0};
};

struct ForcingConfig {
    std::string fixture = "zero";  // zero | azimuthal
    double amplitude = 0.0, lambda = 1.0;
    Vec3 axis{0.0, 0.0, 1.0};
};

struct RunConfig {
    double nu = 1.0;
    double p = 0.5;
    double alpha = 0.5, beta = 0.2, epsilon = 0.2;
    KernelConfig kernel;
    U0Config u0;
    ForcingConfig forcing;
    std::string mode = "Xi";  // Xi | Upsilon
    std::int64_t n = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
    int depth_cap = 10000;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);  // normalized field order
std::string config_hash(const RunConfig& cfg);       // hex FNV-1a of the above

/// Validated, ready-to-run problem.
struct BuiltProblem {
    ProblemSpec spec;
    VelocityFixture velocity;
    ForcingFixture forcing;
    RunConfig cfg;
    std::string hash;
};

/// Validates every hypothesis (naming the first violation in the error) and
/// assembles the cascade inputs.  The data sup checks are sampled on radial
/// grids, necessary rather than sufficient.
BuiltProblem build_problem(const RunConfig& cfg);

}  // namespace nsc
