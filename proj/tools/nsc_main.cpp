// nscascade: branching Monte Carlo estimator for an incompressible-flow
// integral equation, with a deterministic fixed-point comparator and
// statistical self-checks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsc/config.hpp"
#include "nsc/estimator.hpp"
#include "nsc/samplers.hpp"
#include "nsc/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfigInvalid = 2;
constexpr int kExitDataError = 3;
constexpr int kExitIoError = 4;

nsc::Vec3 parse_point(const std::string& s) {
    nsc::Vec3 v;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> v.x1 >> c1 >> v.x2 >> c2 >> v.x3) || c1 != ',' || c2 != ',')
        throw nsc::ConfigError("--x expects \"x1,x2,x3\"");
    return v;
}

// "x1a:x1b:n1,x2a:x2b:n2,x3a:x3b:n3;t1,t2,..."
std::vector<nsc::GridPoint> parse_grid(const std::string& s) {
    const auto semi = s.find(';');
    if (semi == std::string::npos)
        throw nsc::ConfigError("--grid expects \"a:b:n,a:b:n,a:b:n;t1,t2,...\"");
    std::vector<std::vector<double>> axes;
    std::istringstream space(s.substr(0, semi));
    std::string part;
    while (std::getline(space, part, ',')) {
        double a = 0.0, b = 0.0;
        int n = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(part);
        if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
            throw nsc::ConfigError("--grid axis \"" + part + "\" is not a:b:n with n >= 1");
        std::vector<double> axis;
        for (int i = 0; i < n; ++i)
            axis.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        axes.push_back(std::move(axis));
    }
    if (axes.size() != 3) throw nsc::ConfigError("--grid needs exactly 3 spatial axes");
    std::vector<double> times;
    std::istringstream tin(s.substr(semi + 1));
    while (std::getline(tin, part, ',')) {
        if (part.empty()) continue;
        times.push_back(std::stod(part));
    }
    if (times.empty()) throw nsc::ConfigError("--grid needs at least one time");
    std::vector<nsc::GridPoint> grid;
    for (double t : times)
        for (double x3 : axes[2])
            for (double x2 : axes[1])
                for (double x1 : axes[0]) grid.push_back({{x1, x2, x3}, t});
    return grid;
}

struct CliArgs {
    std::string config_path, x_str, grid, out, suite = "all", mode;
    double t = -1.0;
    std::int64_t n = -1;
    long long seed = -1;
    int workers = -1, depth_cap = -1;
};

nsc::RunConfig load_config(const CliArgs& a) {
    nsc::RunConfig cfg =
        a.config_path.empty() ? nsc::RunConfig{} : nsc::parse_config_file(a.config_path);
    if (a.n >= 0) cfg.n = a.n;
    if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
    if (a.workers >= 0) cfg.workers = a.workers;
    if (a.depth_cap >= 0) cfg.depth_cap = a.depth_cap;
    if (!a.mode.empty()) cfg.mode = a.mode;
    return cfg;
}

std::string provenance(const nsc::BuiltProblem& built) {
    std::ostringstream os;
    os << "version=" << kVersion << " seed=" << built.cfg.seed
       << " config_hash=" << built.hash;
    return os.str();
}

int write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return kExitOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open for writing: " << path << "\n";
        return kExitIoError;
    }
    out << content;
    if (!out) {
        std::cerr << "write failed: " << path << "\n";
        return kExitIoError;
    }
    return kExitOk;
}

int cmd_estimate(const CliArgs& a) {
    const nsc::RunConfig cfg = load_config(a);
    const nsc::BuiltProblem built = nsc::build_problem(cfg);
    const nsc::Vec3 x = a.x_str.empty() ? nsc::Vec3{1.0, 0.0, 0.0} : parse_point(a.x_str);
    const double t = a.t > 0.0 ? a.t : 0.5;
    const nsc::EstimateReport rep =
        nsc::mc_estimate(x, t, built.spec, cfg.n, cfg.seed, cfg.workers);
    nlohmann::json j;
    j["version"] = kVersion;
    j["seed"] = cfg.seed;
    j["config_hash"] = built.hash;
    j["x"] = {rep.x.x1, rep.x.x2, rep.x.x3};
    j["t"] = rep.t;
    j["u"] = {rep.u.x1, rep.u.x2, rep.u.x3};
    j["se"] = {rep.se.x1, rep.se.x2, rep.se.x3};
    j["n"] = rep.n;
    j["trunc_frac"] = rep.truncated_fraction;
    j["nodes_mean"] = rep.nodes_mean;
    j["wall_time"] = rep.wall_time;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_field(const CliArgs& a) {
    const nsc::RunConfig cfg = load_config(a);
    const nsc::BuiltProblem built = nsc::build_problem(cfg);
    if (a.grid.empty()) throw nsc::ConfigError("field requires --grid");
    const auto grid = parse_grid(a.grid);
    const auto reports =
        nsc::grid_evaluate(grid, built.spec, cfg.n, cfg.seed, cfg.workers);
    return write_output(a.out, nsc::field_csv(reports, provenance(built)));
}

int cmd_verify(const CliArgs& a) {
    const nsc::verify::SuiteResult res = nsc::verify::run_suite(a.suite, true);
    for (const auto& c : res.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name << ": " << c.detail
                  << "\n";
    std::cout << "suite " << res.suite << ": " << (res.pass ? "PASS" : "FAIL") << "\n";
    return res.pass ? kExitOk : kExitVerifyFail;
}

int cmd_sample_diag(const CliArgs& a) {
    const nsc::RunConfig cfg = load_config(a);
    const nsc::BuiltProblem built = nsc::build_problem(cfg);
    const nsc::KernelPair& pair = built.spec.pair;
    const std::int64_t n = cfg.n;
    nsc::RngStream rng = nsc::RngStream::from_seed(cfg.seed);
    const nsc::Vec3 x{1.0, 0.0, 0.0};
    const double t = a.t > 0.0 ? a.t : 0.5;

    nsc::sampler_stats().reset();
    std::ostringstream os;
    os << "# " << provenance(built) << "\n";
    os << "sampler,bin_lo,bin_hi,count\n";
    auto histogram = [&](const char* name, auto draw) {
        constexpr int kBins = 40;
        std::vector<std::int64_t> counts(kBins + 1, 0);
        const double lo = 1e-3, hi = 1e3;
        std::int64_t special = 0;  // trap draws (hbm) / out of range below lo
        for (std::int64_t i = 0; i < n; ++i) {
            const double v = draw(rng);
            if (!(v >= 0.0)) {
                ++special;
                continue;
            }
            const int b = v < lo ? 0
                          : v >= hi
                              ? kBins
                              : 1 + static_cast<int>(std::log(v / lo) / std::log(hi / lo) *
                                                     (kBins - 1));
            ++counts[std::min(b, kBins)];
        }
        char buf[160];
        for (int b = 0; b <= kBins; ++b) {
            const double b_lo = b == 0 ? 0.0 : lo * std::pow(hi / lo, (b - 1.0) / (kBins - 1));
            const double b_hi = b == kBins ? std::numeric_limits<double>::infinity()
                                           : lo * std::pow(hi / lo, static_cast<double>(b) /
                                                                        (kBins - 1));
            std::snprintf(buf, sizeof buf, "%s,%.6g,%.6g,%lld\n", name, b_lo, b_hi,
                          static_cast<long long>(counts[b]));
            os << buf;
        }
        if (special > 0) {
            std::snprintf(buf, sizeof buf, "%s,trap,trap,%lld\n", name,
                          static_cast<long long>(special));
            os << buf;
        }
    };

    histogram("tau1", [&](nsc::RngStream& g) {
        return nsc::sample_tau1(1.0, built.cfg.nu, g);
    });
    histogram("tau0", [&](nsc::RngStream& g) {
        return nsc::sample_tau0(1.0, built.cfg.nu, g);
    });
    histogram("z_bilinear", [&](nsc::RngStream& g) {
        return nsc::norm(nsc::sample_Z(x, pair, nsc::ZBranch::Bilinear, g));
    });
    if (pair.has_forcing())
        histogram("z_forcing", [&](nsc::RngStream& g) {
            return nsc::norm(nsc::sample_Z(x, pair, nsc::ZBranch::Forcing, g));
        });
    if (pair.excessive)
        histogram("hbm_endpoint", [&](nsc::RngStream& g) {
            const nsc::HbmEndpoint ep =
                nsc::sample_hbm_endpoint(x, t, pair, built.cfg.nu, g);
            return ep.trapped ? -1.0 : nsc::norm(ep.y);
        });

    const auto proposals = nsc::sampler_stats().proposals.load();
    const auto accepts = nsc::sampler_stats().accepts.load();
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, "acceptance,0,inf,%lld\n",
                      static_cast<long long>(accepts));
        os << buf;
        std::snprintf(buf, sizeof buf, "proposals,0,inf,%lld\n",
                      static_cast<long long>(proposals));
        os << buf;
    }
    return write_output(a.out, os.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-cascade velocity field estimator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CliArgs a;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", a.config_path, "JSON config file");
        sub->add_option("--n", a.n, "cascades per point");
        sub->add_option("--seed", a.seed, "master seed");
        sub->add_option("--workers", a.workers, "worker threads");
        sub->add_option("--depth-cap", a.depth_cap, "tree depth cap");
        sub->add_option("--mode", a.mode, "Xi | Upsilon");
    };

    CLI::App* est = app.add_subcommand("estimate", "single-point estimate (JSON)");
    add_common(est);
    est->add_option("--x", a.x_str, "probe point \"x1,x2,x3\"");
    est->add_option("--t", a.t, "probe time");

    CLI::App* fld = app.add_subcommand("field", "grid evaluation (CSV)");
    add_common(fld);
    fld->add_option("--grid", a.grid, "\"a:b:n,a:b:n,a:b:n;t1,t2,...\"");
    fld->add_option("--out", a.out, "output path (default stdout)");

    CLI::App* ver = app.add_subcommand("verify", "run property/statistical suites");
    ver->add_option("--suite", a.suite,
                    "geometry|heat|kernels|samplers|cascade|oracle|all");

    CLI::App* diag = app.add_subcommand("sample-diag", "sampler histograms (CSV)");
    add_common(diag);
    diag->add_option("--t", a.t, "endpoint-draw time");
    diag->add_option("--out", a.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigInvalid;
    }

    try {
        if (est->parsed()) return cmd_estimate(a);
        if (fld->parsed()) return cmd_field(a);
        if (ver->parsed()) return cmd_verify(a);
        if (diag->parsed()) return cmd_sample_diag(a);
    } catch (const nsc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigInvalid;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}
