#include "nsc/cascade.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nsc/samplers.hpp"

namespace nsc {

Vec3 m0(const Vec3& x, double t, const ProblemSpec& spec) {
    if (!spec.u0_heat_conv) return {};
    const double hx = spec.pair.h(x);
    if (!std::isfinite(hx)) return {};
    return spec.u0_heat_conv(x, t) / hx;
}

Vec3 apply_B(int kappa, const Vec3& z, const Vec3& a, const Vec3& b) {
    switch (kappa) {
        case 1: return b1(z, a, b);
        case 2: return 0.5 * b2(z, a, b);
        case 3: return -0.5 * b2(z, a, b);
        default: throw std::domain_error("apply_B: kappa must be 1, 2 or 3");
    }
}

Vec3 apply_C(int kappa, const Vec3& z, const Vec3& phi) {
    switch (kappa) {
        case 4: return proj_perp(z, phi);
        case 5: return -0.5 * reflect(z, phi);
        default: throw std::domain_error("apply_C: kappa must be 4 or 5");
    }
}

namespace {

struct Frame {
    Vec3 x;          // node start location (parent's X)
    double t;        // remaining time
    RngStream rng;
    int depth;
    int idx;         // child slot in parent (0/1); -1 at the root
    int stage = 0;   // 0 entering, 1 child0 done, 2 child1 done
    int kappa = 0;
    Vec3 z{};
    double tau = 0.0;
    Vec3 data{};
    Vec3 child0{};
    double mult = 0.0;
};

std::string path_of(const std::vector<Frame>& stack) {
    std::ostringstream os;
    os << "root";
    for (std::size_t i = 1; i < stack.size(); ++i) os << "/" << stack[i].idx;
    return os.str();
}

}  // namespace

CascadeOutcome eval_cascade(const Vec3& x, double t, const ProblemSpec& spec,
                            const RngStream& stream) {
    if (!(t > 0.0)) throw std::domain_error("eval_cascade: need t > 0");
    if (!(spec.nu > 0.0)) throw std::domain_error("eval_cascade: need nu > 0");
    if (!(spec.p > 0.0 && spec.p <= 0.5))
        throw std::domain_error("eval_cascade: p must lie in (0, 1/2]");
    if (spec.mode == CascadeMode::Upsilon && !spec.pair.excessive)
        throw std::domain_error("eval_cascade: Upsilon mode requires an excessive kernel");

    CascadeOutcome out;
    std::vector<Frame> stack;
    stack.reserve(64);
    stack.push_back({x, t, stream, 0, -1});
    Vec3 ret{};

    while (!stack.empty()) {
        const std::size_t cur = stack.size() - 1;
        Frame& f = stack[cur];

        if (f.stage == 1) {
            f.child0 = ret;
            f.stage = 2;
            Frame kid{f.x - f.z, f.t - f.tau, f.rng.child(1), f.depth + 1, 1};
            stack.push_back(kid);
            continue;
        }
        if (f.stage == 2) {
            ret = f.data + f.mult * apply_B(f.kappa, f.z, f.child0, ret);
            stack.pop_back();
            continue;
        }

        // stage 0: realize the node's ensemble
        ++out.nodes;
        out.max_depth = std::max(out.max_depth, f.depth);

        const int kappa = sample_kappa(spec.p, f.rng);
        f.kappa = kappa;
        const bool bilinear = kappa <= 3;
        const bool forcing_active = !bilinear && static_cast<bool>(spec.phi);

        if (bilinear || forcing_active) {
            f.z = sample_Z(f.x, spec.pair,
                           bilinear ? ZBranch::Bilinear : ZBranch::Forcing, f.rng);
            const Vec3 y = sample_Y_given_Z(f.z, f.rng);
            const double arg = (kappa == 3 || kappa == 5) ? norm(y) : norm(f.z);
            f.tau = (kappa == 1) ? sample_tau0(arg, spec.nu, f.rng)
                                 : sample_tau1(arg, spec.nu, f.rng);
        }

        if (spec.mode == CascadeMode::Xi) {
            f.data = m0(f.x, f.t, spec);
        } else {
            f.data = Vec3{};
            if (spec.u0) {
                const HbmEndpoint e = sample_hbm_endpoint(f.x, f.t, spec.pair, spec.nu, f.rng);
                if (!e.trapped) {
                    const double hy = spec.pair.h(e.y);
                    if (std::isfinite(hy)) f.data = spec.u0(e.y) / hy;
                }
            }
        }

        const bool capped = f.depth >= spec.depth_cap;

        if (bilinear && f.tau <= f.t) {
            if (capped) {
                out.truncated = true;
                ret = f.data;
                stack.pop_back();
                continue;
            }
            const Multipliers mm = cascade_multipliers(spec.pair, spec.nu, f.x);
            f.mult = 11.0 * mm.m / spec.p;
            f.stage = 1;
            Frame kid{f.x - f.z, f.t - f.tau, f.rng.child(0), f.depth + 1, 0};
            stack.push_back(kid);
            continue;
        }

        Vec3 value = f.data;
        if (forcing_active && f.tau <= f.t) {
            if (capped) {
                out.truncated = true;
            } else {
                const Vec3 xc = f.x - f.z;
                const Vec3 ph = spec.phi(xc, f.t - f.tau);
                if (!std::isfinite(ph.x1) || !std::isfinite(ph.x2) || !std::isfinite(ph.x3))
                    throw std::runtime_error(
                        "eval_cascade: non-finite forcing ratio at node " + path_of(stack));
                const Multipliers mm = cascade_multipliers(spec.pair, spec.nu, f.x);
                value += (4.0 * mm.m_tilde / (1.0 - spec.p)) * apply_C(kappa, f.z, ph);
            }
        }
        ret = value;
        stack.pop_back();
    }

    out.value = ret;
    if (!std::isfinite(out.value.x1) || !std::isfinite(out.value.x2) ||
        !std::isfinite(out.value.x3))
        throw std::runtime_error("eval_cascade: non-finite outcome");
    return out;
}

CascadeOutcome eval_Xi(const Vec3& x, double t, const ProblemSpec& spec,
                       const RngStream& stream) {
    ProblemSpec s = spec;
    s.mode = CascadeMode::Xi;
    return eval_cascade(x, t, s, stream);
}

CascadeOutcome eval_Upsilon(const Vec3& x, double t, const ProblemSpec& spec,
                            const RngStream& stream) {
    ProblemSpec s = spec;
    s.mode = CascadeMode::Upsilon;
    return eval_cascade(x, t, s, stream);
}

}  // namespace nsc
