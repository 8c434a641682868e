#pragma once

#include <cstdint>
#include <functional>

#include "nsc/kernels.hpp"
#include "nsc/rng.hpp"
#include "nsc/vec.hpp"

namespace nsc {

enum class CascadeMode { Xi, Upsilon };

/// Everything a single cascade evaluation needs.  Data enters through the
/// scaled evaluators: the heat convolution of u0 (Xi data term), u0 itself
/// (Upsilon endpoint term), and phi = g / h_tilde (forcing term).  Null
/// evaluators mean identically zero.
struct ProblemSpec {
    double nu = 1.0;
    double p = 0.5;
    KernelPair pair;
    CascadeMode mode = CascadeMode::Xi;
    std::function<Vec3(const Vec3&, double)> u0_heat_conv;
    std::function<Vec3(const Vec3&)> u0;
    std::function<Vec3(const Vec3&, double)> phi;
    int depth_cap = 10000;
};

struct CascadeOutcome {
    Vec3 value;
    std::int64_t nodes = 0;
    int max_depth = 0;
    bool truncated = false;
};

/// m0(x,t) = int u0(x-y) K(y, 2 nu t) dy / h(x); zero for null data.
Vec3 m0(const Vec3& x, double t, const ProblemSpec& spec);

/// kappa = 1 -> b1(z; a, b); kappa = 2, 3 -> +-b2(z; a, b)/2.
Vec3 apply_B(int kappa, const Vec3& z, const Vec3& a, const Vec3& b);

/// kappa = 4 -> P_z phi; kappa = 5 -> -(I - 3 e_z e_z^t) phi / 2.
Vec3 apply_C(int kappa, const Vec3& z, const Vec3& phi);

/// One cascade realization rooted at (x, t).  Per-node draw order is fixed
/// (kappa, Z, Y, tau, then the endpoint draw in Upsilon mode) and children
/// use streams derived from the node's key, so the result depends only on
/// (spec, x, t, stream), never on traversal order.
CascadeOutcome eval_cascade(const Vec3& x, double t, const ProblemSpec& spec,
                            const RngStream& stream);

CascadeOutcome eval_Xi(const Vec3& x, double t, const ProblemSpec& spec,
                       const RngStream& stream);
CascadeOutcome eval_Upsilon(const Vec3& x, double t, const ProblemSpec& spec,
                            const RngStream& stream);

}  // namespace nsc
