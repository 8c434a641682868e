#pragma once

#include <atomic>
#include <cstdint>
#include <functional>

#include "nsc/kernels.hpp"
#include "nsc/rng.hpp"
#include "nsc/vec.hpp"

namespace nsc {

/// Branch type: 1-3 bilinear continuation, 4-5 forcing termination.
/// Probabilities (p/11, 4p/11, 6p/11, (1-p)/2, (1-p)/2).
int sample_kappa(double p, RngStream& rng);

/// Waiting time with density f1(s|a) = (4 pi nu)^(-1/2) s^(-3/2) a e^(-a^2/4 nu s),
/// drawn as a^2/(4 nu W), W ~ Gamma(1/2, 1).
double sample_tau1(double a, double nu, RngStream& rng);

/// Waiting time with density f0(s|a) = (2 pi)^(-1/2) (2 nu)^(-3/2) s^(-5/2) a^3 e^(-a^2/4 nu s),
/// drawn as a^2/(4 nu G), G ~ Gamma(3/2, 1).
double sample_tau0(double a, double nu, RngStream& rng);

Vec3 sample_uniform_dir(RngStream& rng);

/// Y | Z: |Y| = |z| sqrt(U), uniform direction; density |y|^-1 1[|y|<|z|] / (2 pi |z|^2).
Vec3 sample_Y_given_Z(const Vec3& z, RngStream& rng);

/// Generic rejection draw from the density proportional to
///   |z|^-sigma * psi(x - z)
/// where psi is dominated by the given radial majorant.  Throws a
/// sampler-health error when the envelope acceptance collapses.
Vec3 sample_radial_pair_target(double sigma, const Vec3& x,
                               const std::function<double(const Vec3&)>& psi,
                               const RadialMajorant& M, RngStream& rng);

/// Non-trap endpoint draw from the density proportional to psi(y) K(x-y, 2 nu t)
/// (the h-weighted heat kernel), by rejection.
Vec3 sample_weighted_heat_endpoint(const Vec3& x, double two_nu_t,
                                   const std::function<double(const Vec3&)>& psi,
                                   const RadialMajorant& M, RngStream& rng);

enum class ZBranch { Bilinear, Forcing };

/// Spatial draw through the pair's sampler hook.
Vec3 sample_Z(const Vec3& x, const KernelPair& pair, ZBranch branch, RngStream& rng);

/// h-Brownian endpoint with trap state (excessive pairs only).
HbmEndpoint sample_hbm_endpoint(const Vec3& x, double t, const KernelPair& pair,
                                double nu, RngStream& rng);

/// Global rejection-sampler counters (diagnostics only; estimates never read them).
struct SamplerStats {
    std::atomic<std::uint64_t> proposals{0};
    std::atomic<std::uint64_t> accepts{0};
    void reset() { proposals = 0; accepts = 0; }
};
SamplerStats& sampler_stats();

}  // namespace nsc
