#pragma once

#include <cstdint>
#include <vector>

#include "nsc/cascade.hpp"

namespace nsc {

struct EstimateReport {
    Vec3 x;
    double t = 0.0;
    Vec3 u;
    Vec3 se;                         // componentwise standard error of u
    std::int64_t n = 0;
    double truncated_fraction = 0.0;
    double nodes_mean = 0.0;
    double max_abs_value = 0.0;      // max |cascade outcome| observed
    double wall_time = 0.0;          // seconds
};

/// u(x,t) = h(x) E_x[cascade value], averaged over n independent cascades.
/// Per-cascade streams are derived from (seed, point_index, cascade index),
/// and aggregation is a fixed-shape pairwise reduction, so the report is
/// identical for any worker count.
EstimateReport mc_estimate(const Vec3& x, double t, const ProblemSpec& spec,
                           std::int64_t n, std::uint64_t seed, int workers,
                           std::uint64_t point_index = 0);

struct GridPoint {
    Vec3 x;
    double t;
};

std::vector<EstimateReport> grid_evaluate(const std::vector<GridPoint>& grid,
                                          const ProblemSpec& spec, std::int64_t n,
                                          std::uint64_t seed, int workers);

/// Fixed-shape pairwise sum (deterministic regardless of evaluation order).
Vec3 pairwise_sum(const std::vector<Vec3>& v);

/// Canonical CSV export: one optional "# ..." provenance comment, the header
/// x1,x2,x3,t,u1,u2,u3,se1,se2,se3,n,trunc_frac, then one row per report.
/// Shortest round-trip formatting, so equal reports give equal bytes.
std::string field_csv(const std::vector<EstimateReport>& reports,
                      const std::string& provenance = "");

}  // namespace nsc
