#include "nsc/estimator.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace nsc {

namespace {

Vec3 pairwise_sum_range(const std::vector<Vec3>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    if (hi - lo == 2) return v[lo] + v[lo + 1];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum_range(v, lo, mid) + pairwise_sum_range(v, mid, hi);
}

}  // namespace

Vec3 pairwise_sum(const std::vector<Vec3>& v) {
    if (v.empty()) return {};
    return pairwise_sum_range(v, 0, v.size());
}

EstimateReport mc_estimate(const Vec3& x, double t, const ProblemSpec& spec,
                           std::int64_t n, std::uint64_t seed, int workers,
                           std::uint64_t point_index) {
    if (n < 2) throw std::domain_error("mc_estimate: need n >= 2");
    if (workers < 1) workers = 1;
    const auto t0 = std::chrono::steady_clock::now();

    const RngStream point_stream = RngStream::from_seed(seed).child(point_index);

    std::vector<Vec3> values(static_cast<std::size_t>(n));
    std::vector<std::int64_t> node_counts(static_cast<std::size_t>(n));
    std::vector<unsigned char> truncated(static_cast<std::size_t>(n));

    const int nw = static_cast<int>(std::min<std::int64_t>(workers, n));
    std::vector<std::exception_ptr> errors(nw);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::int64_t i = w; i < n; i += nw) {
                    const CascadeOutcome oc =
                        eval_cascade(x, t, spec, point_stream.child(static_cast<std::uint64_t>(i)));
                    values[i] = oc.value;
                    node_counts[i] = oc.nodes;
                    truncated[i] = oc.truncated ? 1 : 0;
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    const double dn = static_cast<double>(n);
    const Vec3 mean = pairwise_sum(values) / dn;

    std::vector<Vec3> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Vec3 d = values[i] - mean;
        sq[i] = {d.x1 * d.x1, d.x2 * d.x2, d.x3 * d.x3};
    }
    const Vec3 ss = pairwise_sum(sq);
    const double denom = dn * (dn - 1.0);

    EstimateReport rep;
    rep.x = x;
    rep.t = t;
    rep.n = n;
    const double hx = spec.pair.h(x);
    if (!std::isfinite(hx))
        throw std::domain_error("mc_estimate: h(x) is infinite at the probe point");
    rep.u = hx * mean;
    rep.se = hx * Vec3{std::sqrt(ss.x1 / denom), std::sqrt(ss.x2 / denom),
                       std::sqrt(ss.x3 / denom)};
    std::int64_t tot_nodes = 0, tot_trunc = 0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        tot_nodes += node_counts[i];
        tot_trunc += truncated[i];
        max_abs = std::max(max_abs, norm(values[i]));
    }
    rep.nodes_mean = static_cast<double>(tot_nodes) / dn;
    rep.truncated_fraction = static_cast<double>(tot_trunc) / dn;
    rep.max_abs_value = max_abs;
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<EstimateReport> grid_evaluate(const std::vector<GridPoint>& grid,
                                          const ProblemSpec& spec, std::int64_t n,
                                          std::uint64_t seed, int workers) {
    if (grid.empty()) throw std::domain_error("grid_evaluate: empty grid");
    std::vector<EstimateReport> out;
    out.reserve(grid.size());
    // the per-point stream is keyed by the point's coordinates, so permuting
    // the grid permutes the reports without changing any of them
    for (const GridPoint& gp : grid) {
        std::uint64_t key = std::bit_cast<std::uint64_t>(gp.x.x1);
        key = detail::mix64(key ^ std::bit_cast<std::uint64_t>(gp.x.x2));
        key = detail::mix64(key ^ std::bit_cast<std::uint64_t>(gp.x.x3));
        key = detail::mix64(key ^ std::bit_cast<std::uint64_t>(gp.t));
        out.push_back(mc_estimate(gp.x, gp.t, spec, n, seed, workers, key));
    }
    return out;
}

std::string field_csv(const std::vector<EstimateReport>& reports,
                      const std::string& provenance) {
    std::string out;
    char buf[64];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
        out += buf;
    };
    if (!provenance.empty()) {
        out += "# ";
        out += provenance;
        out += '\n';
    }
    out += "x1,x2,x3,t,u1,u2,u3,se1,se2,se3,n,trunc_frac\n";
    for (const EstimateReport& r : reports) {
        put(r.x.x1, ','); put(r.x.x2, ','); put(r.x.x3, ','); put(r.t, ',');
        put(r.u.x1, ','); put(r.u.x2, ','); put(r.u.x3, ',');
        put(r.se.x1, ','); put(r.se.x2, ','); put(r.se.x3, ',');
        std::snprintf(buf, sizeof buf, "%lld,", static_cast<long long>(r.n));
        out += buf;
        put(r.truncated_fraction, '\n');
    }
    return out;
}

}  // namespace nsc
