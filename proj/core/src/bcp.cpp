#include "wedge/bcp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "wedge/parallel.hpp"
#include "wedge/rng.hpp"

namespace wedge {

namespace {

constexpr std::size_t kPathsPerChunk = 8192;

void validate_side(const std::vector<BoundaryPoint>& side, const char* name) {
    if (side.size() < 2)
        throw std::invalid_argument(std::string("bcp: ") + name +
                                    " boundary needs at least two points");
    for (std::size_t i = 0; i < side.size(); ++i) {
        if (!(std::isfinite(side[i][0]) && std::isfinite(side[i][1])))
            throw std::invalid_argument(std::string("bcp: ") + name +
                                        " boundary has a non-finite entry at "
                                        "point " +
                                        std::to_string(i));
        if (i > 0 && !(side[i][0] > side[i - 1][0]))
            throw std::invalid_argument(
                std::string("bcp: ") + name +
                " boundary times must be strictly increasing (point " +
                std::to_string(i) + ")");
    }
    if (side.front()[0] != 0.0)
        throw std::invalid_argument(std::string("bcp: ") + name +
                                    " boundary must start at time 0");
}

double interpolate(const std::vector<BoundaryPoint>& side, double t) {
    const auto it = std::lower_bound(
        side.begin(), side.end(), t,
        [](const BoundaryPoint& p, double tt) { return p[0] < tt; });
    if (it != side.end() && (*it)[0] == t) return (*it)[1];
    const BoundaryPoint& hi = *it;
    const BoundaryPoint& lo = *(it - 1);
    const double w = (t - lo[0]) / (hi[0] - lo[0]);
    return lo[1] + w * (hi[1] - lo[1]);
}

struct ChunkStat {
    double sum = 0.0;
    double sum_sq = 0.0;
};

// Fixed combination order, independent of which thread filled what.
ChunkStat reduce_pairwise(const std::vector<ChunkStat>& stats, std::size_t lo,
                          std::size_t hi) {
    if (hi - lo == 1) return stats[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    const ChunkStat left = reduce_pairwise(stats, lo, mid);
    const ChunkStat right = reduce_pairwise(stats, mid, hi);
    return {left.sum + right.sum, left.sum_sq + right.sum_sq};
}

}  // namespace

PiecewiseBoundaryPair::PiecewiseBoundaryPair(std::vector<double> knots_,
                                             std::vector<double> lower_,
                                             std::vector<double> upper_)
    : knots(std::move(knots_)),
      lower(std::move(lower_)),
      upper(std::move(upper_)) {
    if (knots.size() < 2 || lower.size() != knots.size() ||
        upper.size() != knots.size())
        throw std::invalid_argument(
            "bcp: boundary pair needs aligned knots/lower/upper with at "
            "least two knots");
    if (knots.front() != 0.0)
        throw std::invalid_argument("bcp: first knot must be at time 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(std::isfinite(knots[i]) && std::isfinite(lower[i]) &&
              std::isfinite(upper[i])))
            throw std::invalid_argument("bcp: non-finite value at knot " +
                                        std::to_string(i));
        if (i > 0 && !(knots[i] > knots[i - 1]))
            throw std::invalid_argument(
                "bcp: knot times must be strictly increasing at knot " +
                std::to_string(i));
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument(
                "bcp: lower boundary is not below the upper one at knot " +
                std::to_string(i) + " (t=" + std::to_string(knots[i]) + ")");
    }
    if (!(lower[0] < 0.0 && 0.0 < upper[0]))
        throw std::invalid_argument(
            "bcp: the band must contain the start value 0 at knot 0");
}

PiecewiseBoundaryPair PiecewiseBoundaryPair::from_segments(
    const std::vector<BoundaryPoint>& lower_pts,
    const std::vector<BoundaryPoint>& upper_pts) {
    validate_side(lower_pts, "lower");
    validate_side(upper_pts, "upper");
    if (lower_pts.back()[0] != upper_pts.back()[0])
        throw std::invalid_argument(
            "bcp: lower and upper boundaries must end at the same time");

    std::vector<double> grid;
    grid.reserve(lower_pts.size() + upper_pts.size());
    for (const BoundaryPoint& p : lower_pts) grid.push_back(p[0]);
    for (const BoundaryPoint& p : upper_pts) grid.push_back(p[0]);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> lo(grid.size()), up(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        lo[i] = interpolate(lower_pts, grid[i]);
        up[i] = interpolate(upper_pts, grid[i]);
    }
    return PiecewiseBoundaryPair(std::move(grid), std::move(lo),
                                 std::move(up));
}

double bridge_band_prob(double dt, double g1s, double g1e, double g2s,
                        double g2e, int n_terms) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("bcp: dt must be positive and finite");
    if (!(g1s > 0.0 && g1e > 0.0 && g2s > 0.0 && g2e > 0.0)) return 0.0;
    const double inv_sqrt_dt = 1.0 / std::sqrt(dt);
    // End gaps become the wedge slopes, start gaps the intercepts.
    return wedge_prob(WedgeParams(g1e * inv_sqrt_dt, g1s * inv_sqrt_dt,
                                  g2e * inv_sqrt_dt, g2s * inv_sqrt_dt),
                      n_terms)
        .value;
}

BcpEstimate bcp_montecarlo(const PiecewiseBoundaryPair& bounds,
                           std::uint64_t samples, std::uint64_t seed,
                           int workers, int n_terms) {
    if (samples == 0)
        throw std::invalid_argument("bcp: samples must be >= 1");
    threshold_table();

    const std::size_t m = bounds.intervals();
    std::vector<double> dt(m), sqrt_dt(m);
    for (std::size_t i = 0; i < m; ++i) {
        dt[i] = bounds.knots[i + 1] - bounds.knots[i];
        sqrt_dt[i] = std::sqrt(dt[i]);
    }

    const std::size_t num_chunks =
        static_cast<std::size_t>((samples + kPathsPerChunk - 1) /
                                 kPathsPerChunk);
    std::vector<ChunkStat> stats(num_chunks);

    parallel_chunks(num_chunks, resolve_workers(workers), [&](std::size_t k) {
        const std::uint64_t chunk_begin = k * kPathsPerChunk;
        const std::uint64_t chunk_paths =
            std::min<std::uint64_t>(kPathsPerChunk, samples - chunk_begin);
        rng::NormalSampler normals(rng::Xoshiro256pp::substream(seed, k));
        ChunkStat st;
        for (std::uint64_t path = 0; path < chunk_paths; ++path) {
            double w = 0.0;
            double product = 1.0;
            bool dead = false;
            // The full skeleton is always sampled so that the random
            // stream layout does not depend on the boundaries.
            for (std::size_t i = 0; i < m; ++i) {
                const double w_next = w + sqrt_dt[i] * normals.next();
                if (!dead) {
                    if (w_next <= bounds.lower[i + 1] ||
                        w_next >= bounds.upper[i + 1]) {
                        dead = true;
                    } else {
                        product *= bridge_band_prob(
                            dt[i], w - bounds.lower[i], w_next - bounds.lower[i + 1],
                            bounds.upper[i] - w, bounds.upper[i + 1] - w_next,
                            n_terms);
                    }
                }
                w = w_next;
            }
            const double value = dead ? 0.0 : product;
            st.sum += value;
            st.sum_sq += value * value;
        }
        stats[k] = st;
    });

    const ChunkStat total = reduce_pairwise(stats, 0, num_chunks);
    const double n = static_cast<double>(samples);
    const double mean = total.sum / n;
    double std_error = 0.0;
    if (samples > 1) {
        const double var =
            std::max(0.0, (total.sum_sq - total.sum * total.sum / n) /
                              (n - 1.0));
        std_error = std::sqrt(var / n);
    }
    return {mean, std_error, samples, seed};
}

}  // namespace wedge
