// Boundary crossing probabilities for standard Brownian motion between two
// piecewise-linear boundaries over a finite horizon.
//
// Conditioned on its values at consecutive knots, the motion is a Brownian
// bridge on each interval, and the probability that a bridge stays between
// two linear segments is a wedge probability: centering the bridge,
// rescaling to unit variance and applying time inversion maps the start
// gaps to the wedge intercepts and the end gaps to the wedge slopes. The
// crossing probability over the whole horizon is therefore the expectation
// over the knot values of a product of wedge probabilities, estimated here
// by Monte Carlo.
//
// Sampling is split into fixed chunks of 8192 paths with one RNG substream
// per chunk and a fixed pairwise reduction over chunk partials, so the
// estimate is bit-identical for any worker count.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wedge/core.hpp"

namespace wedge {

// One (time, value) node of a piecewise-linear boundary.
using BoundaryPoint = std::array<double, 2>;

// A pair of piecewise-linear boundaries sharing one knot grid starting at
// time 0, with L < U at every knot and L(0) < 0 < U(0).
struct PiecewiseBoundaryPair {
    std::vector<double> knots;
    std::vector<double> lower;
    std::vector<double> upper;

    PiecewiseBoundaryPair(std::vector<double> knots_,
                          std::vector<double> lower_,
                          std::vector<double> upper_);

    // Builds the shared grid from independently specified sides: knot sets
    // are merged and each side is interpolated linearly onto the union.
    static PiecewiseBoundaryPair from_segments(
        const std::vector<BoundaryPoint>& lower,
        const std::vector<BoundaryPoint>& upper);

    std::size_t intervals() const noexcept { return knots.size() - 1; }
};

struct BcpEstimate {
    double estimate;    // in [0, 1]
    double std_error;   // sample standard deviation / sqrt(samples)
    std::uint64_t samples;
    std::uint64_t seed;
};

// Probability that a Brownian bridge over an interval of length dt stays
// between two linear segments, given the four positive gaps between its
// endpoints and the boundaries: g1s/g1e to the lower boundary at the start
// and end, g2s/g2e to the upper one. Any non-positive gap yields 0.
double bridge_band_prob(double dt, double g1s, double g1e, double g2s,
                        double g2e, int n_terms = kDefaultTerms);

// Monte Carlo estimate of the probability that the motion stays strictly
// between the boundaries on [0, t_m]: knot values are sampled as Gaussian
// increments; a path contributes the product of its per-interval bridge
// probabilities, or exactly 0 if any sampled knot value leaves the open
// band. Deterministic in (seed, samples).
BcpEstimate bcp_montecarlo(const PiecewiseBoundaryPair& bounds,
                           std::uint64_t samples, std::uint64_t seed,
                           int workers = 0, int n_terms = kDefaultTerms);

}  // namespace wedge
