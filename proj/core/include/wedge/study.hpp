// Monte Carlo study of series convergence speed: how many terms of each
// formula are needed per random parameter tuple, and how often no
// summation is needed at all.

#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "wedge/core.hpp"

namespace wedge {

struct ConvergenceRecord {
    WedgeParams params;
    double log_ab_plus;
    int n_doob;    // terms to convergence of Doob's series
    int n_theta;   // terms to convergence of the theta-dual series
    bool trivial;  // the 0/1 short-circuit fired
};

struct StudySummary {
    std::size_t count = 0;
    std::size_t trivial = 0;
    std::size_t n1 = 0;  // non-trivial, min(n_doob, n_theta) <= 1
    std::size_t n2 = 0;
    std::size_t n3 = 0;
    std::size_t deeper = 0;  // min(n_doob, n_theta) > 3; expected empty

    double share(std::size_t part) const noexcept {
        return count ? static_cast<double>(part) / static_cast<double>(count)
                     : 0.0;
    }
};

struct StudyResult {
    std::vector<ConvergenceRecord> records;
    StudySummary summary;
};

// Tuples with all four coordinates drawn independently from the
// distribution with CDF (x/10)^(1/2) on [0, 10] (inverse CDF x = 10 u^2).
std::vector<WedgeParams> sample_params(std::size_t count, std::uint64_t seed);

// Runs terms_to_convergence for both formulas on `count` sampled tuples
// and tallies the per-category shares. Deterministic in seed.
StudyResult convergence_study(std::size_t count, double eps = 1e-16,
                              std::uint64_t seed = 0x5EEDBA5Eull,
                              int workers = 0);

// CSV with header "a1,b1,a2,b2,log_ab_plus,n_doob,n_theta,trivial".
void write_study_csv(std::ostream& out,
                     const std::vector<ConvergenceRecord>& records);

// Human-readable category counts and percentages.
void write_study_summary(std::ostream& out, const StudySummary& summary);

}  // namespace wedge
