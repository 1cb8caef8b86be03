// Data-parallel evaluation of wedge probabilities over parameter tables.
//
// batch_wedge partitions the rows into contiguous chunks (at least 4096
// rows each) processed on a worker pool. Each row is evaluated exactly as
// wedge_prob would, into its own output slot, so the result is bit
// identical to the sequential one for any worker count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "wedge/core.hpp"

namespace wedge {

// Column-oriented table of wedge parameters, rows aligned across columns.
struct ParamTable {
    std::vector<double> a1;
    std::vector<double> b1;
    std::vector<double> a2;
    std::vector<double> b2;

    std::size_t size() const noexcept { return a1.size(); }
};

struct ResultTable {
    std::vector<double> value;
    std::vector<Formula> formula;
    std::vector<std::int32_t> terms;
    std::vector<double> remainder_bound;

    std::size_t size() const noexcept { return value.size(); }
};

// Evaluates every row of the table. Throws std::invalid_argument on
// mismatched column lengths or a non-finite row (the message names the
// first offending row index). workers <= 0 selects the automatic count
// (WEDGE_WORKERS environment variable, then hardware concurrency).
ResultTable batch_wedge(const ParamTable& table, int n_terms = kDefaultTerms,
                        int workers = 0);

// Table of `size` rows with all coordinates drawn independently from the
// distribution with CDF (x/10)^(1/2) on [0, 10]; deterministic in seed.
ParamTable random_param_table(std::size_t size, std::uint64_t seed);

struct TimingRow {
    std::size_t n;
    int workers;
    double seconds;
};

// Times batch_wedge over seeded random tables, one row per (size, workers)
// pair. Sizes and worker counts must be positive; allocation failures for
// oversized tables surface as std::runtime_error.
std::vector<TimingRow> timing_harness(const std::vector<std::size_t>& sizes,
                                      const std::vector<int>& workers_list,
                                      std::uint64_t seed = 0x77ED6E5Cull,
                                      int n_terms = kDefaultTerms);

// CSV with header "n,workers,seconds".
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

}  // namespace wedge
