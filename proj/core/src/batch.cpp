#include "wedge/batch.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <new>
#include <string>

#include "wedge/parallel.hpp"
#include "wedge/rng.hpp"

namespace wedge {

namespace {

constexpr std::size_t kMinChunkRows = 4096;

void require_rectangular(const ParamTable& t) {
    const std::size_t n = t.a1.size();
    if (t.b1.size() != n || t.a2.size() != n || t.b2.size() != n)
        throw std::invalid_argument("batch: columns have unequal lengths");
}

void require_finite_rows(const ParamTable& t) {
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::isfinite(t.a1[i]) && std::isfinite(t.b1[i]) &&
              std::isfinite(t.a2[i]) && std::isfinite(t.b2[i])))
            throw std::invalid_argument("batch: non-finite parameters at row " +
                                        std::to_string(i));
    }
}

}  // namespace

ResultTable batch_wedge(const ParamTable& table, int n_terms, int workers) {
    require_rectangular(table);
    require_finite_rows(table);
    threshold_table();  // resolve thresholds before fanning out

    const std::size_t n = table.size();
    ResultTable out;
    out.value.resize(n);
    out.formula.resize(n);
    out.terms.resize(n);
    out.remainder_bound.resize(n);

    parallel_ranges(n, kMinChunkRows, resolve_workers(workers),
                    [&](std::size_t begin, std::size_t end) {
                        for (std::size_t i = begin; i < end; ++i) {
                            const WedgeResult r =
                                wedge_prob(WedgeParams(table.a1[i], table.b1[i],
                                                       table.a2[i], table.b2[i]),
                                           n_terms);
                            out.value[i] = r.value;
                            out.formula[i] = r.formula;
                            out.terms[i] = r.terms;
                            out.remainder_bound[i] = r.remainder_bound;
                        }
                    });
    return out;
}

ParamTable random_param_table(std::size_t size, std::uint64_t seed) {
    rng::Xoshiro256pp gen(seed);
    ParamTable t;
    t.a1.resize(size);
    t.b1.resize(size);
    t.a2.resize(size);
    t.b2.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        const auto draw = [&gen] {
            const double u = gen.uniform01();
            return 10.0 * u * u;
        };
        t.a1[i] = draw();
        t.b1[i] = draw();
        t.a2[i] = draw();
        t.b2[i] = draw();
    }
    return t;
}

std::vector<TimingRow> timing_harness(const std::vector<std::size_t>& sizes,
                                      const std::vector<int>& workers_list,
                                      std::uint64_t seed, int n_terms) {
    if (sizes.empty() || workers_list.empty())
        throw std::invalid_argument("timing: sizes and workers are required");
    for (const std::size_t n : sizes)
        if (n == 0) throw std::invalid_argument("timing: sizes must be >= 1");
    for (const int w : workers_list)
        if (w <= 0) throw std::invalid_argument("timing: workers must be >= 1");

    std::vector<TimingRow> rows;
    rows.reserve(sizes.size() * workers_list.size());
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const std::size_t n = sizes[si];
        ParamTable table;
        try {
            table = random_param_table(n, seed + si);
        } catch (const std::bad_alloc&) {
            throw std::runtime_error("timing: table of " + std::to_string(n) +
                                     " rows exceeds available memory");
        }
        for (const int w : workers_list) {
            const auto start = std::chrono::steady_clock::now();
            volatile double sink = 0.0;
            try {
                const ResultTable r = batch_wedge(table, n_terms, w);
                sink = r.value.back();
            } catch (const std::bad_alloc&) {
                throw std::runtime_error("timing: results for " +
                                         std::to_string(n) +
                                         " rows exceed available memory");
            }
            (void)sink;
            const std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - start;
            rows.push_back({n, w, elapsed.count()});
        }
    }
    return rows;
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
    out << "n,workers,seconds\n";
    char buf[64];
    for (const TimingRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%d,%.6f", r.n, r.workers,
                      r.seconds);
        out << buf << '\n';
    }
}

}  // namespace wedge
