#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>

#include "wedge/batch.hpp"
#include "wedge/parallel.hpp"

using namespace wedge;

namespace {

bool identical(const ResultTable& a, const ResultTable& b) {
    return a.value == b.value && a.formula == b.formula && a.terms == b.terms &&
           a.remainder_bound == b.remainder_bound;
}

}  // namespace

TEST_CASE("batch_wedge: degenerate tables") {
    const ResultTable empty = batch_wedge(ParamTable{});
    CHECK(empty.size() == 0);

    ParamTable one;
    one.a1 = {1.3};
    one.b1 = {0.7};
    one.a2 = {2.0};
    one.b2 = {0.9};
    const ResultTable r = batch_wedge(one);
    REQUIRE(r.size() == 1);
    const WedgeResult direct = wedge_prob(WedgeParams(1.3, 0.7, 2.0, 0.9));
    CHECK(r.value[0] == direct.value);
    CHECK(r.formula[0] == direct.formula);
    CHECK(r.terms[0] == direct.terms);
    CHECK(r.remainder_bound[0] == direct.remainder_bound);
}

TEST_CASE("batch_wedge: input validation") {
    ParamTable bad;
    bad.a1 = {1, 2};
    bad.b1 = {1};
    bad.a2 = {1, 2};
    bad.b2 = {1, 2};
    CHECK_THROWS_AS(batch_wedge(bad), std::invalid_argument);

    ParamTable nan_row;
    nan_row.a1 = {1, 2, 3};
    nan_row.b1 = {1, 2, 3};
    nan_row.a2 = {1, std::nan(""), 3};
    nan_row.b2 = {1, 2, 3};
    CHECK_THROWS_WITH_AS(batch_wedge(nan_row),
                         "batch: non-finite parameters at row 1",
                         std::invalid_argument);
}

TEST_CASE("batch_wedge: matches row-by-row evaluation and stays in range") {
    const ParamTable table = random_param_table(50000, 913);
    const ResultTable r = batch_wedge(table);
    REQUIRE(r.size() == table.size());
    int max_terms = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r.value[i] >= 0.0);
        CHECK(r.value[i] <= 1.0);
        max_terms = std::max(max_terms, static_cast<int>(r.terms[i]));
    }
    CHECK(max_terms <= 3);
    for (std::size_t i = 0; i < r.size(); i += 997) {
        const WedgeResult direct = wedge_prob(
            WedgeParams(table.a1[i], table.b1[i], table.a2[i], table.b2[i]));
        CHECK(r.value[i] == direct.value);
        CHECK(r.formula[i] == direct.formula);
    }
}

TEST_CASE("batch_wedge: bit-identical across worker counts") {
    const ParamTable table = random_param_table(100000, 4242);
    const ResultTable w1 = batch_wedge(table, kDefaultTerms, 1);
    const ResultTable w2 = batch_wedge(table, kDefaultTerms, 2);
    const ResultTable w8 = batch_wedge(table, kDefaultTerms, 8);
    CHECK(identical(w1, w2));
    CHECK(identical(w1, w8));
}

TEST_CASE("batch_wedge: permuting rows permutes results") {
    const ParamTable table = random_param_table(4000, 5);
    const std::size_t n = table.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[(i * 48271 + 11) % (i + 1)]);

    ParamTable shuffled;
    shuffled.a1.resize(n);
    shuffled.b1.resize(n);
    shuffled.a2.resize(n);
    shuffled.b2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        shuffled.a1[i] = table.a1[perm[i]];
        shuffled.b1[i] = table.b1[perm[i]];
        shuffled.a2[i] = table.a2[perm[i]];
        shuffled.b2[i] = table.b2[perm[i]];
    }
    const ResultTable base = batch_wedge(table);
    const ResultTable shuf = batch_wedge(shuffled);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(shuf.value[i] == base.value[perm[i]]);
        CHECK(shuf.formula[i] == base.formula[perm[i]]);
    }
}

TEST_CASE("resolve_workers: explicit, environment, fallback") {
    CHECK(resolve_workers(3) == 3);
    setenv("WEDGE_WORKERS", "5", 1);
    CHECK(resolve_workers(0) == 5);
    CHECK(resolve_workers(2) == 2);  // explicit beats the environment
    setenv("WEDGE_WORKERS", "junk", 1);
    CHECK(resolve_workers(0) >= 1);
    setenv("WEDGE_WORKERS", "0", 1);
    CHECK(resolve_workers(0) >= 1);
    unsetenv("WEDGE_WORKERS");
    CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("random_param_table: deterministic and in range") {
    const ParamTable a = random_param_table(3000, 77);
    const ParamTable b = random_param_table(3000, 77);
    CHECK(a.a1 == b.a1);
    CHECK(a.b2 == b.b2);
    const ParamTable c = random_param_table(3000, 78);
    CHECK(a.a1 != c.a1);
    for (const double v : a.a1) {
        CHECK(v > 0.0);
        CHECK(v < 10.0);
    }
}

TEST_CASE("timing_harness: shape, validation and determinism of the data") {
    CHECK_THROWS_AS(timing_harness({0}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(timing_harness({}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(timing_harness({100}, {0}), std::invalid_argument);

    const auto rows = timing_harness({1000, 2000}, {1, 2}, 99);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].n == 1000);
    CHECK(rows[0].workers == 1);
    CHECK(rows[1].workers == 2);
    CHECK(rows[2].n == 2000);
    for (const TimingRow& r : rows) CHECK(r.seconds >= 0.0);

    // The numbers behind the timings are reproducible run to run.
    const ResultTable r1 = batch_wedge(random_param_table(1000, 99), 3, 1);
    const ResultTable r2 = batch_wedge(random_param_table(1000, 99), 3, 2);
    CHECK(identical(r1, r2));

    std::ostringstream csv;
    write_timing_csv(csv, rows);
    CHECK(csv.str().rfind("n,workers,seconds\n1000,1,", 0) == 0);
}
