#include "wedge/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wedge/parallel.hpp"
#include "wedge/rng.hpp"

namespace wedge {

std::vector<WedgeParams> sample_params(std::size_t count, std::uint64_t seed) {
    if (count == 0)
        throw std::invalid_argument("study: count must be >= 1");
    rng::Xoshiro256pp gen(seed);
    const auto draw = [&gen] {
        const double u = gen.uniform01();
        return 10.0 * u * u;
    };
    std::vector<WedgeParams> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double a1 = draw();
        const double b1 = draw();
        const double a2 = draw();
        const double b2 = draw();
        out.emplace_back(a1, b1, a2, b2);
    }
    return out;
}

StudyResult convergence_study(std::size_t count, double eps,
                              std::uint64_t seed, int workers) {
    if (!(eps > 0.0))
        throw std::invalid_argument("study: eps must be positive");
    const std::vector<WedgeParams> params = sample_params(count, seed);
    threshold_table();

    StudyResult result;
    result.records.resize(count,
                          ConvergenceRecord{WedgeParams(1, 1, 1, 1), 0, 0, 0,
                                            false});
    parallel_ranges(count, 1024, resolve_workers(workers),
                    [&](std::size_t begin, std::size_t end) {
                        for (std::size_t i = begin; i < end; ++i) {
                            const WedgeParams& p = params[i];
                            const WedgeResult w = wedge_prob(p);
                            ConvergenceRecord& rec = result.records[i];
                            rec.params = p;
                            rec.log_ab_plus = std::log(derive(p).ab_plus);
                            rec.n_doob =
                                terms_to_convergence(p, eps, Formula::doob);
                            rec.n_theta = terms_to_convergence(
                                p, eps, Formula::theta_dual);
                            rec.trivial =
                                w.formula == Formula::trivial_zero ||
                                w.formula == Formula::trivial_one;
                        }
                    });

    StudySummary& s = result.summary;
    s.count = count;
    for (const ConvergenceRecord& rec : result.records) {
        if (rec.trivial) {
            ++s.trivial;
            continue;
        }
        const int best = std::min(rec.n_doob, rec.n_theta);
        if (best <= 1)
            ++s.n1;
        else if (best == 2)
            ++s.n2;
        else if (best == 3)
            ++s.n3;
        else
            ++s.deeper;
    }
    return result;
}

void write_study_csv(std::ostream& out,
                     const std::vector<ConvergenceRecord>& records) {
    out << "a1,b1,a2,b2,log_ab_plus,n_doob,n_theta,trivial\n";
    char buf[256];
    for (const ConvergenceRecord& r : records) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d", r.params.a1,
                      r.params.b1, r.params.a2, r.params.b2, r.log_ab_plus,
                      r.n_doob, r.n_theta, r.trivial ? 1 : 0);
        out << buf << '\n';
    }
}

void write_study_summary(std::ostream& out, const StudySummary& s) {
    char buf[128];
    const auto line = [&](const char* label, std::size_t part) {
        std::snprintf(buf, sizeof buf, "%-12s %10zu  %6.2f%%", label, part,
                      100.0 * s.share(part));
        out << buf << '\n';
    };
    out << "tuples: " << s.count << '\n';
    line("trivial", s.trivial);
    line("N=1", s.n1);
    line("N=2", s.n2);
    line("N=3", s.n3);
    if (s.deeper > 0) line("N>3", s.deeper);
}

}  // namespace wedge
