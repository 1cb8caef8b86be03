#include "wedge/core.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace wedge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = std::numbers::pi_v<long double>;

// Short-circuit cutoff: a result is reported as exactly 0 or 1 only when a
// proven bound places it within this distance of the endpoint.
constexpr double kTrivialCutoff = 1e-18;
const double kLogTrivialCutoff = std::log(kTrivialCutoff);

// exp(x) is exactly 0.0 for x < -800 (double) / -11500 (80-bit); skipping
// the call there keeps long tail sums cheap without changing any bit.
constexpr double kExpUnderflow = -800.0;
constexpr long double kExpUnderflowL = -11500.0L;

// Series inputs reduced to the quantities the terms actually depend on.
// c and d enter Doob's series only through {base - m|c|, base + m|c|}
// pairs and the dual series only through even cosines, so their absolute
// values are used throughout; this makes both evaluations invariant, bit
// for bit, under the (a1,b1)<->(a2,b2) and slope<->intercept symmetries.
struct Reduced {
    double x;     // ab_plus
    double amb;   // a_minus * b_minus
    double cabs;  // |c|
    double dabs;  // |d|
};

Reduced reduce(const DerivedParams& q) noexcept {
    return {q.ab_plus, q.a_minus * q.b_minus, std::fabs(q.c), std::fabs(q.d)};
}

// One Doob term: e^{-2A_n} + e^{-2B_n} - e^{-2C_n} - e^{-2D_n} with the
// exponents assembled from the reduced parameters. All four exponents are
// non-negative for positive parameters, so every factor is in (0, 1].
double doob_term(const Reduced& r, int n) noexcept {
    const double odd = 2 * n - 1;
    const double even = 2 * n;
    const double bo = odd * odd * r.x + r.amb;
    const double u = odd * r.cabs;
    const double be = even * even * r.x;
    const double v = even * r.dabs;
    return (std::exp(-2.0 * (bo - u)) + std::exp(-2.0 * (bo + u))) -
           (std::exp(-2.0 * (be + v)) + std::exp(-2.0 * (be - v)));
}

double doob_sum(const Reduced& r, int n_terms) noexcept {
    double s = 0.0;
    for (int n = 1; n <= n_terms; ++n) s += doob_term(r, n);
    return s;
}

// Dual-series state. Terms can be far larger than the final sum when
// d^2/(2x) is large, so everything runs in extended precision to keep the
// cancellation error below 1e-15 over the whole admissible range.
struct ThetaEval {
    long double pe;   // d^2 / (2x), folded into every exponential
    long double q8;   // pi^2 / (8x)
    long double ang;  // pi / (2x)
    long double cl;
    long double dl;

    explicit ThetaEval(const Reduced& r) noexcept
        : pe(static_cast<long double>(r.dabs) * r.dabs / (2.0L * r.x)),
          q8(kPiL * kPiL / (8.0L * r.x)),
          ang(kPiL / (2.0L * r.x)),
          cl(r.cabs),
          dl(r.dabs) {}

    long double term(int n) const noexcept {
        const long double odd = 2 * n - 1;
        const long double even = 2 * n;
        const long double te =
            std::exp(pe - q8 * even * even) *
            (std::cos(ang * even * dl) - std::cos(ang * even * cl));
        const long double to =
            std::exp(pe - q8 * odd * odd) *
            (std::cos(ang * odd * dl) + std::cos(ang * odd * cl));
        return te + to;
    }
};

long double theta_prefactor(double x) noexcept {
    return std::sqrt(kPiL / (2.0L * static_cast<long double>(x)));
}

double theta_value(const Reduced& r, int n_terms) noexcept {
    const ThetaEval ev(r);
    long double s = 0.0L;
    for (int n = 1; n <= n_terms; ++n) s += ev.term(n);
    return static_cast<double>(theta_prefactor(r.x) * s);
}

// Kolmogorov special case, term grouping identical to the general kernels
// (amb = c = d = 0) so the results agree bit for bit.
double ks_doob_value(double x, int n_terms) noexcept {
    double s = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        const double odd = 2 * n - 1;
        const double even = 2 * n;
        s += 2.0 * std::exp(-2.0 * (odd * odd * x)) -
             2.0 * std::exp(-2.0 * (even * even * x));
    }
    return 1.0 - s;
}

double ks_theta_value(double x, int n_terms) noexcept {
    const long double q8 = kPiL * kPiL / (8.0L * static_cast<long double>(x));
    long double s = 0.0L;
    for (int n = 1; n <= n_terms; ++n) {
        const long double odd = 2 * n - 1;
        s += 2.0L * std::exp(0.0L - q8 * odd * odd);
    }
    return static_cast<double>(theta_prefactor(x) * s);
}

// Upper bound on the total mass of Doob's series. Each of the four
// exponent families grows at least linearly by its first value, so each
// sub-series is dominated by a geometric series with ratio equal to its
// first term; for totals below the trivial cutoff that ratio is far below
// 1/2, giving the factor-2 majorant.
double doob_total_bound(const Reduced& r) noexcept {
    const double min_ab = (r.x + r.amb) - r.cabs;  // min(A_1, B_1)
    const double four_x = 4.0 * r.x;
    const double v = 2.0 * r.dabs;
    return 4.0 * std::exp(-2.0 * min_ab) +
           (2.0 * std::exp(-2.0 * (four_x + v)) +
            2.0 * std::exp(-2.0 * (four_x - v)));
}

// Log of an upper bound on the whole theta-dual value:
// sqrt(2 pi / x) e^{2x} sum_{m>=1} e^{-pi^2 m^2/(8x)}, with the sum
// majorized by its first term times (1 + 4x/pi^2).
double log_theta_total_bound(double x) noexcept {
    return 0.5 * std::log(2.0 * kPi / x) + 2.0 * x - kPi * kPi / (8.0 * x) +
           std::log1p(4.0 * x / (kPi * kPi));
}

double clamp01(double v) noexcept {
    assert(v > -1e-15 && v < 1.0 + 1e-15);
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

void require_positive(const WedgeParams& p) {
    if (!p.all_positive())
        throw std::domain_error("wedge: all four parameters must be positive");
}

void require_terms_range(int n_terms) {
    if (n_terms < kMinTerms || n_terms > kMaxTerms)
        throw std::invalid_argument("wedge: n_terms must be in [2, 8], got " +
                                    std::to_string(n_terms));
}

// Reference values the solved thresholds must reproduce (tau within 1e-3,
// epsilon within 5 percent).
struct ThresholdRef {
    double tau;
    double eps;
};
constexpr std::array<ThresholdRef, 7> kThresholdRefs = {{
    {1.380, 2.9e-6},
    {1.136, 1.8e-17},
    {1.030, 5.1e-34},
    {0.973, 5.6e-56},
    {0.937, 2.3e-83},
    {0.912, 3.5e-116},
    {0.895, 1.9e-154},
}};

}  // namespace

const char* to_string(Formula f) noexcept {
    switch (f) {
        case Formula::doob: return "doob";
        case Formula::theta_dual: return "theta_dual";
        case Formula::trivial_zero: return "trivial_zero";
        case Formula::trivial_one: return "trivial_one";
    }
    return "unknown";
}

WedgeParams::WedgeParams(double a1_, double b1_, double a2_, double b2_)
    : a1(a1_), b1(b1_), a2(a2_), b2(b2_) {
    if (!(std::isfinite(a1) && std::isfinite(b1) && std::isfinite(a2) &&
          std::isfinite(b2)))
        throw std::invalid_argument("wedge: parameters must be finite");
}

DerivedParams derive(const WedgeParams& p) noexcept {
    DerivedParams q;
    q.a_plus = 0.5 * (p.a1 + p.a2);
    q.a_minus = 0.5 * (p.a1 - p.a2);
    q.b_plus = 0.5 * (p.b1 + p.b2);
    q.b_minus = 0.5 * (p.b1 - p.b2);
    q.c = 0.5 * (p.a1 * p.b1 - p.a2 * p.b2);
    q.d = 0.5 * (p.a1 * p.b2 - p.a2 * p.b1);
    q.ab_plus = q.a_plus * q.b_plus;
    return q;
}

double k1_partial(const WedgeParams& p, int n_terms) {
    require_positive(p);
    if (n_terms < 0)
        throw std::invalid_argument("wedge: n_terms must be non-negative");
    if (n_terms == 0) return 1.0;
    return 1.0 - doob_sum(reduce(derive(p)), n_terms);
}

double k2_partial(const WedgeParams& p, int n_terms) {
    require_positive(p);
    if (n_terms < 0)
        throw std::invalid_argument("wedge: n_terms must be non-negative");
    if (n_terms == 0) return 0.0;
    return theta_value(reduce(derive(p)), n_terms);
}

double log_bound_r1(double ab_plus, int n_terms) {
    if (!(ab_plus > 0.0))
        throw std::domain_error("wedge: ab_plus must be positive");
    if (n_terms < 2)
        throw std::invalid_argument(
            "wedge: the Doob remainder bound requires n_terms >= 2");
    const double nm1 = n_terms - 1;
    return -std::log(4.0 * ab_plus * nm1) - 8.0 * ab_plus * nm1 * nm1;
}

double log_bound_r2(double ab_plus, int n_terms) {
    if (!(ab_plus > 0.0))
        throw std::domain_error("wedge: ab_plus must be positive");
    if (n_terms < 1)
        throw std::invalid_argument(
            "wedge: the dual remainder bound requires n_terms >= 1");
    const double n = n_terms;
    return 1.5 * std::log(2.0 / kPi) + 0.5 * std::log(ab_plus) - std::log(n) +
           2.0 * ab_plus - kPi * kPi * n * n / (2.0 * ab_plus);
}

double bound_r1(double ab_plus, int n_terms) {
    return std::exp(log_bound_r1(ab_plus, n_terms));
}

double bound_r2(double ab_plus, int n_terms) {
    return std::exp(log_bound_r2(ab_plus, n_terms));
}

ThresholdEntry solve_threshold(int n_terms) {
    require_terms_range(n_terms);
    // log bound_r1 - log bound_r2 is strictly decreasing in ab_plus: the
    // Doob bound falls and the dual bound grows. The crossing is bracketed
    // well inside [1e-6, 16] for every supported N.
    double lo = 1e-6, hi = 16.0;
    const auto diff = [n_terms](double x) {
        return log_bound_r1(x, n_terms) - log_bound_r2(x, n_terms);
    };
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) > 0.0 ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    if (std::fabs(diff(tau)) > 1e-12)
        throw std::logic_error("wedge: threshold bisection failed to converge");
    return {n_terms, tau, std::exp(log_bound_r1(tau, n_terms))};
}

const std::array<ThresholdEntry, 7>& threshold_table() {
    static const std::array<ThresholdEntry, 7> table = [] {
        std::array<ThresholdEntry, 7> t{};
        for (int n = kMinTerms; n <= kMaxTerms; ++n) {
            t[n - 2] = solve_threshold(n);
            const ThresholdRef& ref = kThresholdRefs[n - 2];
            if (std::fabs(t[n - 2].tau - ref.tau) > 1e-3 ||
                std::fabs(std::log(t[n - 2].epsilon / ref.eps)) >
                    std::log(1.05))
                throw std::logic_error(
                    "wedge: threshold self-check failed for N=" +
                    std::to_string(n));
        }
        return t;
    }();
    return table;
}

WedgeResult wedge_prob(const WedgeParams& p, int n_terms) {
    require_terms_range(n_terms);
    if (!p.all_positive()) return {0.0, Formula::trivial_zero, 0, 0.0};

    const Reduced r = reduce(derive(p));
    if (doob_total_bound(r) < kTrivialCutoff)
        return {1.0, Formula::trivial_one, 0, 0.0};
    if (log_theta_total_bound(r.x) < kLogTrivialCutoff)
        return {0.0, Formula::trivial_zero, 0, 0.0};

    const ThresholdEntry& te = threshold_table()[n_terms - 2];
    if (r.x >= te.tau) {
        const double v = 1.0 - doob_sum(r, n_terms);
        return {clamp01(v), Formula::doob, n_terms, bound_r1(r.x, n_terms)};
    }
    const double v = theta_value(r, n_terms);
    return {clamp01(v), Formula::theta_dual, n_terms, bound_r2(r.x, n_terms)};
}

double kolmogorov_cdf(double a) {
    if (std::isnan(a))
        throw std::invalid_argument("wedge: kolmogorov_cdf of NaN");
    if (a <= 0.0) return 0.0;
    const double x = a * a;
    const Reduced r{x, 0.0, 0.0, 0.0};
    if (doob_total_bound(r) < kTrivialCutoff) return 1.0;
    if (log_theta_total_bound(x) < kLogTrivialCutoff) return 0.0;
    const double tau = threshold_table()[kDefaultTerms - 2].tau;
    const double v = x >= tau ? ks_doob_value(x, kDefaultTerms)
                              : ks_theta_value(x, kDefaultTerms);
    return clamp01(v);
}

double wedge_equal_slopes(double a, double b1, double b2) {
    if (!(std::isfinite(a) && std::isfinite(b1) && std::isfinite(b2)))
        throw std::invalid_argument("wedge: parameters must be finite");
    if (!(a > 0.0 && b1 > 0.0 && b2 > 0.0)) return 0.0;

    // a_minus = 0 and d = -c, so the even dual terms vanish exactly and
    // the odd cosines coincide; everything else matches the general path.
    const Reduced r = reduce(derive(WedgeParams(a, b1, a, b2)));
    if (doob_total_bound(r) < kTrivialCutoff) return 1.0;
    if (log_theta_total_bound(r.x) < kLogTrivialCutoff) return 0.0;
    const double tau = threshold_table()[kDefaultTerms - 2].tau;
    if (r.x >= tau) return clamp01(1.0 - doob_sum(r, kDefaultTerms));

    const ThetaEval ev(r);
    long double s = 0.0L;
    for (int n = 1; n <= kDefaultTerms; ++n) {
        const long double odd = 2 * n - 1;
        s += 2.0L * std::exp(ev.pe - ev.q8 * odd * odd) *
             std::cos(ev.ang * odd * ev.dl);
    }
    return clamp01(static_cast<double>(theta_prefactor(r.x) * s));
}

double wedge_equal_all(double a1, double a2) {
    if (!(std::isfinite(a1) && std::isfinite(a2)))
        throw std::invalid_argument("wedge: parameters must be finite");
    if (!(a1 > 0.0 && a2 > 0.0)) return 0.0;

    // d = 0: the even Doob exponents pair up and the dual cosine of d is 1.
    const Reduced r = reduce(derive(WedgeParams(a1, a1, a2, a2)));
    if (doob_total_bound(r) < kTrivialCutoff) return 1.0;
    if (log_theta_total_bound(r.x) < kLogTrivialCutoff) return 0.0;
    const double tau = threshold_table()[kDefaultTerms - 2].tau;
    if (r.x >= tau) {
        double s = 0.0;
        for (int n = 1; n <= kDefaultTerms; ++n) {
            const double odd = 2 * n - 1;
            const double even = 2 * n;
            const double bo = odd * odd * r.x + r.amb;
            const double u = odd * r.cabs;
            s += (std::exp(-2.0 * (bo - u)) + std::exp(-2.0 * (bo + u))) -
                 2.0 * std::exp(-2.0 * (even * even * r.x));
        }
        return clamp01(1.0 - s);
    }
    const ThetaEval ev(r);
    long double s = 0.0L;
    for (int n = 1; n <= kDefaultTerms; ++n) {
        const long double odd = 2 * n - 1;
        const long double even = 2 * n;
        s += std::exp(ev.pe - ev.q8 * even * even) *
             (1.0L - std::cos(ev.ang * even * ev.cl));
        s += std::exp(ev.pe - ev.q8 * odd * odd) *
             (1.0L + std::cos(ev.ang * odd * ev.cl));
    }
    return clamp01(static_cast<double>(theta_prefactor(r.x) * s));
}

int terms_to_convergence(const WedgeParams& p, double eps, Formula which) {
    require_positive(p);
    if (!(eps > 0.0))
        throw std::invalid_argument("wedge: eps must be positive");
    if (which != Formula::doob && which != Formula::theta_dual)
        throw std::invalid_argument(
            "wedge: terms_to_convergence needs doob or theta_dual");

    const Reduced r = reduce(derive(p));

    // tails[N] = |K_inf - K_N| approximated by the reference truncation;
    // summing the tail directly keeps the comparison free of the rounding
    // noise of the full partial sums.
    if (which == Formula::doob) {
        std::array<double, kReferenceTerms + 1> tails{};
        tails[kReferenceTerms] = 0.0;
        for (int n = kReferenceTerms; n >= 1; --n) {
            const double odd = 2 * n - 1;
            const double even = 2 * n;
            const double min_exp =
                std::fmin(odd * odd * r.x + r.amb - odd * r.cabs,
                          even * even * r.x - even * r.dabs);
            const double t =
                -2.0 * min_exp < kExpUnderflow ? 0.0 : doob_term(r, n);
            tails[n - 1] = tails[n] + t;
            if (!std::isfinite(tails[n - 1]))
                throw std::runtime_error(
                    "wedge: series not summable for these parameters");
        }
        for (int n = 0; n <= kReferenceTerms; ++n)
            if (std::fabs(tails[n]) < eps) return n;
    } else {
        const ThetaEval ev(r);
        const long double pref = theta_prefactor(r.x);
        std::array<long double, kReferenceTerms + 1> tails{};
        tails[kReferenceTerms] = 0.0L;
        for (int n = kReferenceTerms; n >= 1; --n) {
            const long double odd = 2 * n - 1;
            const long double lead = ev.pe - ev.q8 * odd * odd;
            const long double t = lead < kExpUnderflowL ? 0.0L : ev.term(n);
            tails[n - 1] = tails[n] + t;
            if (!std::isfinite(static_cast<double>(tails[n - 1])))
                throw std::runtime_error(
                    "wedge: series not summable for these parameters");
        }
        for (int n = 0; n <= kReferenceTerms; ++n)
            if (std::fabs(static_cast<double>(pref * tails[n])) < eps) return n;
    }
    throw std::runtime_error(
        "wedge: no truncation below the requested precision");
}

}  // namespace wedge
