// Wedge probabilities for standard Brownian motion.
//
// The wedge probability k(a1,b1;a2,b2) is the probability that a standard
// Brownian motion W satisfies  -a1*t - b1 <= W_t <= a2*t + b2  for all
// t >= 0. It is positive exactly when all four parameters are positive,
// and k(a,a;a,a) is the two-sided Kolmogorov-Smirnov limiting distribution
// evaluated at a.
//
// Two convergent series are available for k:
//
//   * Doob's classical exponential series, which converges fast when the
//     product x = a+*b+ of the averaged slope a+ = (a1+a2)/2 and averaged
//     intercept b+ = (b1+b2)/2 is large, and
//   * a theta-dual series obtained through Poisson summation, which
//     converges fast when x is small.
//
// Explicit bounds on the truncation remainders of both series cross at a
// threshold tau_N per term count N. Evaluating N terms of Doob's series
// when x >= tau_N, and of the dual series otherwise, guarantees an
// absolute error below the crossing value eps_N regardless of the
// parameters. For the default N = 3, eps_3 ~ 1.8e-17 is already below
// double-precision resolution.
//
// All functions here are pure and thread-safe; results are deterministic
// and independent of the calling context.

#pragma once

#include <array>
#include <stdexcept>

namespace wedge {

// Which evaluation path produced a result.
enum class Formula { doob, theta_dual, trivial_zero, trivial_one };

const char* to_string(Formula f) noexcept;

// Boundary parameters of the wedge: lower boundary -a1*t - b1, upper
// boundary a2*t + b2. Construction rejects non-finite values.
struct WedgeParams {
    double a1;
    double b1;
    double a2;
    double b2;

    WedgeParams(double a1_, double b1_, double a2_, double b2_);

    bool all_positive() const noexcept {
        return a1 > 0.0 && b1 > 0.0 && a2 > 0.0 && b2 > 0.0;
    }
};

// Half-sum/half-difference reparameterization. Satisfies the identity
// c^2 - 4*(a_minus*b_minus)*ab_plus = d^2.
struct DerivedParams {
    double a_plus;
    double a_minus;
    double b_plus;
    double b_minus;
    double c;        // (a1*b1 - a2*b2)/2
    double d;        // (a1*b2 - a2*b1)/2
    double ab_plus;  // a_plus * b_plus, the series selection variable
};

DerivedParams derive(const WedgeParams& p) noexcept;

struct WedgeResult {
    double value;            // probability, clamped to [0, 1]
    Formula formula;         // evaluation path taken
    int terms;               // series terms actually summed (0 if trivial)
    double remainder_bound;  // proven truncation bound (0 if trivial)
};

// Crossing point of the two remainder bounds for a given term count:
// tau is the value of ab_plus where they are equal, epsilon their common
// value there.
struct ThresholdEntry {
    int n_terms;
    double tau;
    double epsilon;
};

inline constexpr int kMinTerms = 2;
inline constexpr int kMaxTerms = 8;
inline constexpr int kDefaultTerms = 3;

// Truncation length of the reference partial sums used as a stand-in for
// the full series; every term beyond it underflows double precision for
// any ab_plus of practical size.
inline constexpr int kReferenceTerms = 200;

// Partial sum of Doob's series with n_terms terms (n_terms = 0 gives 1).
// Requires all parameters positive.
double k1_partial(const WedgeParams& p, int n_terms);

// Partial sum of the theta-dual series with n_terms terms (n_terms = 0
// gives 0). Requires all parameters positive. Each term is assembled as a
// single exponential of a combined exponent so that the prefactor
// exp(d^2/(2 ab_plus)) can never overflow on its own; the sum is
// accumulated in extended precision because terms may exceed 1 and cancel.
double k2_partial(const WedgeParams& p, int n_terms);

// Proven bound on the remainder of Doob's series after n_terms >= 2 terms.
double bound_r1(double ab_plus, int n_terms);

// Proven bound on the remainder of the theta-dual series after
// n_terms >= 1 terms.
double bound_r2(double ab_plus, int n_terms);

// Log-space versions, usable where the bound itself underflows.
double log_bound_r1(double ab_plus, int n_terms);
double log_bound_r2(double ab_plus, int n_terms);

// Solves for the bound crossing point of a given term count in 2..8 by
// bisection on the (strictly decreasing) difference of log-bounds.
ThresholdEntry solve_threshold(int n_terms);

// Thresholds for N = 2..8, solved once on first use and cross-checked
// against known reference values; a mismatch throws std::logic_error.
const std::array<ThresholdEntry, 7>& threshold_table();

// Evaluates the wedge probability with the threshold-selected series.
// Non-positive parameters yield a trivial zero; a proven bound placing
// the result within 1e-18 of 0 or 1 short-circuits without summation.
WedgeResult wedge_prob(const WedgeParams& p, int n_terms = kDefaultTerms);

// Two-sided Kolmogorov-Smirnov limiting CDF; equals
// wedge_prob(a,a,a,a).value bit for bit, via the specialized series.
double kolmogorov_cdf(double a);

// k(a,b1;a,b2) through the equal-slope simplification.
double wedge_equal_slopes(double a, double b1, double b2);

// k(a1,a1;a2,a2) through the slope-equals-intercept simplification.
double wedge_equal_all(double a1, double a2);

// Smallest N >= 0 such that the true remainder of the chosen series after
// N terms (measured against the kReferenceTerms-term reference) is below
// eps. `which` must be Formula::doob or Formula::theta_dual. Requires all
// parameters positive. Throws std::runtime_error if the series is not
// numerically summable for these parameters.
int terms_to_convergence(const WedgeParams& p, double eps, Formula which);

}  // namespace wedge
