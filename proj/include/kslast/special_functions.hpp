#pragma once

#include "kslast/common.hpp"

namespace kslast {

/// Truncation control for hypergeometric-type series. A series stops once
/// the next term magnitude falls to rel_tol times the running sum, after the
/// terms have begun decreasing; exceeding max_terms raises numerical_error.
struct SeriesControl {
    double rel_tol = 1e-14;
    int max_terms = 10000;
    void validate() const;
};

/// Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1.
double pochhammer(double x, int n);

/// Digamma function psi(x) for x > 0. Arguments below 10 are shifted up by
/// the recurrence psi(x+1) = psi(x) + 1/x, then an asymptotic expansion with
/// seven Bernoulli terms is applied. Relative error stays below 1e-12.
double digamma(double x);

/// psi(x + k) - psi(k): the generalized harmonic difference. At integer x
/// this equals H_{k+x-1} - H_{k-1}. Requires x >= 0 and k >= 1.
double generalized_harmonic(double x, int k);

/// (k)_n / (k + theta)_n, the probability that trials k+1 .. k+n all fail
/// under the success profile theta / (theta + j - 1). Requires n >= 0,
/// k >= 1, theta > 0. Nonincreasing and log-convex in n.
double pochhammer_ratio(int n, int k, double theta);

/// Kummer confluent hypergeometric M(a, c, x) by the ascending series.
/// c must not be a nonpositive integer.
double kummer_m(double a, double c, double x, SeriesControl ctl = {});

/// M(a, c, x) for c > a > 0 by adaptive quadrature of the Euler integral
/// representation. Endpoint singularities (a < 1 or c - a < 1) are removed
/// by a power substitution on a split-off end piece.
double kummer_m_integral(double a, double c, double x);

/// First-parameter derivative D_a M(a, c, x) evaluated at a = k,
/// c = k + theta: the series sum_n x^n / n! * pochhammer_ratio(n, k, theta)
/// * generalized_harmonic(n, k). Requires k >= 1, theta > 0, x >= 0.
double kummer_m_da(int k, double theta, double x, SeriesControl ctl = {});

/// e^{-x}-scaled values of M(k, k+theta, x) and D_a M(k, k+theta, x). The
/// Poisson weight e^{-x} x^n / n! is folded into the term recurrence and the
/// sum is taken over a window around n = x, so arguments in the thousands
/// neither overflow nor lose the leading digits.
struct ScaledKummer {
    double m;
    double da;
};
ScaledKummer kummer_scaled(int k, double theta, double x);
double kummer_m_scaled(int k, double theta, double x);
double kummer_m_da_scaled(int k, double theta, double x);

/// Grid verifications backing the `verify identities` suite.
CheckList check_kummer_transformation();
CheckList check_series_integral_agreement();
CheckList check_digamma_recurrence();

} // namespace kslast
