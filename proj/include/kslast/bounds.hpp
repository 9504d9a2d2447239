#pragma once

#include "kslast/common.hpp"

#include <utility>
#include <vector>

namespace kslast {

/// Classical root bounds for theta = 1, k >= 2:
/// lower (e-1)(k-1), upper 4e((e-1)k + 1).
std::pair<double, double> classical_bounds(int k);

/// Which exponent the sharper lower bound uses. The `theorem` form has
/// epsilon(k) = 1/(2(k-1)); the `table` form, which the published comparison
/// values follow, has epsilon(k) = 1/(2k-1). Both share the same upper
/// bound. The table form is never above the theorem form.
enum class BoundVariant { theorem, table };

/// Sharper bounds for any theta > 0, k >= 2:
/// lower (e^{1/theta + epsilon(k)} - 1)(k-1),
/// upper (e^{1/theta + 1/((e-1)theta)} - 1)(k-1).
std::pair<double, double> root_bounds(int k, double theta, BoundVariant variant);

/// One row of the bounds comparison at theta = 1. Improvement factors are
/// computed from unrounded bounds: factor_lo = lo_new / lo_orig,
/// factor_hi = hi_orig / hi_new, factor_range is the ratio of interval
/// widths, old over new.
struct BoundsRow {
    int k = 0;
    double lo_orig = 0.0;
    double hi_orig = 0.0;
    double lo_new = 0.0;
    double hi_new = 0.0;
    double factor_lo = 0.0;
    double factor_hi = 0.0;
    double factor_range = 0.0;
};

std::vector<BoundsRow> comparison_table(const std::vector<int>& ks);

/// CSV rendering with every value rounded half-even to two decimals.
std::string comparison_table_csv(const std::vector<BoundsRow>& rows);

/// E[psi(X + k) - psi(k)] for X ~ Poisson(gamma), by direct summation with
/// the tail cut at gamma + 12 sqrt(gamma) + 40. At the critical root the
/// posterior-weighted form of this expectation equals 1/theta; the plain
/// form computed here sits strictly above that value, because the weight
/// decreases in the count while the summand increases.
double expected_varphi(double gamma, int k);

/// Poisson(gamma) reshaped for the coupling argument: mass at 1 .. m+1 kept,
/// everything else folded into an atom at 0. Stochastically dominated by
/// Poisson(gamma); masses sum to 1 exactly.
struct TruncatedPoisson {
    double gamma = 0.0;
    int m = 0;
    std::vector<double> pmf;  // index 0 .. m+1

    double mean() const;
};
TruncatedPoisson truncated_poisson(double gamma, int m);

/// The chain of expectation bounds around E[varphi] at a point gamma > 1:
/// upper by concavity, lower via a Binomial(m, 1 - 1/e) coupling, and a
/// second lower bound via the truncated variable above with m the largest
/// integer below gamma.
struct EmReport {
    double gamma = 0.0;
    int k = 0;
    double e_varphi = 0.0;           // E[varphi(X)], X ~ Poisson(gamma)
    double upper = 0.0;              // varphi(gamma)
    double lower_coupling = 0.0;     // (1 - 1/e) varphi(gamma - 1)
    double lower_truncated = 0.0;    // E[Y]/(gamma + 1) * varphi(gamma)
    bool upper_holds = false;
    bool coupling_holds = false;
    bool truncated_holds = false;
    bool all_hold() const { return upper_holds && coupling_holds && truncated_holds; }
};
EmReport em_check(double gamma, int k);

/// Finite distribution on support 0 .. pmf.size()-1.
struct FiniteDist {
    std::vector<double> pmf;
    void validate() const;
};

/// Verifies the three covariance-order inequalities for a nondecreasing f
/// and nonincreasing g tabulated on a common support:
///   (i)   E_X[f g] <= E_X[f] E_X[g]
///   (ii)  E_X[f g] <= E_Y[f] E_X[g]
///   (iii) E_Y[f g] >= E_X[f] E_Y[g]
/// Requires X stochastically below Y; violation of that order, or of the
/// stated monotonicity, raises a domain error.
struct CovarianceReport {
    bool first_holds = false;
    bool second_holds = false;
    bool third_holds = false;
    bool all_hold() const { return first_holds && second_holds && third_holds; }
};
CovarianceReport covariance_inequality_check(const FiniteDist& x, const FiniteDist& y,
                                             const std::vector<double>& f,
                                             const std::vector<double>& g);

/// Grid verifications backing the `verify em` suite.
CheckList check_em_grid();
CheckList check_covariance_inequalities();
CheckList check_binomial_poisson_order();

} // namespace kslast
