#pragma once

#include "kslast/common.hpp"

#include <iosfwd>
#include <vector>

namespace kslast {

/// Difference between the stop-at-next-success reward and the stop-now
/// reward at posterior mean x, both e^{-x}-scaled: negative means stopping
/// now is favored, positive means waiting is favored. Equals -1 at x = 0
/// and crosses zero exactly once.
double reward_gap(int k, double theta, double x);

/// One solved root: gamma is the unique zero of reward_gap(k, theta, .),
/// residual the gap value at gamma, bracket_* the initial sign-changing
/// bracket the solver confirmed.
struct RootRecord {
    int k = 0;
    double gamma = 0.0;
    double residual = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// Roots for k = 1 .. k_max at a fixed theta, strictly increasing in k.
struct RootTable {
    double theta = 1.0;
    double tol = 1e-10;
    std::vector<RootRecord> roots;

    int k_max() const { return static_cast<int>(roots.size()); }
    double gamma(int k) const;  // k in 1 .. k_max
    /// Raises numerical_error unless gamma is strictly increasing in k.
    void validate_increasing() const;
};

/// Solves reward_gap(k, theta, .) = 0 by safeguarded bisection with secant
/// acceleration, keeping a sign-changing bracket at every step and stopping
/// once the bracket width falls to tol.
RootRecord solve_root(int k, double theta, double tol = 1e-10);

/// Root table for k = 1 .. k_max. The parallel form distributes rows across
/// OpenMP threads (threads = 0 picks the runtime default) and is bit-for-bit
/// identical to the serial reference.
RootTable critical_roots(int k_max, double theta, double tol = 1e-10, int threads = 0);
RootTable critical_roots_serial(int k_max, double theta, double tol = 1e-10);

/// Smallest table covering lambda: rows are added until gamma_k >= lambda.
RootTable critical_roots_covering(double lambda, double theta, double tol = 1e-10,
                                  int threads = 0);

/// Limit of gamma_k / k as k grows: e^{1/theta} - 1.
double asymptotic_root_ratio(double theta);

/// Text serialization: a comment line carrying theta and tol, a header, then
/// one CSV record per k with full-precision fields.
std::string root_table_csv(const RootTable& table);
RootTable root_table_from_csv(std::istream& in);

} // namespace kslast
