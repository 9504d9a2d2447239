#pragma once

#include "kslast/common.hpp"

#include <string>
#include <vector>

namespace kslast {

/// Named verification suites behind the `verify` command. Each returns the
/// concatenated per-point check lines of the underlying module grids:
///   signs      - finite-difference sign grids for the Gamma quotient and
///                both Kummer quotient results
///   em         - expectation inequality chain, covariance-order checks,
///                and the binomial/Poisson coupling order
///   identities - Kummer transformation, series vs integral agreement,
///                digamma recurrence
///   monotone   - root monotonicity across theta, the log-derivative
///                ordering that drives it, and cutoff monotonicity
CheckList run_verify_suite(const std::string& name, int n_threads = 0);

std::vector<std::string> verify_suite_names();

} // namespace kslast
