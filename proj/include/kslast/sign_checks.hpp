#pragma once

#include "kslast/common.hpp"

#include <vector>

namespace kslast {

/// Sign of a central-difference derivative estimate: -1, 0, or +1. The sign
/// is declared 0 when the estimate magnitude falls below
/// max(1e-9, 10 * truncation error), with the truncation error taken from a
/// Richardson comparison of step h against h/2.
int derivative_sign_of(double d_h, double d_half);

/// Sign of d/dx [ Gamma(x) / Gamma(x + c) ], by central differences at step
/// fd_step. Predicted sign is -sign(c). Requires x > 0 and x + c > 0 with
/// room for the step.
int gamma_ratio_derivative_sign(double x, double c, double fd_step = 1e-5);

/// Sign of d/da [ M(a, c1, x) / M(a, c2, x) ]. The sensitivity of M to its
/// first parameter falls as the second parameter grows, so the predicted
/// sign is sign(c2 - c1). Requires c1, c2 > a > 0 with room for the step.
int kummer_ratio_sign_in_a(double a, double c1, double c2, double x, double fd_step = 1e-5);

/// Sign of d/dc [ M(a1, c, x) / M(a2, c, x) ]. Predicted sign is
/// sign(a2 - a1). Requires c > a1, a2 > 0 with room for the step.
int kummer_ratio_sign_in_c(double a1, double a2, double c, double x, double fd_step = 1e-5);

/// Verifies D_a log M(k+1, k+1+theta, x) < D_a log M(k, k+theta, x) at every
/// grid point: the left side of the root equation falls when k steps up, the
/// ordering that forces the critical roots to increase in k.
CheckList log_derivative_ordering(int k, double theta, const std::vector<double>& x_grid);

/// Grid verifications backing the `verify signs` suite; each emits one line
/// per grid point (inputs, FD estimate, predicted sign, verdict) and covers
/// more than 200 points.
CheckList check_gamma_ratio_sign_grid();
CheckList check_kummer_ratio_sign_a_grid();
CheckList check_kummer_ratio_sign_c_grid();

} // namespace kslast
