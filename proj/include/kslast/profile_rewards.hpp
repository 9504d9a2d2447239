#pragma once

#include "kslast/common.hpp"

#include <vector>

namespace kslast {

/// Problem parameters: success-profile shape theta and arrival mean lambda.
struct ModelParams {
    double theta = 1.0;
    double lambda = 1.0;
    void validate() const;
};

/// Success probability of trial k: theta / (theta + k - 1). Equals 1 at
/// k = 1 for every theta.
double success_probability(int k, double theta);

/// Probability that trials first .. last all fail. An empty range
/// (last < first) gives 1. Any range containing trial 1 gives 0 exactly,
/// because trial 1 always succeeds.
double prob_no_success(int first, int last, double theta);

/// Probability that trials first .. last contain exactly one success.
/// Requires first >= 2 so that every failure factor is positive; ranges
/// containing trial 1 raise a domain error. Empty range gives 0.
double prob_single_success(int first, int last, double theta);

/// Closed-form state rewards at posterior mean x = (1 - t) * lambda for a
/// Poisson arrival count. zero_: probability that no further success occurs;
/// one_: probability that exactly one further success occurs.
double zero_success_reward(double x, int k, double theta);
double one_success_reward(double x, int k, double theta);

/// Prior over the total trial count: weights[n] is the mass at N = n.
/// Total mass must lie within mass_tol of 1.
struct PriorWeights {
    std::vector<double> weights;
    double mass_tol = 1e-12;
    void validate() const;
};

/// Poisson(lambda) prior truncated where its tail drops below 1e-12.
PriorWeights poisson_prior(double lambda);

/// Which reward a mixture query evaluates.
enum class RewardKind { zero_successes, one_success };

/// Posterior weights over the number of future trials j, given k trials seen
/// by time t under the prior: proportional to C(k+j, k) w_{k+j} (1-t)^j.
std::vector<double> posterior_weights(const PriorWeights& prior, double t, int k);

/// Brute-force posterior mixture of the stage rewards under an arbitrary
/// prior. For a Poisson prior this agrees with the closed forms above.
double mixture_reward(const PriorWeights& prior, double t, int k, double theta, RewardKind kind);

} // namespace kslast
