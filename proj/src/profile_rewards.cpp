#include "kslast/profile_rewards.hpp"

#include "kslast/special_functions.hpp"

#include <cmath>
#include <numeric>

namespace kslast {

void ModelParams::validate() const {
    if (!(theta > 0.0)) throw std::domain_error("ModelParams: theta must be positive");
    if (!(lambda > 0.0)) throw std::domain_error("ModelParams: lambda must be positive");
}

double success_probability(int k, double theta) {
    if (k < 1) throw std::domain_error("success_probability: k must be at least 1");
    if (!(theta > 0.0)) throw std::domain_error("success_probability: theta must be positive");
    return theta / (theta + k - 1);
}

double prob_no_success(int first, int last, double theta) {
    if (first < 1) throw std::domain_error("prob_no_success: first must be at least 1");
    if (!(theta > 0.0)) throw std::domain_error("prob_no_success: theta must be positive");
    double p = 1.0;
    for (int j = first; j <= last; ++j) p *= (j - 1) / (theta + j - 1);
    return p;
}

double prob_single_success(int first, int last, double theta) {
    if (!(theta > 0.0)) throw std::domain_error("prob_single_success: theta must be positive");
    if (first < 2 && last >= first)
        throw std::domain_error("prob_single_success: range must start at trial 2 or later");
    if (last < first) return 0.0;
    // prob_no_success(first, last) * sum_j p_j / (1 - p_j); every odds term
    // is theta / (j - 1).
    double odds = 0.0;
    for (int j = first; j <= last; ++j) odds += theta / (j - 1);
    return prob_no_success(first, last, theta) * odds;
}

double zero_success_reward(double x, int k, double theta) {
    if (!(x >= 0.0)) throw std::domain_error("zero_success_reward: x must be nonnegative");
    return kummer_m_scaled(k, theta, x);
}

double one_success_reward(double x, int k, double theta) {
    if (!(x >= 0.0)) throw std::domain_error("one_success_reward: x must be nonnegative");
    return theta * kummer_m_da_scaled(k, theta, x);
}

void PriorWeights::validate() const {
    if (weights.empty()) throw std::domain_error("PriorWeights: weights must be nonempty");
    double mass = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::domain_error("PriorWeights: weights must be nonnegative");
        mass += w;
    }
    if (std::abs(mass - 1.0) > mass_tol)
        throw std::domain_error("PriorWeights: total mass must be 1 within mass_tol");
}

PriorWeights poisson_prior(double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("poisson_prior: lambda must be positive");
    const int cap = static_cast<int>(lambda + 12.0 * std::sqrt(lambda) + 30.0);
    PriorWeights prior;
    prior.weights.resize(cap + 1);
    double w = std::exp(-lambda);
    for (int n = 0; n <= cap; ++n) {
        prior.weights[n] = w;
        w *= lambda / (n + 1);
    }
    prior.validate();
    return prior;
}

std::vector<double> posterior_weights(const PriorWeights& prior, double t, int k) {
    prior.validate();
    if (!(t >= 0.0) || !(t <= 1.0))
        throw std::domain_error("posterior_weights: t must lie in [0, 1]");
    if (k < 0) throw std::domain_error("posterior_weights: k must be nonnegative");
    const int max_n = static_cast<int>(prior.weights.size()) - 1;
    if (k > max_n)
        throw std::domain_error("posterior_weights: prior carries no mass at or above k");
    std::vector<double> w(max_n - k + 1);
    double binom = 1.0;  // C(k+j, k)
    double decay = 1.0;  // (1-t)^j
    double total = 0.0;
    for (int j = 0; j + k <= max_n; ++j) {
        if (j > 0) {
            binom *= static_cast<double>(k + j) / j;
            decay *= 1.0 - t;
        }
        w[j] = binom * prior.weights[k + j] * decay;
        total += w[j];
    }
    if (!(total > 0.0))
        throw std::domain_error("posterior_weights: degenerate posterior, no mass at N >= k");
    for (double& v : w) v /= total;
    return w;
}

namespace {

// Probability of exactly one success among trials first .. last, valid even
// when the range contains trial 1 (whose success is certain, forcing the
// lone success to land there).
double single_success_any_range(int first, int last, double theta) {
    if (last < first) return 0.0;
    if (first == 1) return prob_no_success(2, last, theta);
    return prob_single_success(first, last, theta);
}

}  // namespace

double mixture_reward(const PriorWeights& prior, double t, int k, double theta, RewardKind kind) {
    if (!(theta > 0.0)) throw std::domain_error("mixture_reward: theta must be positive");
    const std::vector<double> post = posterior_weights(prior, t, k);
    double value = 0.0;
    double zero = 1.0;  // prob_no_success(k+1, k+j)
    double odds = 0.0;  // sum of theta / (i - 1) over that range
    for (int j = 0; j < static_cast<int>(post.size()); ++j) {
        if (j > 0) {
            const int trial = k + j;
            if (trial == 1) {
                zero = 0.0;
            } else {
                zero *= (trial - 1) / (theta + trial - 1);
                odds += theta / (trial - 1);
            }
        }
        if (kind == RewardKind::zero_successes) {
            value += post[j] * zero;
        } else {
            const double one =
                (k >= 1) ? zero * odds : single_success_any_range(k + 1, k + j, theta);
            value += post[j] * one;
        }
    }
    return value;
}

}  // namespace kslast
