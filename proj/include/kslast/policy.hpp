#pragma once

#include "kslast/common.hpp"
#include "kslast/roots.hpp"

namespace kslast {

/// Arrival intensity over [0, 1]: either a constant rate or the power law
/// lambda(t) = (t + kappa)^alpha.
class IntensityModel {
public:
    static IntensityModel homogeneous(double lambda);
    static IntensityModel power_law(double kappa, double alpha);

    bool is_homogeneous() const { return kind_ == Kind::homogeneous; }
    double cumulative(double s) const;  // integral of the rate over [0, s]
    double total() const { return cumulative(1.0); }
    /// Inverse of the normalized arrival-time distribution
    /// F(s) = cumulative(s) / total(), for u in [0, 1].
    double arrival_time(double u) const;

    double rate_lambda() const { return lambda_; }
    double kappa() const { return kappa_; }
    double alpha() const { return alpha_; }

private:
    enum class Kind { homogeneous, power_law };
    Kind kind_ = Kind::homogeneous;
    double lambda_ = 0.0;
    double kappa_ = 0.0;
    double alpha_ = 0.0;
};

/// Observed position: time t in [0, 1] and index k of the success just seen.
struct State {
    double t = 0.0;
    int k = 0;
};

enum class Decision { stop, continue_search };

enum class StrategyKind { myopic, perturbed };

/// Time cutoffs per success index. Entries cover k = 1 .. cutoffs.size();
/// every later index has cutoff 0 (stop at any time). For the myopic rule
/// the stored entries are exactly those with a positive cutoff, so the end
/// of the vector is the all-further-cutoffs-are-zero marker.
struct StrategySpec {
    std::vector<double> cutoffs;
    StrategyKind kind = StrategyKind::myopic;
    double delta = 0.0;

    double cutoff(int k) const;
};

/// Myopic cutoffs a_k = max(0, 1 - gamma_k / lambda). The table must extend
/// to the first k with gamma_k >= lambda.
StrategySpec myopic_cutoffs(double lambda, const RootTable& table);

/// Perturbs every stored cutoff to clamp(a_k + delta, 0, 1); the implicit
/// zero tail is left alone.
StrategySpec perturb(const StrategySpec& base, double delta);

/// Myopic decision at a success state: stop when (1 - t) * lambda is at most
/// gamma_k. For k beyond the table the verdict is stop, which is valid
/// because the table reaches gamma >= lambda.
Decision decide(const State& state, double lambda, const RootTable& table);

/// Same rule driven by a nonuniform arrival intensity: stop when the
/// remaining expected arrivals total() - cumulative(t) is at most gamma_k.
Decision decide_inhomogeneous(const State& state, const IntensityModel& model,
                              const RootTable& table);

/// Expected number of successes of the continuous model in [t0, t1]:
/// the integral of kappa (t + kappa)^{alpha - 1}.
double expected_successes(double t0, double t1, double kappa, double alpha);

/// Threshold time for aiming at the ell-th success from the end: the latest
/// t with expected_successes(t, 1) >= ell, clamped into [0, 1). When even
/// expected_successes(0, 1) < ell the threshold clamps to 0; *clamped (when
/// non-null) reports that condition.
double cont_threshold(int ell, double kappa, double alpha, bool* clamped = nullptr);

/// Winning probability at an interior threshold: e^{-ell} ell^ell / ell!.
double win_prob_formula(int ell);

/// Probability of exactly ell successes in (t, 1] for the alpha = 0 model:
/// Poisson mass at ell with mean kappa * log((1 + kappa) / (t + kappa)).
double success_count_prob(double t, int ell, double kappa);

/// Text serialization of a strategy, matching the root-table layout with
/// columns k, cutoff.
std::string strategy_csv(const StrategySpec& spec);

/// Discrete profile convergence to the continuous one: with theta = kappa*n,
/// the success probability at index floor(t*n) + 1 approaches
/// kappa / (kappa + t) at rate 1/n.
CheckList check_profile_scaling_limit();

} // namespace kslast
