#pragma once

#include "kslast/policy.hpp"
#include "kslast/profile_rewards.hpp"
#include "kslast/roots.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kslast {

/// Monte Carlo run configuration. `ell` is the target rank for the
/// continuous model (stop at the last arrival that leaves ell - 1
/// successors); the discrete simulators cover the last-success case and
/// require ell == 1.
struct SimConfig {
    std::uint64_t n_trials = 1000000;
    std::uint64_t seed = 0;
    int ell = 1;

    void validate() const;
};

struct WinStats {
    std::uint64_t trials = 0;
    std::uint64_t wins = 0;
    double p_hat = 0.0;
    double std_err = 0.0;
    /// Beyond-cap Poisson draws that were rejected and redrawn.
    std::uint64_t redraws = 0;
};

WinStats make_win_stats(std::uint64_t trials, std::uint64_t wins,
                        std::uint64_t redraws = 0);

/// Marked Poisson model of the discrete problem: N ~ Poisson(lambda)
/// trials at sorted uniform times, trial k succeeding with probability
/// theta / (theta + k - 1). A win is a stop at the last success; a
/// replicate that never stops (including N = 0) is a loss.
///
/// Replicate i draws from generator stream (seed, i), so the parallel
/// kernel and the serial reference produce bit-identical WinStats.
WinStats simulate_homogeneous(const ModelParams& params,
                              const StrategySpec& strategy,
                              const SimConfig& cfg, int n_threads = 0);
WinStats simulate_homogeneous_serial(const ModelParams& params,
                                     const StrategySpec& strategy,
                                     const SimConfig& cfg);

/// Inhomogeneous variant: N ~ Poisson(total mean), arrival times drawn
/// from the normalized mean function, stop rule compares the remaining
/// mean against the critical root for the trial index.
WinStats simulate_inhomogeneous(const IntensityModel& model, double theta,
                                const RootTable& table, const SimConfig& cfg,
                                int n_threads = 0);
WinStats simulate_inhomogeneous_serial(const IntensityModel& model,
                                       double theta, const RootTable& table,
                                       const SimConfig& cfg);

/// Continuous limit model: the success process is Poisson with mean
/// function m, intensity kappa * (t + kappa)^(alpha - 1) on [0, 1].
/// The strategy stops at the first arrival after the threshold
/// cont_threshold(ell, kappa, alpha); a win is a stop with exactly
/// ell - 1 later arrivals, i.e. exactly ell arrivals after the threshold.
WinStats simulate_continuous(double kappa, double alpha, const SimConfig& cfg,
                             int n_threads = 0);
WinStats simulate_continuous_serial(double kappa, double alpha,
                                    const SimConfig& cfg);

/// One perturbed strategy against the myopic baseline, evaluated on the
/// same replicates (common random numbers). diff = p_hat(myopic) -
/// p_hat(perturbed); paired_se is the standard error of the per-replicate
/// indicator difference, z = diff / paired_se.
struct CompareRow {
    double delta = 0.0;
    WinStats stats;
    double diff = 0.0;
    double paired_se = 0.0;
    double z = 0.0;
};

struct CompareReport {
    WinStats myopic;
    std::vector<CompareRow> rows;
};

CompareReport compare_strategies(const ModelParams& params,
                                 const RootTable& table,
                                 const std::vector<double>& deltas,
                                 const SimConfig& cfg, int n_threads = 0);

/// Line-oriented key=value run record, the CLI output format for
/// simulation commands.
struct RunRecord {
    std::vector<std::pair<std::string, std::string>> items;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, std::uint64_t value);
    void add_stats(const std::string& prefix, const WinStats& stats);
    std::string text() const;
};

} // namespace kslast
