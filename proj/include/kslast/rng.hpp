#pragma once

#include "kslast/common.hpp"

#include <cstdint>
#include <vector>

namespace kslast {

/// Counter-based generator with explicit stream splitting. Output j of
/// stream s under seed is mix(key(seed, s) + (j+1) * GOLDEN), where mix is
/// the SplitMix64 finalizer and key folds seed and stream index through the
/// same mixer. Replicate i of a simulation always draws from stream i, so
/// results are independent of thread count and iteration order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Poisson sampler by CDF inversion, capped at the 1 - 1e-12 quantile.
/// Draws beyond the cap are rejected and redrawn; the optional counter
/// reports how often that happened.
class PoissonSampler {
public:
    explicit PoissonSampler(double mean);

    int draw(CounterRng& rng, std::uint64_t* redraws = nullptr) const;
    int cap() const { return cap_; }
    double mean() const { return mean_; }
    /// P(X = n) for the uncapped Poisson law, n in 0 .. cap.
    double pmf(int n) const;

private:
    double mean_ = 0.0;
    int cap_ = 0;
    std::vector<double> cdf_;
};

} // namespace kslast
