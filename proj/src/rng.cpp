#include "kslast/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace kslast {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0x1D8E4E27C47D124Full;

// SplitMix64 finalizer: bijective on 64-bit words, passes BigCrush when
// driven by a Weyl sequence.
std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    key_ = mix64(mix64(seed + kGolden) ^ mix64(stream + kStreamSalt));
}

std::uint64_t CounterRng::next_u64() {
    counter_ += 1;
    return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

PoissonSampler::PoissonSampler(double mean) : mean_(mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::domain_error("PoissonSampler: mean must be finite and nonnegative");
    }
    // Tabulate the CDF out to the 1 - 1e-12 quantile. Terms are accumulated
    // with the one-step pmf recurrence; the window mean + 12 sqrt(mean) + 30
    // always covers that quantile for the means used here.
    const int hard_cap = static_cast<int>(mean + 12.0 * std::sqrt(mean) + 30.0);
    double p = std::exp(-mean);
    double cum = p;
    cdf_.push_back(cum);
    int n = 0;
    while (cum < 1.0 - 1e-12 && n < hard_cap) {
        n += 1;
        p *= mean / n;
        cum += p;
        cdf_.push_back(cum);
    }
    cap_ = n;
}

int PoissonSampler::draw(CounterRng& rng, std::uint64_t* redraws) const {
    for (;;) {
        const double u = rng.next_unit();
        if (u >= cdf_.back()) {
            if (redraws != nullptr) {
                *redraws += 1;
            }
            continue;
        }
        // Binary search for the least n with u < cdf[n].
        int lo = 0;
        int hi = static_cast<int>(cdf_.size()) - 1;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (u < cdf_[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        return lo;
    }
}

double PoissonSampler::pmf(int n) const {
    if (n < 0 || n > cap_) {
        return 0.0;
    }
    if (mean_ == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    return std::exp(n * std::log(mean_) - mean_ - std::lgamma(static_cast<double>(n) + 1.0));
}

} // namespace kslast
