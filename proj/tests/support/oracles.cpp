#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {
namespace {

// Lower regularized P(s, x) by power series; valid for x < s + 1.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper regularized Q(s, x) by Lentz continued fraction; valid for x >= s + 1.
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double simpson_recurse(const std::function<double(double)>& f, double a, double b,
                       double fa, double fm, double fb, double whole, double tol,
                       int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 40);
}

double poisson_pmf(int n, double mean) {
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

} // namespace

double regularized_gamma_q(double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw std::domain_error("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

double chi_square_p_value(double stat, int dof) {
    if (dof < 1) throw std::domain_error("chi_square_p_value: dof must be positive");
    return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

std::pair<double, int> chi_square_pooled(const std::vector<std::uint64_t>& counts,
                                         const std::vector<double>& probs,
                                         std::uint64_t n_samples, double min_expected) {
    if (counts.size() != probs.size())
        throw std::domain_error("chi_square_pooled: size mismatch");
    const double n = static_cast<double>(n_samples);
    double tail_prob = 1.0;
    for (double p : probs) tail_prob -= p;
    tail_prob = std::max(tail_prob, 0.0);
    std::uint64_t tail_count = n_samples;
    for (std::uint64_t c : counts) tail_count -= c;

    // Sweep from the right, pooling bins (and the overflow remainder) until
    // each pooled expectation clears the threshold.
    std::vector<std::pair<std::uint64_t, double>> bins;
    double acc_p = tail_prob;
    std::uint64_t acc_c = tail_count;
    for (std::size_t i = counts.size(); i-- > 0;) {
        acc_p += probs[i];
        acc_c += counts[i];
        if (acc_p * n >= min_expected) {
            bins.emplace_back(acc_c, acc_p);
            acc_p = 0.0;
            acc_c = 0;
        }
    }
    if (acc_p > 0.0 || acc_c > 0) {
        if (bins.empty()) {
            bins.emplace_back(acc_c, acc_p);
        } else {
            bins.back().first += acc_c;
            bins.back().second += acc_p;
        }
    }

    double stat = 0.0;
    for (const auto& [obs, p] : bins) {
        const double expected = p * n;
        const double diff = static_cast<double>(obs) - expected;
        stat += diff * diff / expected;
    }
    return {stat, static_cast<int>(bins.size())};
}

double exact_win_probability(double lambda, double theta,
                             const kslast::StrategySpec& strategy) {
    if (!(lambda > 0.0) || !(theta > 0.0))
        throw std::domain_error("exact_win_probability: bad parameters");
    const int k_cap =
        static_cast<int>(lambda + 12.0 * std::sqrt(lambda) + 40.0);

    const auto fail_prob = [theta](int j) {
        return (j - 1.0) / (theta + j - 1.0);
    };
    const auto success_prob = [theta](int j) { return theta / (theta + j - 1.0); };

    // P(no success among trials k+1, k+2, ... when their count is
    // Poisson(x)): direct truncated double sum, no special functions.
    const auto tail_no_success = [&](double x, int k) {
        const int j_cap = static_cast<int>(x + 12.0 * std::sqrt(x) + 40.0);
        double prod = 1.0;
        double sum = poisson_pmf(0, x);
        for (int j = 1; j <= j_cap; ++j) {
            prod *= fail_prob(k + j);
            sum += poisson_pmf(j, x) * prod;
        }
        return sum;
    };

    std::vector<double> log_fact(static_cast<std::size_t>(k_cap) + 2, 0.0);
    for (std::size_t i = 1; i < log_fact.size(); ++i)
        log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));
    const auto binom_tail = [&](int m, int j, double r) {
        // P(at least j of m iid U(0,1) fall below r)
        if (j <= 0) return 1.0;
        if (r >= 1.0) return 1.0;
        if (r <= 0.0) return 0.0;
        double sum = 0.0;
        for (int i = j; i <= m; ++i) {
            sum += std::exp(log_fact[m] - log_fact[i] - log_fact[m - i] +
                            i * std::log(r) + (m - i) * std::log1p(-r));
        }
        return std::min(sum, 1.0);
    };

    double total = 0.0;
    for (int k = 1; k <= k_cap; ++k) {
        const double a_k = strategy.cutoff(k);
        if (a_k >= 1.0) continue;
        const int m = k - 1;

        // Suffix failure products over the m earlier trials.
        std::vector<double> suffix(static_cast<std::size_t>(m) + 2, 1.0);
        for (int j = m; j >= 1; --j)
            suffix[static_cast<std::size_t>(j)] =
                suffix[static_cast<std::size_t>(j) + 1] * fail_prob(j);

        const auto no_early_stop = [&](double t) {
            if (m == 0) return 1.0;
            // prefix >= j iff the j-th order statistic of the m earlier
            // times lies below cutoff(j); cutoffs fall while times rise, so
            // the admissible successes form a prefix with unit weight and
            // everything beyond it must fail.
            double prev_tail = 1.0;  // P(prefix >= 0)
            double acc = 0.0;
            for (int j = 0; j <= m; ++j) {
                const double next_tail =
                    j < m ? binom_tail(m, j + 1,
                                       std::min(strategy.cutoff(j + 1), t) / t)
                          : 0.0;
                acc += (prev_tail - next_tail) * suffix[static_cast<std::size_t>(j) + 1];
                prev_tail = next_tail;
            }
            return acc;
        };

        const auto integrand = [&](double t) {
            const double arrivals = poisson_pmf(k - 1, lambda * t);
            if (arrivals == 0.0) return 0.0;  // also guards the t=0 endpoint for k >= 2
            return lambda * arrivals * no_early_stop(t) *
                   tail_no_success((1.0 - t) * lambda, k);
        };

        // Breakpoints: the earlier cutoffs are kinks of no_early_stop.
        std::vector<double> nodes;
        nodes.push_back(a_k);
        nodes.push_back(1.0);
        for (int j = 1; j <= m; ++j) {
            const double a_j = strategy.cutoff(j);
            if (a_j > a_k && a_j < 1.0) nodes.push_back(a_j);
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

        double contribution = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            contribution += adaptive_simpson(integrand, nodes[i], nodes[i + 1], 1e-13);
        total += success_prob(k) * contribution;
    }
    return total;
}

double exact_single_success_probability(double lambda, double theta) {
    const int n_cap = static_cast<int>(lambda + 12.0 * std::sqrt(lambda) + 40.0);
    double sum = 0.0;
    double prod = 1.0;  // prod_{j=2..n} fail probabilities
    for (int n = 1; n <= n_cap; ++n) {
        if (n >= 2) prod *= (n - 1.0) / (theta + n - 1.0);
        sum += poisson_pmf(n, lambda) * prod;
    }
    return sum;
}

} // namespace oracle
