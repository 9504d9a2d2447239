#include "kslast/policy.hpp"

#include "kslast/profile_rewards.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace kslast {

IntensityModel IntensityModel::homogeneous(double lambda) {
    if (!(lambda >= 0.0))
        throw std::domain_error("IntensityModel::homogeneous: lambda must be nonnegative");
    IntensityModel m;
    m.kind_ = Kind::homogeneous;
    m.lambda_ = lambda;
    return m;
}

IntensityModel IntensityModel::power_law(double kappa, double alpha) {
    if (!(kappa > 0.0))
        throw std::domain_error("IntensityModel::power_law: kappa must be positive");
    IntensityModel m;
    m.kind_ = Kind::power_law;
    m.kappa_ = kappa;
    m.alpha_ = alpha;
    return m;
}

double IntensityModel::cumulative(double s) const {
    if (!(s >= 0.0) || !(s <= 1.0))
        throw std::domain_error("IntensityModel::cumulative: s must lie in [0, 1]");
    if (kind_ == Kind::homogeneous) return lambda_ * s;
    if (alpha_ == -1.0) return std::log((s + kappa_) / kappa_);
    const double q = alpha_ + 1.0;
    return (std::pow(s + kappa_, q) - std::pow(kappa_, q)) / q;
}

double IntensityModel::arrival_time(double u) const {
    if (!(u >= 0.0) || !(u <= 1.0))
        throw std::domain_error("IntensityModel::arrival_time: u must lie in [0, 1]");
    if (kind_ == Kind::homogeneous) return u;
    if (alpha_ == -1.0) {
        const double ratio = (1.0 + kappa_) / kappa_;
        return kappa_ * std::pow(ratio, u) - kappa_;
    }
    const double q = alpha_ + 1.0;
    const double base_lo = std::pow(kappa_, q);
    const double base_hi = std::pow(1.0 + kappa_, q);
    const double t = std::pow(base_lo + u * (base_hi - base_lo), 1.0 / q) - kappa_;
    return std::clamp(t, 0.0, 1.0);
}

double StrategySpec::cutoff(int k) const {
    if (k < 1) throw std::domain_error("StrategySpec::cutoff: k must be at least 1");
    if (k > static_cast<int>(cutoffs.size())) return 0.0;
    return cutoffs[k - 1];
}

StrategySpec myopic_cutoffs(double lambda, const RootTable& table) {
    if (!(lambda > 0.0)) throw std::domain_error("myopic_cutoffs: lambda must be positive");
    if (table.roots.empty() || !(table.roots.back().gamma >= lambda))
        throw std::invalid_argument("myopic_cutoffs: table must reach gamma >= lambda");
    StrategySpec spec;
    for (const RootRecord& r : table.roots) {
        const double a = 1.0 - r.gamma / lambda;
        if (!(a > 0.0)) break;  // all further cutoffs are 0
        spec.cutoffs.push_back(a);
    }
    return spec;
}

StrategySpec perturb(const StrategySpec& base, double delta) {
    StrategySpec out = base;
    out.kind = StrategyKind::perturbed;
    out.delta = delta;
    for (double& a : out.cutoffs) a = std::clamp(a + delta, 0.0, 1.0);
    return out;
}

namespace {

double root_for_state(int k, double effective_mean, const RootTable& table) {
    if (k < 1) throw std::domain_error("decide: state.k must be at least 1");
    if (k <= table.k_max()) return table.gamma(k);
    if (!(table.roots.back().gamma >= effective_mean))
        throw std::invalid_argument("decide: table too short for state.k");
    // Roots increase in k, so any index beyond a table reaching the total
    // mean forces a stop verdict.
    return table.roots.back().gamma;
}

}  // namespace

Decision decide(const State& state, double lambda, const RootTable& table) {
    if (!(lambda > 0.0)) throw std::domain_error("decide: lambda must be positive");
    if (!(state.t >= 0.0) || !(state.t <= 1.0))
        throw std::domain_error("decide: state.t must lie in [0, 1]");
    const double gamma = root_for_state(state.k, lambda, table);
    return (1.0 - state.t) * lambda <= gamma ? Decision::stop : Decision::continue_search;
}

Decision decide_inhomogeneous(const State& state, const IntensityModel& model,
                              const RootTable& table) {
    if (!(state.t >= 0.0) || !(state.t <= 1.0))
        throw std::domain_error("decide_inhomogeneous: state.t must lie in [0, 1]");
    const double remaining = model.total() - model.cumulative(state.t);
    const double gamma = root_for_state(state.k, model.total(), table);
    return remaining <= gamma ? Decision::stop : Decision::continue_search;
}

double expected_successes(double t0, double t1, double kappa, double alpha) {
    if (!(kappa > 0.0)) throw std::domain_error("expected_successes: kappa must be positive");
    if (!(t0 >= 0.0) || !(t1 >= t0))
        throw std::domain_error("expected_successes: requires 0 <= t0 <= t1");
    if (alpha == 0.0) return kappa * std::log((t1 + kappa) / (t0 + kappa));
    return kappa / alpha * (std::pow(t1 + kappa, alpha) - std::pow(t0 + kappa, alpha));
}

double cont_threshold(int ell, double kappa, double alpha, bool* clamped) {
    if (ell < 1) throw std::domain_error("cont_threshold: ell must be at least 1");
    if (!(kappa > 0.0)) throw std::domain_error("cont_threshold: kappa must be positive");
    if (clamped) *clamped = false;
    double t;
    if (alpha == 0.0) {
        t = (kappa + 1.0) * std::exp(-static_cast<double>(ell) / kappa) - kappa;
    } else {
        const double base = std::pow(1.0 + kappa, alpha) - alpha * ell / kappa;
        if (!(base > 0.0)) {
            // Even the full horizon yields fewer than ell expected
            // successes; the supremum collapses to 0.
            if (clamped) *clamped = true;
            return 0.0;
        }
        t = std::pow(base, 1.0 / alpha) - kappa;
    }
    if (t <= 0.0) {
        if (clamped && expected_successes(0.0, 1.0, kappa, alpha) < ell) *clamped = true;
        return 0.0;
    }
    return std::min(t, 1.0);
}

double win_prob_formula(int ell) {
    if (ell < 1) throw std::domain_error("win_prob_formula: ell must be at least 1");
    const double l = ell;
    return std::exp(-l + l * std::log(l) - std::lgamma(l + 1.0));
}

double success_count_prob(double t, int ell, double kappa) {
    if (ell < 0) throw std::domain_error("success_count_prob: ell must be nonnegative");
    if (!(t >= 0.0) || !(t <= 1.0))
        throw std::domain_error("success_count_prob: t must lie in [0, 1]");
    const double mean = expected_successes(t, 1.0, kappa, 0.0);
    return std::exp(-mean + ell * std::log(mean) - std::lgamma(ell + 1.0));
}

std::string strategy_csv(const StrategySpec& spec) {
    std::string out = "k,cutoff\n";
    for (size_t i = 0; i < spec.cutoffs.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_full(spec.cutoffs[i]);
        out += '\n';
    }
    return out;
}

CheckList check_profile_scaling_limit() {
    CheckList out;
    const double ts[] = {0.0, 0.2, 0.5, 0.8, 1.0};
    const double kappas[] = {0.5, 1.0, 2.0};
    for (int n : {100, 10000})
        for (double kappa : kappas)
            for (double t : ts) {
                const int k = static_cast<int>(t * n) + 1;
                const double discrete = success_probability(k, kappa * n);
                const double limit = kappa / (kappa + t);
                const double err = std::abs(discrete - limit);
                const bool ok = err <= 2.0 / n;
                char buf[140];
                std::snprintf(buf, sizeof buf,
                              "scaling_limit n=%-6d kappa=%-4g t=%-4g err=%.3e %s", n, kappa, t,
                              err, ok ? "ok" : "FAIL");
                out.add(ok, buf);
            }
    return out;
}

}  // namespace kslast
