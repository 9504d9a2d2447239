#include "kslast/simulate.hpp"

#include "kslast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kslast {
namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

// One realization of the marked arrival process. Draw order is fixed as
// (count, times, marks) so that every strategy evaluated on the replicate
// sees the same process, and so parallel runs replay serial ones exactly.
struct Replicate {
    std::vector<double> times;
    std::vector<unsigned char> marks;

    void draw(CounterRng& rng, const PoissonSampler& sampler, double theta,
              std::uint64_t* redraws) {
        const int n = sampler.draw(rng, redraws);
        times.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) times[static_cast<std::size_t>(j)] = rng.next_unit();
        std::sort(times.begin(), times.end());
        marks.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            // Trial j+1 succeeds with probability theta / (theta + j).
            const double p = theta / (theta + static_cast<double>(j));
            marks[static_cast<std::size_t>(j)] = rng.next_unit() < p ? 1 : 0;
        }
    }

    // True when the strategy stops and the stop lands on the last success.
    bool wins(const StrategySpec& strategy) const {
        int stop_at = -1;
        int last_success = -1;
        for (std::size_t j = 0; j < marks.size(); ++j) {
            if (!marks[j]) continue;
            last_success = static_cast<int>(j);
            if (stop_at < 0 && times[j] >= strategy.cutoff(static_cast<int>(j) + 1))
                stop_at = static_cast<int>(j);
        }
        return stop_at >= 0 && stop_at == last_success;
    }
};

WinStats finish(const SimConfig& cfg, std::uint64_t wins, std::uint64_t redraws) {
    return make_win_stats(cfg.n_trials, wins, redraws);
}

} // namespace

void SimConfig::validate() const {
    if (n_trials < 1) throw std::domain_error("SimConfig: n_trials must be at least 1");
    if (ell < 1) throw std::domain_error("SimConfig: ell must be at least 1");
}

WinStats make_win_stats(std::uint64_t trials, std::uint64_t wins, std::uint64_t redraws) {
    WinStats s;
    s.trials = trials;
    s.wins = wins;
    s.redraws = redraws;
    s.p_hat = trials > 0 ? static_cast<double>(wins) / static_cast<double>(trials) : 0.0;
    s.std_err = trials > 0
                    ? std::sqrt(s.p_hat * (1.0 - s.p_hat) / static_cast<double>(trials))
                    : 0.0;
    return s;
}

WinStats simulate_homogeneous_serial(const ModelParams& params,
                                     const StrategySpec& strategy,
                                     const SimConfig& cfg) {
    params.validate();
    cfg.validate();
    if (cfg.ell != 1)
        throw std::domain_error("simulate_homogeneous: only ell = 1 is defined");
    const PoissonSampler sampler(params.lambda);
    std::uint64_t wins = 0;
    std::uint64_t redraws = 0;
    Replicate rep;
    for (std::uint64_t i = 0; i < cfg.n_trials; ++i) {
        CounterRng rng(cfg.seed, i);
        rep.draw(rng, sampler, params.theta, &redraws);
        if (rep.wins(strategy)) wins += 1;
    }
    return finish(cfg, wins, redraws);
}

WinStats simulate_homogeneous(const ModelParams& params, const StrategySpec& strategy,
                              const SimConfig& cfg, int n_threads) {
    params.validate();
    cfg.validate();
    if (cfg.ell != 1)
        throw std::domain_error("simulate_homogeneous: only ell = 1 is defined");
    const PoissonSampler sampler(params.lambda);
    const long long n = static_cast<long long>(cfg.n_trials);
    std::uint64_t wins = 0;
    std::uint64_t redraws = 0;
#pragma omp parallel num_threads(resolve_threads(n_threads))
    {
        std::uint64_t local_wins = 0;
        std::uint64_t local_redraws = 0;
        Replicate rep;
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
            rep.draw(rng, sampler, params.theta, &local_redraws);
            if (rep.wins(strategy)) local_wins += 1;
        }
#pragma omp critical
        {
            wins += local_wins;
            redraws += local_redraws;
        }
    }
    return finish(cfg, wins, redraws);
}

namespace {

// Inhomogeneous replicate: evaluates the remaining-mean rule directly.
bool inhomogeneous_win(Replicate& rep, CounterRng& rng, const PoissonSampler& sampler,
                       const IntensityModel& model, double theta,
                       const RootTable& table, std::uint64_t* redraws) {
    const int n = sampler.draw(rng, redraws);
    rep.times.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        rep.times[static_cast<std::size_t>(j)] = model.arrival_time(rng.next_unit());
    std::sort(rep.times.begin(), rep.times.end());
    rep.marks.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double p = theta / (theta + static_cast<double>(j));
        rep.marks[static_cast<std::size_t>(j)] = rng.next_unit() < p ? 1 : 0;
    }
    int stop_at = -1;
    int last_success = -1;
    for (int j = 0; j < n; ++j) {
        if (!rep.marks[static_cast<std::size_t>(j)]) continue;
        last_success = j;
        if (stop_at < 0) {
            const State state{rep.times[static_cast<std::size_t>(j)], j + 1};
            if (decide_inhomogeneous(state, model, table) == Decision::stop) stop_at = j;
        }
    }
    return stop_at >= 0 && stop_at == last_success;
}

} // namespace

WinStats simulate_inhomogeneous_serial(const IntensityModel& model, double theta,
                                       const RootTable& table, const SimConfig& cfg) {
    cfg.validate();
    if (cfg.ell != 1)
        throw std::domain_error("simulate_inhomogeneous: only ell = 1 is defined");
    if (!(model.total() > 0.0))
        throw std::domain_error("simulate_inhomogeneous: total arrival mean must be positive");
    const PoissonSampler sampler(model.total());
    std::uint64_t wins = 0;
    std::uint64_t redraws = 0;
    Replicate rep;
    for (std::uint64_t i = 0; i < cfg.n_trials; ++i) {
        CounterRng rng(cfg.seed, i);
        if (inhomogeneous_win(rep, rng, sampler, model, theta, table, &redraws)) wins += 1;
    }
    return finish(cfg, wins, redraws);
}

WinStats simulate_inhomogeneous(const IntensityModel& model, double theta,
                                const RootTable& table, const SimConfig& cfg,
                                int n_threads) {
    cfg.validate();
    if (cfg.ell != 1)
        throw std::domain_error("simulate_inhomogeneous: only ell = 1 is defined");
    if (!(model.total() > 0.0))
        throw std::domain_error("simulate_inhomogeneous: total arrival mean must be positive");
    const PoissonSampler sampler(model.total());
    const long long n = static_cast<long long>(cfg.n_trials);
    std::uint64_t wins = 0;
    std::uint64_t redraws = 0;
    std::exception_ptr failure = nullptr;
#pragma omp parallel num_threads(resolve_threads(n_threads))
    {
        std::uint64_t local_wins = 0;
        std::uint64_t local_redraws = 0;
        Replicate rep;
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            try {
                CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
                if (inhomogeneous_win(rep, rng, sampler, model, theta, table,
                                      &local_redraws))
                    local_wins += 1;
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
#pragma omp critical
        {
            wins += local_wins;
            redraws += local_redraws;
        }
    }
    if (failure) std::rethrow_exception(failure);
    return finish(cfg, wins, redraws);
}

namespace {

struct ContinuousSetup {
    PoissonSampler sampler;
    double tail_split = 0.0;  // F(t_star): arrivals with u > split fall after the threshold
    int ell = 1;

    ContinuousSetup(double kappa, double alpha, int ell_arg)
        : sampler(expected_successes(0.0, 1.0, kappa, alpha)), ell(ell_arg) {
        const double t_star = cont_threshold(ell, kappa, alpha);
        const double total = expected_successes(0.0, 1.0, kappa, alpha);
        tail_split = expected_successes(0.0, t_star, kappa, alpha) / total;
    }

    bool win(CounterRng& rng, std::uint64_t* redraws) const {
        const int n = sampler.draw(rng, redraws);
        int after = 0;
        for (int j = 0; j < n; ++j) {
            if (rng.next_unit() > tail_split) after += 1;
        }
        return after == ell;
    }
};

} // namespace

WinStats simulate_continuous_serial(double kappa, double alpha, const SimConfig& cfg) {
    cfg.validate();
    if (!(kappa > 0.0))
        throw std::domain_error("simulate_continuous: kappa must be positive");
    const ContinuousSetup setup(kappa, alpha, cfg.ell);
    std::uint64_t wins = 0;
    std::uint64_t redraws = 0;
    for (std::uint64_t i = 0; i < cfg.n_trials; ++i) {
        CounterRng rng(cfg.seed, i);
        if (setup.win(rng, &redraws)) wins += 1;
    }
    return finish(cfg, wins, redraws);
}

WinStats simulate_continuous(double kappa, double alpha, const SimConfig& cfg,
                             int n_threads) {
    cfg.validate();
    if (!(kappa > 0.0))
        throw std::domain_error("simulate_continuous: kappa must be positive");
    const ContinuousSetup setup(kappa, alpha, cfg.ell);
    const long long n = static_cast<long long>(cfg.n_trials);
    std::uint64_t wins = 0;
    std::uint64_t redraws = 0;
#pragma omp parallel num_threads(resolve_threads(n_threads))
    {
        std::uint64_t local_wins = 0;
        std::uint64_t local_redraws = 0;
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
            if (setup.win(rng, &local_redraws)) local_wins += 1;
        }
#pragma omp critical
        {
            wins += local_wins;
            redraws += local_redraws;
        }
    }
    return finish(cfg, wins, redraws);
}

CompareReport compare_strategies(const ModelParams& params, const RootTable& table,
                                 const std::vector<double>& deltas,
                                 const SimConfig& cfg, int n_threads) {
    params.validate();
    cfg.validate();
    if (cfg.ell != 1)
        throw std::domain_error("compare_strategies: only ell = 1 is defined");
    const StrategySpec base = myopic_cutoffs(params.lambda, table);
    std::vector<StrategySpec> variants;
    variants.reserve(deltas.size());
    for (double d : deltas) variants.push_back(perturb(base, d));

    const PoissonSampler sampler(params.lambda);
    const long long n = static_cast<long long>(cfg.n_trials);
    const std::size_t m = variants.size();
    std::uint64_t wins_base = 0;
    std::uint64_t redraws = 0;
    std::vector<std::uint64_t> wins_var(m, 0);
    // disagree[v] counts replicates where the base and variant indicators
    // differ; with the mean difference it gives the paired variance exactly.
    std::vector<std::uint64_t> disagree(m, 0);

#pragma omp parallel num_threads(resolve_threads(n_threads))
    {
        std::uint64_t local_base = 0;
        std::uint64_t local_redraws = 0;
        std::vector<std::uint64_t> local_var(m, 0);
        std::vector<std::uint64_t> local_dis(m, 0);
        Replicate rep;
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
            rep.draw(rng, sampler, params.theta, &local_redraws);
            const bool base_win = rep.wins(base);
            if (base_win) local_base += 1;
            for (std::size_t v = 0; v < m; ++v) {
                const bool var_win = rep.wins(variants[v]);
                if (var_win) local_var[v] += 1;
                if (var_win != base_win) local_dis[v] += 1;
            }
        }
#pragma omp critical
        {
            wins_base += local_base;
            redraws += local_redraws;
            for (std::size_t v = 0; v < m; ++v) {
                wins_var[v] += local_var[v];
                disagree[v] += local_dis[v];
            }
        }
    }

    CompareReport report;
    report.myopic = make_win_stats(cfg.n_trials, wins_base, redraws);
    const double nn = static_cast<double>(cfg.n_trials);
    for (std::size_t v = 0; v < m; ++v) {
        CompareRow row;
        row.delta = deltas[v];
        row.stats = make_win_stats(cfg.n_trials, wins_var[v]);
        row.diff = report.myopic.p_hat - row.stats.p_hat;
        const double var = std::max(0.0, static_cast<double>(disagree[v]) / nn -
                                             row.diff * row.diff);
        row.paired_se = std::sqrt(var / nn);
        row.z = row.paired_se > 0.0 ? row.diff / row.paired_se : 0.0;
        report.rows.push_back(row);
    }
    return report;
}

void RunRecord::add(const std::string& key, const std::string& value) {
    items.emplace_back(key, value);
}

void RunRecord::add(const std::string& key, double value) {
    items.emplace_back(key, format_full(value));
}

void RunRecord::add(const std::string& key, std::uint64_t value) {
    items.emplace_back(key, std::to_string(value));
}

void RunRecord::add_stats(const std::string& prefix, const WinStats& stats) {
    add(prefix + "trials", stats.trials);
    add(prefix + "wins", stats.wins);
    add(prefix + "p_hat", stats.p_hat);
    add(prefix + "std_err", stats.std_err);
}

std::string RunRecord::text() const {
    std::string out;
    for (const auto& [key, value] : items) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

} // namespace kslast
