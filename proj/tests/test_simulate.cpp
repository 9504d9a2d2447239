#include "doctest.h"

#include "kslast/policy.hpp"
#include "kslast/profile_rewards.hpp"
#include "kslast/rng.hpp"
#include "kslast/roots.hpp"
#include "kslast/simulate.hpp"
#include "oracles.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace kslast;

namespace {

double oracle_pois(int n, double mean) {
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

SimConfig quick_cfg(std::uint64_t trials, std::uint64_t seed, int ell = 1) {
    SimConfig cfg;
    cfg.n_trials = trials;
    cfg.seed = seed;
    cfg.ell = ell;
    return cfg;
}

void check_same_stats(const WinStats& a, const WinStats& b) {
    CHECK(a.trials == b.trials);
    CHECK(a.wins == b.wins);
    CHECK(a.redraws == b.redraws);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.std_err == b.std_err);
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("counter streams replay exactly and split cleanly") {
    CounterRng a(42, 7);
    CounterRng b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // A different stream or seed diverges immediately.
    CounterRng c(42, 8);
    CounterRng d(43, 7);
    CounterRng fresh(42, 7);
    CHECK(fresh.next_u64() != c.next_u64());
    CounterRng fresh2(42, 7);
    CHECK(fresh2.next_u64() != d.next_u64());

    CounterRng u(5, 0);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = u.next_unit();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        sum += v;
    }
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("poisson sampler pmf matches the closed form up to the cap") {
    const PoissonSampler sampler(3.7);
    CHECK(sampler.mean() == 3.7);
    CHECK(sampler.cap() >= 4);
    double mass = 0.0;
    for (int n = 0; n <= sampler.cap(); ++n) {
        CHECK(sampler.pmf(n) == doctest::Approx(oracle_pois(n, 3.7)).epsilon(1e-11));
        mass += sampler.pmf(n);
    }
    CHECK(mass >= 1.0 - 1e-11);

    const PoissonSampler zero(0.0);
    CHECK(zero.pmf(0) == 1.0);
    CounterRng rng(1, 0);
    for (int i = 0; i < 10; ++i) CHECK(zero.draw(rng) == 0);
}

TEST_CASE("poisson draws pass a chi-square test against the pmf") {
    const double mean = 3.7;
    const PoissonSampler sampler(mean);
    CounterRng rng(123, 0);
    const std::uint64_t n = 100000;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(sampler.cap()) + 1, 0);
    double total = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const int v = sampler.draw(rng);
        REQUIRE(v >= 0);
        REQUIRE(v <= sampler.cap());
        counts[static_cast<std::size_t>(v)] += 1;
        total += v;
    }
    std::vector<double> probs(counts.size());
    for (std::size_t j = 0; j < probs.size(); ++j)
        probs[j] = sampler.pmf(static_cast<int>(j));
    const auto [stat, bins] = oracle::chi_square_pooled(counts, probs, n);
    REQUIRE(bins >= 3);
    CHECK(oracle::chi_square_p_value(stat, bins - 1) > 0.001);
    CHECK(total / static_cast<double>(n) ==
          doctest::Approx(mean).epsilon(4.0 * std::sqrt(mean / static_cast<double>(n)) / mean));
}

TEST_CASE("thinning a unit-rate envelope reproduces the log-mean law") {
    // Intensity kappa/(t+kappa) with kappa=2 stays below 1, so accepting an
    // arrival at time u with probability 2/(u+2) thins a unit-rate process
    // into one with total mean 2 log(3/2).
    const double target_mean = 2.0 * std::log(1.5);
    const PoissonSampler envelope(1.0);
    const std::uint64_t n = 100000;
    std::vector<std::uint64_t> counts(12, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        CounterRng rng(987, i);
        const int arrivals = envelope.draw(rng);
        int kept = 0;
        for (int j = 0; j < arrivals; ++j) {
            const double u = rng.next_unit();
            const double accept = rng.next_unit();
            if (accept < 2.0 / (u + 2.0)) ++kept;
        }
        if (kept >= static_cast<int>(counts.size())) kept = static_cast<int>(counts.size()) - 1;
        counts[static_cast<std::size_t>(kept)] += 1;
    }
    std::vector<double> probs(counts.size());
    for (std::size_t j = 0; j < probs.size(); ++j)
        probs[j] = oracle_pois(static_cast<int>(j), target_mean);
    const auto [stat, bins] = oracle::chi_square_pooled(counts, probs, n);
    CHECK(oracle::chi_square_p_value(stat, bins - 1) > 0.001);
}

TEST_CASE("homogeneous simulator matches the exact crossing probability") {
    const struct {
        double lambda;
        double theta;
    } cases[] = {{2.0, 1.0}, {5.0, 1.0}, {3.0, 2.0}};
    for (const auto& cs : cases) {
        const RootTable table = critical_roots_covering(cs.lambda, cs.theta);
        const StrategySpec strategy = myopic_cutoffs(cs.lambda, table);
        const double exact = oracle::exact_win_probability(cs.lambda, cs.theta, strategy);
        REQUIRE(exact > 0.0);
        REQUIRE(exact < 1.0);
        const ModelParams params{cs.theta, cs.lambda};
        const WinStats stats =
            simulate_homogeneous(params, strategy, quick_cfg(200000, 5));
        CHECK(stats.p_hat ==
              doctest::Approx(exact).epsilon(4.0 * stats.std_err / exact + 1e-6));
    }
}

TEST_CASE("below the first root the win rate is the single-success mass") {
    // lambda under gamma_1 leaves no stored cutoffs: stop at the first
    // success, win iff it is the only one. Two independently derived
    // oracles must agree, and the simulation must match them.
    const RootTable table = critical_roots_covering(0.2, 1.0);
    const StrategySpec strategy = myopic_cutoffs(0.2, table);
    REQUIRE(strategy.cutoffs.empty());
    const double via_crossing = oracle::exact_win_probability(0.2, 1.0, strategy);
    const double via_product = oracle::exact_single_success_probability(0.2, 1.0);
    CHECK(via_crossing == doctest::Approx(via_product).epsilon(1e-9));
    const ModelParams params{1.0, 0.2};
    const WinStats stats = simulate_homogeneous(params, strategy, quick_cfg(200000, 17));
    CHECK(stats.p_hat == doctest::Approx(via_product).epsilon(4.0 * stats.std_err / via_product));
}

TEST_CASE("parallel kernels reproduce the serial reference bit for bit") {
    const ModelParams params{1.0, 5.0};
    const RootTable table = critical_roots_covering(5.0, 1.0);
    const StrategySpec strategy = myopic_cutoffs(5.0, table);
    const SimConfig cfg = quick_cfg(50000, 9);
    check_same_stats(simulate_homogeneous_serial(params, strategy, cfg),
                     simulate_homogeneous(params, strategy, cfg, 4));

    const IntensityModel model = IntensityModel::power_law(2.0, 1.0);
    const RootTable itable = critical_roots_covering(model.total(), 1.0);
    check_same_stats(simulate_inhomogeneous_serial(model, 1.0, itable, cfg),
                     simulate_inhomogeneous(model, 1.0, itable, cfg, 4));

    check_same_stats(simulate_continuous_serial(2.0, 1.0, cfg),
                     simulate_continuous(2.0, 1.0, cfg, 4));

    const std::vector<double> deltas = {-0.1, 0.1};
    const CompareReport r1 = compare_strategies(params, table, deltas, cfg, 1);
    const CompareReport r4 = compare_strategies(params, table, deltas, cfg, 4);
    check_same_stats(r1.myopic, r4.myopic);
    REQUIRE(r1.rows.size() == r4.rows.size());
    for (std::size_t i = 0; i < r1.rows.size(); ++i) {
        check_same_stats(r1.rows[i].stats, r4.rows[i].stats);
        CHECK(r1.rows[i].diff == r4.rows[i].diff);
        CHECK(r1.rows[i].paired_se == r4.rows[i].paired_se);
        CHECK(r1.rows[i].z == r4.rows[i].z);
    }
}

TEST_CASE("seeds select distinct replicate sets") {
    const ModelParams params{1.0, 5.0};
    const RootTable table = critical_roots_covering(5.0, 1.0);
    const StrategySpec strategy = myopic_cutoffs(5.0, table);
    const WinStats s1 = simulate_homogeneous(params, strategy, quick_cfg(20000, 1));
    const WinStats s2 = simulate_homogeneous(params, strategy, quick_cfg(20000, 2));
    CHECK(s1.wins != s2.wins);
}

TEST_CASE("constant-intensity inhomogeneous runs agree with homogeneous runs") {
    const double lambda = 4.0;
    const RootTable table = critical_roots_covering(lambda, 1.0);
    const StrategySpec strategy = myopic_cutoffs(lambda, table);
    const ModelParams params{1.0, lambda};
    const WinStats hom = simulate_homogeneous(params, strategy, quick_cfg(200000, 21));
    const IntensityModel model = IntensityModel::homogeneous(lambda);
    const WinStats inh = simulate_inhomogeneous(model, 1.0, table, quick_cfg(200000, 22));
    const double joint = std::sqrt(hom.std_err * hom.std_err + inh.std_err * inh.std_err);
    CHECK(std::abs(hom.p_hat - inh.p_hat) <= 4.0 * joint);
}

TEST_CASE("continuous simulator hits the closed-form win rates") {
    // Interior thresholds: the rank-ell formula applies.
    const WinStats one = simulate_continuous(2.0, 1.0, quick_cfg(100000, 3, 1));
    CHECK(one.p_hat == doctest::Approx(std::exp(-1.0)).epsilon(4.0 * one.std_err * std::exp(1.0)));

    const WinStats three_interior = simulate_continuous(2.0, 2.0, quick_cfg(100000, 3, 3));
    CHECK(three_interior.p_hat ==
          doctest::Approx(4.5 * std::exp(-3.0))
              .epsilon(4.0 * three_interior.std_err / (4.5 * std::exp(-3.0))));

    // Boundary threshold t* = 0 with total mean exactly ell: still the
    // Poisson mass at ell, which the formula happens to equal.
    const WinStats two = simulate_continuous(2.0, 1.0, quick_cfg(100000, 3, 2));
    CHECK(two.p_hat ==
          doctest::Approx(oracle_pois(2, 2.0)).epsilon(4.0 * two.std_err / oracle_pois(2, 2.0)));

    // Unreachable rank: the threshold clamps to 0 and the win rate is the
    // Poisson mass at ell under the full-horizon mean, not the formula.
    const WinStats three_clamped = simulate_continuous(2.0, 1.0, quick_cfg(100000, 3, 3));
    const double clamped_law = oracle_pois(3, 2.0);
    CHECK(three_clamped.p_hat ==
          doctest::Approx(clamped_law).epsilon(4.0 * three_clamped.std_err / clamped_law));
}

TEST_CASE("paired comparison favors the myopic rule") {
    const ModelParams params{1.0, 5.0};
    const RootTable table = critical_roots_covering(5.0, 1.0);
    const std::vector<double> deltas = {-0.05, 0.05, 1.0};
    const CompareReport report = compare_strategies(params, table, deltas, quick_cfg(100000, 13));
    REQUIRE(report.rows.size() == 3);
    CHECK(report.myopic.p_hat > 0.3);
    for (const CompareRow& row : report.rows) {
        CHECK(row.diff ==
              doctest::Approx(report.myopic.p_hat - row.stats.p_hat).epsilon(1e-12));
        if (row.paired_se > 0.0)
            CHECK(row.z == doctest::Approx(row.diff / row.paired_se).epsilon(1e-9));
    }
    // Small perturbations cannot beat the optimum beyond noise.
    CHECK(report.rows[0].diff >= -3.0 * report.rows[0].paired_se);
    CHECK(report.rows[1].diff >= -3.0 * report.rows[1].paired_se);
    // Shifting every stored cutoff to 1 only ever stops past the table, which
    // costs a decisive slice of the win rate.
    CHECK(report.rows[2].stats.p_hat < report.myopic.p_hat - 0.02);
    CHECK(report.rows[2].z >= 5.0);
}

TEST_CASE("config validation guards the discrete simulators") {
    CHECK_THROWS_AS(quick_cfg(0, 1).validate(), std::domain_error);
    CHECK_THROWS_AS(quick_cfg(10, 1, 0).validate(), std::domain_error);

    const ModelParams params{1.0, 2.0};
    const RootTable table = critical_roots_covering(2.0, 1.0);
    const StrategySpec strategy = myopic_cutoffs(2.0, table);
    CHECK_THROWS_AS(simulate_homogeneous(params, strategy, quick_cfg(10, 1, 2)),
                    std::domain_error);
    const IntensityModel model = IntensityModel::homogeneous(2.0);
    CHECK_THROWS_AS(simulate_inhomogeneous(model, 1.0, table, quick_cfg(10, 1, 2)),
                    std::domain_error);
}

TEST_CASE("make_win_stats fills the binomial standard error") {
    const WinStats s = make_win_stats(10000, 2500, 3);
    CHECK(s.p_hat == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.std_err == doctest::Approx(std::sqrt(0.25 * 0.75 / 10000.0)).epsilon(1e-12));
    CHECK(s.redraws == 3);
    CHECK(make_win_stats(100, 0).std_err == 0.0);
}

TEST_CASE("run records serialize line by line") {
    RunRecord rec;
    rec.add("command", std::string("demo"));
    rec.add("lambda", 2.5);
    rec.add("trials", static_cast<std::uint64_t>(100));
    rec.add_stats("s.", make_win_stats(4, 1));
    CHECK(rec.text() ==
          "command=demo\nlambda=2.5\ntrials=100\ns.trials=4\ns.wins=1\ns.p_hat=0.25\n"
          "s.std_err=" + format_full(std::sqrt(0.25 * 0.75 / 4.0)) + "\n");
}

}
