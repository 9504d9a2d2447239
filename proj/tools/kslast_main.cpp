// Command-line surface: root tables, bounds tables, Monte Carlo runs, and
// verification suites. Exit codes: 0 success, 1 usage error, 2 numerical
// failure, 3 verification failure.

#include "kslast/bounds.hpp"
#include "kslast/policy.hpp"
#include "kslast/profile_rewards.hpp"
#include "kslast/roots.hpp"
#include "kslast/simulate.hpp"
#include "kslast/verify.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    file << text;
}

// Shortest representation that still parses back to the same double, so the
// echoed flag values read the way they were typed.
std::string short_double(double value) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    return kslast::format_full(value);
}

std::string deltas_echo(const std::vector<double>& deltas) {
    std::string out;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (i > 0) out += ',';
        out += short_double(deltas[i]);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Last-success stopping under the Karamata-Stirling profile"};
    app.require_subcommand(1);

    // roots
    double roots_theta = 1.0;
    int roots_k_max = 10;
    double roots_tol = 1e-10;
    int roots_threads = 0;
    std::string roots_out;
    CLI::App* cmd_roots = app.add_subcommand("roots", "Critical root table");
    cmd_roots->add_option("--theta", roots_theta, "Profile parameter")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_roots->add_option("--k-max", roots_k_max, "Largest success index")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_roots->add_option("--tol", roots_tol, "Bracket width tolerance")
        ->check(CLI::PositiveNumber);
    cmd_roots->add_option("--threads", roots_threads, "Worker threads (0 = hardware)");
    cmd_roots->add_option("--out", roots_out, "Output file (default stdout)");

    // bounds-table
    std::vector<int> bt_ks = {2, 3, 4, 5, 6, 7, 8, 9, 10, 100, 1000};
    double bt_theta = 1.0;
    std::string bt_out;
    CLI::App* cmd_bounds = app.add_subcommand(
        "bounds-table", "Root bounds: comparison table, or two-sided bounds at --theta");
    cmd_bounds->add_option("--ks", bt_ks, "Success indices")->delimiter(',');
    CLI::Option* bt_theta_opt =
        cmd_bounds->add_option("--theta", bt_theta, "Profile parameter (switches output mode)")
            ->check(CLI::PositiveNumber);
    cmd_bounds->add_option("--out", bt_out, "Output file (default stdout)");

    // simulate
    CLI::App* cmd_sim = app.add_subcommand("simulate", "Monte Carlo runs");
    cmd_sim->require_subcommand(1);

    std::uint64_t sim_trials = 1000000;
    std::uint64_t sim_seed = 0;
    int sim_threads = 0;
    double sim_tol = 1e-10;
    std::string sim_out;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--trials", sim_trials, "Replicates")->check(CLI::PositiveNumber);
        sub->add_option("--seed", sim_seed, "Generator seed (runs are pure in flags+seed)");
        sub->add_option("--threads", sim_threads, "Worker threads (0 = hardware)");
        sub->add_option("--out", sim_out, "Output file (default stdout)");
    };

    double sh_lambda = 0.0;
    double sh_theta = 1.0;
    CLI::App* sim_hom = cmd_sim->add_subcommand("homogeneous", "Constant-rate arrivals");
    sim_hom->add_option("--lambda", sh_lambda, "Arrival mean")
        ->required()
        ->check(CLI::PositiveNumber);
    sim_hom->add_option("--theta", sh_theta, "Profile parameter")->check(CLI::PositiveNumber);
    sim_hom->add_option("--tol", sim_tol, "Root tolerance")->check(CLI::PositiveNumber);
    add_common(sim_hom);

    double si_lambda = 0.0;
    double si_kappa = 0.0;
    double si_alpha = 1.0;
    double si_theta = 1.0;
    CLI::App* sim_inh = cmd_sim->add_subcommand("inhomogeneous", "Nonuniform arrival intensity");
    CLI::Option* si_lambda_opt =
        sim_inh->add_option("--lambda", si_lambda, "Constant-rate model")
            ->check(CLI::PositiveNumber);
    CLI::Option* si_kappa_opt =
        sim_inh->add_option("--kappa", si_kappa, "Power-law model offset")
            ->check(CLI::PositiveNumber);
    sim_inh->add_option("--alpha", si_alpha, "Power-law model exponent");
    sim_inh->add_option("--theta", si_theta, "Profile parameter")->check(CLI::PositiveNumber);
    sim_inh->add_option("--tol", sim_tol, "Root tolerance")->check(CLI::PositiveNumber);
    add_common(sim_inh);

    double sc_kappa = 0.0;
    double sc_alpha = 1.0;
    int sc_ell = 1;
    CLI::App* sim_cont = cmd_sim->add_subcommand("continuous", "Continuous success process");
    sim_cont->add_option("--kappa", sc_kappa, "Intensity offset")
        ->required()
        ->check(CLI::PositiveNumber);
    sim_cont->add_option("--alpha", sc_alpha, "Intensity exponent");
    sim_cont->add_option("--ell", sc_ell, "Target rank from the end")->check(CLI::PositiveNumber);
    add_common(sim_cont);

    double cp_lambda = 0.0;
    double cp_theta = 1.0;
    std::vector<double> cp_deltas;
    CLI::App* sim_cmp = cmd_sim->add_subcommand("compare", "Myopic vs perturbed cutoffs");
    sim_cmp->add_option("--lambda", cp_lambda, "Arrival mean")
        ->required()
        ->check(CLI::PositiveNumber);
    sim_cmp->add_option("--theta", cp_theta, "Profile parameter")->check(CLI::PositiveNumber);
    sim_cmp->add_option("--deltas", cp_deltas, "Cutoff perturbations")
        ->required()
        ->delimiter(',');
    sim_cmp->add_option("--tol", sim_tol, "Root tolerance")->check(CLI::PositiveNumber);
    add_common(sim_cmp);

    // verify
    std::string verify_suite;
    int verify_threads = 0;
    CLI::App* cmd_verify = app.add_subcommand("verify", "Verification suites");
    cmd_verify->add_option("suite", verify_suite, "One of: signs, em, identities, monotone")
        ->required();
    cmd_verify->add_option("--threads", verify_threads, "Worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(cmd_roots)) {
            const kslast::RootTable table =
                kslast::critical_roots(roots_k_max, roots_theta, roots_tol, roots_threads);
            emit(kslast::root_table_csv(table), roots_out);
            return 0;
        }

        if (app.got_subcommand(cmd_bounds)) {
            if (bt_ks.empty()) throw std::domain_error("--ks must name at least one index");
            if (bt_theta_opt->count() > 0) {
                std::string out = "k,lo,hi\n";
                for (int k : bt_ks) {
                    const auto [lo, hi] =
                        kslast::root_bounds(k, bt_theta, kslast::BoundVariant::theorem);
                    out += std::to_string(k) + ',' + kslast::format_full(lo) + ',' +
                           kslast::format_full(hi) + '\n';
                }
                emit(out, bt_out);
            } else {
                emit(kslast::comparison_table_csv(kslast::comparison_table(bt_ks)), bt_out);
            }
            return 0;
        }

        if (app.got_subcommand(cmd_sim)) {
            kslast::SimConfig cfg;
            cfg.n_trials = sim_trials;
            cfg.seed = sim_seed;
            kslast::RunRecord rec;

            if (cmd_sim->got_subcommand(sim_hom)) {
                const kslast::ModelParams params{sh_theta, sh_lambda};
                const kslast::RootTable table =
                    kslast::critical_roots_covering(sh_lambda, sh_theta, sim_tol, sim_threads);
                const kslast::StrategySpec strategy = kslast::myopic_cutoffs(sh_lambda, table);
                const kslast::WinStats stats =
                    kslast::simulate_homogeneous(params, strategy, cfg, sim_threads);
                rec.add("command", std::string("simulate.homogeneous"));
                rec.add("lambda", sh_lambda);
                rec.add("theta", sh_theta);
                rec.add("seed", cfg.seed);
                rec.add("table_k_max", static_cast<std::uint64_t>(table.k_max()));
                rec.add("cutoffs_stored", static_cast<std::uint64_t>(strategy.cutoffs.size()));
                rec.add_stats("", stats);
                rec.add("redraws", stats.redraws);
            } else if (cmd_sim->got_subcommand(sim_inh)) {
                const bool has_lambda = si_lambda_opt->count() > 0;
                const bool has_kappa = si_kappa_opt->count() > 0;
                if (has_lambda == has_kappa)
                    throw std::domain_error(
                        "inhomogeneous: give exactly one of --lambda or --kappa");
                const kslast::IntensityModel model =
                    has_lambda ? kslast::IntensityModel::homogeneous(si_lambda)
                               : kslast::IntensityModel::power_law(si_kappa, si_alpha);
                const kslast::RootTable table = kslast::critical_roots_covering(
                    model.total(), si_theta, sim_tol, sim_threads);
                const kslast::WinStats stats =
                    kslast::simulate_inhomogeneous(model, si_theta, table, cfg, sim_threads);
                rec.add("command", std::string("simulate.inhomogeneous"));
                if (has_lambda) {
                    rec.add("model", std::string("homogeneous"));
                    rec.add("lambda", si_lambda);
                } else {
                    rec.add("model", std::string("power_law"));
                    rec.add("kappa", si_kappa);
                    rec.add("alpha", si_alpha);
                }
                rec.add("theta", si_theta);
                rec.add("total_mean", model.total());
                rec.add("seed", cfg.seed);
                rec.add("table_k_max", static_cast<std::uint64_t>(table.k_max()));
                rec.add_stats("", stats);
                rec.add("redraws", stats.redraws);
            } else if (cmd_sim->got_subcommand(sim_cont)) {
                cfg.ell = sc_ell;
                bool clamped = false;
                const double t_star = kslast::cont_threshold(sc_ell, sc_kappa, sc_alpha, &clamped);
                const kslast::WinStats stats =
                    kslast::simulate_continuous(sc_kappa, sc_alpha, cfg, sim_threads);
                rec.add("command", std::string("simulate.continuous"));
                rec.add("kappa", sc_kappa);
                rec.add("alpha", sc_alpha);
                rec.add("ell", static_cast<std::uint64_t>(sc_ell));
                rec.add("seed", cfg.seed);
                rec.add("t_star", t_star);
                rec.add("t_star_clamped", static_cast<std::uint64_t>(clamped ? 1 : 0));
                rec.add("tail_mean", kslast::expected_successes(t_star, 1.0, sc_kappa, sc_alpha));
                rec.add("formula_p", kslast::win_prob_formula(sc_ell));
                rec.add_stats("", stats);
                rec.add("redraws", stats.redraws);
            } else {
                const kslast::ModelParams params{cp_theta, cp_lambda};
                const kslast::RootTable table =
                    kslast::critical_roots_covering(cp_lambda, cp_theta, sim_tol, sim_threads);
                const kslast::CompareReport report =
                    kslast::compare_strategies(params, table, cp_deltas, cfg, sim_threads);
                rec.add("command", std::string("simulate.compare"));
                rec.add("lambda", cp_lambda);
                rec.add("theta", cp_theta);
                rec.add("trials", cfg.n_trials);
                rec.add("seed", cfg.seed);
                rec.add("deltas", deltas_echo(cp_deltas));
                rec.add("table_k_max", static_cast<std::uint64_t>(table.k_max()));
                rec.add_stats("myopic.", report.myopic);
                for (std::size_t i = 0; i < report.rows.size(); ++i) {
                    const kslast::CompareRow& row = report.rows[i];
                    const std::string prefix = "row" + std::to_string(i) + ".";
                    rec.add(prefix + "delta", row.delta);
                    rec.add_stats(prefix, row.stats);
                    rec.add(prefix + "diff", row.diff);
                    rec.add(prefix + "paired_se", row.paired_se);
                    rec.add(prefix + "z", row.z);
                }
                rec.add("redraws", report.myopic.redraws);
            }
            emit(rec.text(), sim_out);
            return 0;
        }

        if (app.got_subcommand(cmd_verify)) {
            const kslast::CheckList checks = kslast::run_verify_suite(verify_suite, verify_threads);
            std::string out;
            std::size_t failures = 0;
            for (const kslast::CheckLine& line : checks.lines) {
                out += line.text;
                out += '\n';
                if (!line.pass) failures += 1;
            }
            out += "checks=" + std::to_string(checks.lines.size()) +
                   " failures=" + std::to_string(failures) + '\n';
            std::cout << out;
            return failures == 0 ? 0 : 3;
        }
    } catch (const kslast::numerical_error& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return 2;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    return 0;
}
