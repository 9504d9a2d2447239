// Timing comparison between the OpenMP kernels and their serial reference
// implementations: root-table solves and the homogeneous simulator. The
// parallel results must match the serial ones exactly, so the check column
// doubles as a correctness probe at benchmark scale.

#include "kslast/policy.hpp"
#include "kslast/roots.hpp"
#include "kslast/simulate.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs parallel kernel timings"};
    int k_max = 400;
    std::uint64_t trials = 200000;
    int threads = 0;
    app.add_option("--k-max", k_max, "Root table size");
    app.add_option("--trials", trials, "Simulation replicates");
    app.add_option("--threads", threads, "Worker threads (0 = hardware)");
    CLI11_PARSE(app, argc, argv);

    std::printf("%-24s %12s %12s %10s  %s\n", "kernel", "serial_s", "parallel_s",
                "speedup", "check");

    {
        auto start = std::chrono::steady_clock::now();
        const kslast::RootTable serial = kslast::critical_roots_serial(k_max, 1.0, 1e-10);
        const double t_serial = seconds_since(start);

        start = std::chrono::steady_clock::now();
        const kslast::RootTable parallel = kslast::critical_roots(k_max, 1.0, 1e-10, threads);
        const double t_parallel = seconds_since(start);

        bool same = serial.roots.size() == parallel.roots.size();
        for (std::size_t i = 0; same && i < serial.roots.size(); ++i)
            same = serial.roots[i].gamma == parallel.roots[i].gamma;
        std::printf("%-24s %12.4f %12.4f %9.2fx  %s\n", "roots", t_serial, t_parallel,
                    t_serial / t_parallel, same ? "identical" : "MISMATCH");
    }

    {
        const kslast::ModelParams params{1.0, 10.0};
        const kslast::RootTable table = kslast::critical_roots_covering(10.0, 1.0, 1e-10);
        const kslast::StrategySpec strategy = kslast::myopic_cutoffs(10.0, table);
        kslast::SimConfig cfg;
        cfg.n_trials = trials;
        cfg.seed = 42;

        auto start = std::chrono::steady_clock::now();
        const kslast::WinStats serial =
            kslast::simulate_homogeneous_serial(params, strategy, cfg);
        const double t_serial = seconds_since(start);

        start = std::chrono::steady_clock::now();
        const kslast::WinStats parallel =
            kslast::simulate_homogeneous(params, strategy, cfg, threads);
        const double t_parallel = seconds_since(start);

        const bool same = serial.wins == parallel.wins && serial.trials == parallel.trials;
        std::printf("%-24s %12.4f %12.4f %9.2fx  %s\n", "simulate_homogeneous", t_serial,
                    t_parallel, t_serial / t_parallel, same ? "identical" : "MISMATCH");
    }

    return 0;
}
