#include "kslast/roots.hpp"

#include "kslast/bounds.hpp"
#include "kslast/special_functions.hpp"

#include <cmath>
#include <exception>
#include <istream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kslast {

double reward_gap(int k, double theta, double x) {
    const ScaledKummer s = kummer_scaled(k, theta, x);
    return theta * s.da - s.m;
}

double RootTable::gamma(int k) const {
    if (k < 1 || k > k_max()) throw std::out_of_range("RootTable::gamma: k out of range");
    return roots[k - 1].gamma;
}

void RootTable::validate_increasing() const {
    for (int i = 1; i < k_max(); ++i)
        if (!(roots[i].gamma > roots[i - 1].gamma))
            throw numerical_error("RootTable: roots are not strictly increasing at k = " +
                                  std::to_string(i + 1));
}

namespace {

struct Bracket {
    double lo;
    double hi;
};

// Initial bracket. For k >= 2 the analytic bounds enclose the root: the
// looser of the two lower-bound forms on the left, the common upper bound on
// the right. k = 1 starts just above zero. A geometric expansion recovers
// from any residual slack.
Bracket initial_bracket(int k, double theta) {
    if (k >= 2) {
        const auto lo = root_bounds(k, theta, BoundVariant::table).first;
        const auto hi = root_bounds(k, theta, BoundVariant::theorem).second;
        return {lo, hi};
    }
    const double hi = root_bounds(2, theta, BoundVariant::theorem).second;
    return {1e-8, hi};
}

}  // namespace

RootRecord solve_root(int k, double theta, double tol) {
    if (k < 1) throw std::domain_error("solve_root: k must be at least 1");
    if (!(theta > 0.0)) throw std::domain_error("solve_root: theta must be positive");
    if (!(tol > 0.0)) throw std::domain_error("solve_root: tol must be positive");

    Bracket br = initial_bracket(k, theta);
    double f_lo = reward_gap(k, theta, br.lo);
    double f_hi = reward_gap(k, theta, br.hi);
    for (int tries = 0; f_lo > 0.0 && tries < 100; ++tries) {
        br.lo *= 0.5;
        f_lo = reward_gap(k, theta, br.lo);
    }
    for (int tries = 0; f_hi < 0.0 && tries < 100; ++tries) {
        br.hi *= 1.5;
        f_hi = reward_gap(k, theta, br.hi);
    }
    if (f_lo > 0.0 || f_hi < 0.0)
        throw numerical_error("solve_root: no sign change within expansion budget at k = " +
                              std::to_string(k));

    RootRecord rec;
    rec.k = k;
    rec.bracket_lo = br.lo;
    rec.bracket_hi = br.hi;
    if (f_lo == 0.0) {
        rec.gamma = br.lo;
        rec.residual = 0.0;
        return rec;
    }
    if (f_hi == 0.0) {
        rec.gamma = br.hi;
        rec.residual = 0.0;
        return rec;
    }

    double lo = br.lo, hi = br.hi;
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        // Secant proposal from the bracket endpoints; fall back to bisection
        // whenever it leaves the bracket or stops making progress.
        double cand = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        const double margin = 0.01 * (hi - lo);
        if (!(cand > lo + margin) || !(cand < hi - margin)) cand = 0.5 * (lo + hi);
        const double f_cand = reward_gap(k, theta, cand);
        if (f_cand == 0.0) {
            lo = hi = cand;
        } else if (f_cand < 0.0) {
            lo = cand;
            f_lo = f_cand;
        } else {
            hi = cand;
            f_hi = f_cand;
        }
        x = 0.5 * (lo + hi);
    }
    rec.gamma = x;
    rec.residual = reward_gap(k, theta, x);
    return rec;
}

namespace {

RootTable solve_table(int k_max, double theta, double tol, bool parallel, int threads) {
    if (k_max < 1) throw std::domain_error("critical_roots: k_max must be at least 1");
    if (!(theta > 0.0)) throw std::domain_error("critical_roots: theta must be positive");
    RootTable table;
    table.theta = theta;
    table.tol = tol;
    table.roots.resize(k_max);

    if (parallel) {
#ifdef _OPENMP
        const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#else
        const int n_threads = 1;
        (void)threads;
#endif
        std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
        for (int k = 1; k <= k_max; ++k) {
            try {
                table.roots[k - 1] = solve_root(k, theta, tol);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (int k = 1; k <= k_max; ++k) table.roots[k - 1] = solve_root(k, theta, tol);
    }
    table.validate_increasing();
    return table;
}

}  // namespace

RootTable critical_roots(int k_max, double theta, double tol, int threads) {
    return solve_table(k_max, theta, tol, true, threads);
}

RootTable critical_roots_serial(int k_max, double theta, double tol) {
    return solve_table(k_max, theta, tol, false, 1);
}

RootTable critical_roots_covering(double lambda, double theta, double tol, int threads) {
    if (!(lambda > 0.0))
        throw std::domain_error("critical_roots_covering: lambda must be positive");
    int k_max = std::max(1, static_cast<int>(lambda / asymptotic_root_ratio(theta)) + 4);
    for (int tries = 0; tries < 60; ++tries) {
        RootTable table = critical_roots(k_max, theta, tol, threads);
        if (table.roots.back().gamma >= lambda) {
            std::size_t keep = 1;
            while (table.roots[keep - 1].gamma < lambda) ++keep;
            table.roots.resize(keep);
            return table;
        }
        k_max += std::max(4, k_max / 2);
    }
    throw numerical_error("critical_roots_covering: table did not reach lambda");
}

double asymptotic_root_ratio(double theta) {
    if (!(theta > 0.0)) throw std::domain_error("asymptotic_root_ratio: theta must be positive");
    return std::expm1(1.0 / theta);
}

std::string root_table_csv(const RootTable& table) {
    std::string out = "# theta=" + format_full(table.theta) + " tol=" + format_full(table.tol) + "\n";
    out += "k,gamma,residual,bracket_lo,bracket_hi\n";
    for (const RootRecord& r : table.roots) {
        out += std::to_string(r.k);
        out += ',';
        out += format_full(r.gamma);
        out += ',';
        out += format_full(r.residual);
        out += ',';
        out += format_full(r.bracket_lo);
        out += ',';
        out += format_full(r.bracket_hi);
        out += '\n';
    }
    return out;
}

RootTable root_table_from_csv(std::istream& in) {
    RootTable table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# theta=", 0) != 0)
        throw std::runtime_error("root_table_from_csv: missing parameter line");
    {
        std::istringstream meta(line.substr(2));
        std::string field;
        while (meta >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = field.substr(0, eq);
            const double value = std::stod(field.substr(eq + 1));
            if (key == "theta") table.theta = value;
            if (key == "tol") table.tol = value;
        }
    }
    if (!std::getline(in, line) || line != "k,gamma,residual,bracket_lo,bracket_hi")
        throw std::runtime_error("root_table_from_csv: missing header line");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        RootRecord r;
        char comma;
        if (!(row >> r.k >> comma >> r.gamma >> comma >> r.residual >> comma >> r.bracket_lo >>
              comma >> r.bracket_hi))
            throw std::runtime_error("root_table_from_csv: malformed record: " + line);
        if (r.k != static_cast<int>(table.roots.size()) + 1)
            throw std::runtime_error("root_table_from_csv: records must be consecutive in k");
        table.roots.push_back(r);
    }
    if (table.roots.empty()) throw std::runtime_error("root_table_from_csv: no records");
    table.validate_increasing();
    return table;
}

}  // namespace kslast
