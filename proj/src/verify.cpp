#include "kslast/verify.hpp"

#include "kslast/bounds.hpp"
#include "kslast/policy.hpp"
#include "kslast/roots.hpp"
#include "kslast/sign_checks.hpp"
#include "kslast/special_functions.hpp"

#include <cstdio>
#include <stdexcept>

namespace kslast {
namespace {

CheckList suite_signs() {
    CheckList out;
    out.merge(check_gamma_ratio_sign_grid());
    out.merge(check_kummer_ratio_sign_a_grid());
    out.merge(check_kummer_ratio_sign_c_grid());
    return out;
}

CheckList suite_em() {
    CheckList out;
    out.merge(check_em_grid());
    out.merge(check_covariance_inequalities());
    out.merge(check_binomial_poisson_order());
    return out;
}

CheckList suite_identities() {
    CheckList out;
    out.merge(check_kummer_transformation());
    out.merge(check_series_integral_agreement());
    out.merge(check_digamma_recurrence());
    return out;
}

CheckList suite_monotone(int n_threads) {
    CheckList out;
    const double thetas[] = {0.25, 0.5, 1.0, 2.0, 5.0};
    for (double theta : thetas) {
        char buf[120];
        try {
            critical_roots(200, theta, 1e-10, n_threads);
            std::snprintf(buf, sizeof buf,
                          "roots strictly increasing theta=%-5g k=1..200 ok", theta);
            out.add(true, buf);
        } catch (const numerical_error& err) {
            std::snprintf(buf, sizeof buf, "roots monotonicity theta=%-5g FAIL: %s",
                          theta, err.what());
            out.add(false, buf);
        }
    }

    const std::vector<double> x_grid = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
    for (int k : {1, 2, 5, 10})
        for (double theta : {0.5, 1.0, 2.0})
            out.merge(log_derivative_ordering(k, theta, x_grid));

    // Myopic cutoffs inherit monotonicity from the roots: nonincreasing in
    // k and confined to [0, 1).
    for (double lambda : {2.0, 5.0, 10.0, 25.0}) {
        const RootTable table = critical_roots_covering(lambda, 1.0, 1e-10, n_threads);
        const StrategySpec spec = myopic_cutoffs(lambda, table);
        bool ok = true;
        double prev = 1.0;
        for (double a : spec.cutoffs) {
            if (!(a >= 0.0 && a < 1.0 && a <= prev)) ok = false;
            prev = a;
        }
        char buf[120];
        std::snprintf(buf, sizeof buf,
                      "cutoffs nonincreasing in [0,1) lambda=%-4g stored=%zu %s", lambda,
                      spec.cutoffs.size(), ok ? "ok" : "FAIL");
        out.add(ok, buf);
    }
    return out;
}

} // namespace

CheckList run_verify_suite(const std::string& name, int n_threads) {
    if (name == "signs") return suite_signs();
    if (name == "em") return suite_em();
    if (name == "identities") return suite_identities();
    if (name == "monotone") return suite_monotone(n_threads);
    throw std::domain_error("run_verify_suite: unknown suite '" + name + "'");
}

std::vector<std::string> verify_suite_names() {
    return {"signs", "em", "identities", "monotone"};
}

} // namespace kslast
