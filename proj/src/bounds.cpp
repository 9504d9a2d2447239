#include "kslast/bounds.hpp"

#include "kslast/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace kslast {

namespace {

constexpr double kE = std::numbers::e;

}  // namespace

std::pair<double, double> classical_bounds(int k) {
    if (k < 2) throw std::domain_error("classical_bounds: k must be at least 2");
    const double lo = (kE - 1.0) * (k - 1);
    const double hi = 4.0 * kE * ((kE - 1.0) * k + 1.0);
    return {lo, hi};
}

std::pair<double, double> root_bounds(int k, double theta, BoundVariant variant) {
    if (k < 2) throw std::domain_error("root_bounds: k must be at least 2");
    if (!(theta > 0.0)) throw std::domain_error("root_bounds: theta must be positive");
    const double eps =
        variant == BoundVariant::theorem ? 1.0 / (2.0 * (k - 1)) : 1.0 / (2.0 * k - 1.0);
    const double lo = std::expm1(1.0 / theta + eps) * (k - 1);
    const double hi = std::expm1(1.0 / theta + 1.0 / ((kE - 1.0) * theta)) * (k - 1);
    return {lo, hi};
}

std::vector<BoundsRow> comparison_table(const std::vector<int>& ks) {
    if (ks.empty()) throw std::domain_error("comparison_table: k list must be nonempty");
    std::vector<BoundsRow> rows;
    rows.reserve(ks.size());
    for (int k : ks) {
        const auto orig = classical_bounds(k);
        const auto sharp = root_bounds(k, 1.0, BoundVariant::table);
        BoundsRow row;
        row.k = k;
        row.lo_orig = orig.first;
        row.hi_orig = orig.second;
        row.lo_new = sharp.first;
        row.hi_new = sharp.second;
        row.factor_lo = sharp.first / orig.first;
        row.factor_hi = orig.second / sharp.second;
        row.factor_range = (orig.second - orig.first) / (sharp.second - sharp.first);
        rows.push_back(row);
    }
    return rows;
}

std::string comparison_table_csv(const std::vector<BoundsRow>& rows) {
    std::string out = "k,lo_orig,hi_orig,lo_new,hi_new,factor_lo,factor_hi,factor_range\n";
    for (const BoundsRow& r : rows) {
        out += std::to_string(r.k);
        for (double v : {r.lo_orig, r.hi_orig, r.lo_new, r.hi_new, r.factor_lo, r.factor_hi,
                         r.factor_range}) {
            out += ',';
            out += format_2dp(v);
        }
        out += '\n';
    }
    return out;
}

double expected_varphi(double gamma, int k) {
    if (!(gamma >= 0.0)) throw std::domain_error("expected_varphi: gamma must be nonnegative");
    if (k < 1) throw std::domain_error("expected_varphi: k must be at least 1");
    if (gamma == 0.0) return 0.0;

    const double spread = 12.0 * std::sqrt(gamma) + 40.0;
    const int n_hi = static_cast<int>(gamma + spread);
    const int n_lo = std::max(0, static_cast<int>(gamma - spread));
    const int n0 = std::clamp(static_cast<int>(gamma), n_lo, n_hi);
    const double kd = static_cast<double>(k);

    const double w0 = std::exp(n0 * std::log(gamma) - gamma - std::lgamma(n0 + 1.0));
    const double harm0 = digamma(kd + n0) - digamma(kd);

    double sum = w0 * harm0;
    double w = w0, harm = harm0;
    for (int n = n0; n < n_hi; ++n) {
        w *= gamma / (n + 1);
        harm += 1.0 / (kd + n);
        sum += w * harm;
        if (w < 1e-20 && n > gamma) break;
    }
    w = w0, harm = harm0;
    for (int n = n0; n > n_lo; --n) {
        w *= n / gamma;
        harm -= 1.0 / (kd + n - 1);
        sum += w * harm;
        if (w < 1e-20) break;
    }
    return sum;
}

TruncatedPoisson truncated_poisson(double gamma, int m) {
    if (!(gamma > 0.0)) throw std::domain_error("truncated_poisson: gamma must be positive");
    if (m < 0) throw std::domain_error("truncated_poisson: m must be nonnegative");
    TruncatedPoisson dist;
    dist.gamma = gamma;
    dist.m = m;
    dist.pmf.assign(m + 2, 0.0);
    double w = std::exp(-gamma);
    double kept = 0.0;
    for (int j = 1; j <= m + 1; ++j) {
        w *= gamma / j;
        dist.pmf[j] = w;
        kept += w;
    }
    // Mass outside 1 .. m+1 (the atom at 0 plus the tail beyond m+1) folds
    // into the atom at 0, so the masses sum to 1 exactly.
    dist.pmf[0] = 1.0 - kept;
    return dist;
}

double TruncatedPoisson::mean() const {
    double s = 0.0;
    for (int j = static_cast<int>(pmf.size()) - 1; j >= 1; --j) s += j * pmf[j];
    return s;
}

EmReport em_check(double gamma, int k) {
    if (!(gamma > 1.0)) throw std::domain_error("em_check: gamma must exceed 1");
    if (k < 1) throw std::domain_error("em_check: k must be at least 1");
    EmReport rep;
    rep.gamma = gamma;
    rep.k = k;
    rep.e_varphi = expected_varphi(gamma, k);
    rep.upper = generalized_harmonic(gamma, k);
    rep.lower_coupling = (1.0 - 1.0 / kE) * generalized_harmonic(gamma - 1.0, k);
    // m is the largest integer strictly below gamma, so gamma lies in
    // (m, m+1].
    const int m = static_cast<int>(std::ceil(gamma)) - 1;
    const TruncatedPoisson y = truncated_poisson(gamma, m);
    rep.lower_truncated = y.mean() / (gamma + 1.0) * rep.upper;
    rep.upper_holds = rep.e_varphi <= rep.upper;
    rep.coupling_holds = rep.e_varphi >= rep.lower_coupling;
    rep.truncated_holds = rep.e_varphi >= rep.lower_truncated;
    return rep;
}

void FiniteDist::validate() const {
    if (pmf.empty()) throw std::domain_error("FiniteDist: pmf must be nonempty");
    double mass = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0)) throw std::domain_error("FiniteDist: masses must be nonnegative");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-12)
        throw std::domain_error("FiniteDist: masses must sum to 1");
}

namespace {

double expect(const FiniteDist& d, const std::vector<double>& vals) {
    double s = 0.0;
    for (size_t i = 0; i < d.pmf.size(); ++i) s += d.pmf[i] * vals[i];
    return s;
}

double expect_product(const FiniteDist& d, const std::vector<double>& f,
                      const std::vector<double>& g) {
    double s = 0.0;
    for (size_t i = 0; i < d.pmf.size(); ++i) s += d.pmf[i] * f[i] * g[i];
    return s;
}

}  // namespace

CovarianceReport covariance_inequality_check(const FiniteDist& x, const FiniteDist& y,
                                             const std::vector<double>& f,
                                             const std::vector<double>& g) {
    x.validate();
    y.validate();
    const size_t n = x.pmf.size();
    if (y.pmf.size() != n || f.size() != n || g.size() != n)
        throw std::domain_error("covariance_inequality_check: inputs must share one support");
    for (size_t i = 1; i < n; ++i) {
        if (f[i] < f[i - 1])
            throw std::domain_error("covariance_inequality_check: f must be nondecreasing");
        if (g[i] > g[i - 1])
            throw std::domain_error("covariance_inequality_check: g must be nonincreasing");
    }
    // Stochastic order: every upper tail of x must stay below that of y.
    double tail_x = 0.0, tail_y = 0.0;
    for (size_t i = n; i-- > 1;) {
        tail_x += x.pmf[i];
        tail_y += y.pmf[i];
        if (tail_x > tail_y + 1e-12)
            throw std::domain_error(
                "covariance_inequality_check: x is not stochastically below y");
    }

    constexpr double kSlack = 1e-12;
    CovarianceReport rep;
    rep.first_holds = expect_product(x, f, g) <= expect(x, f) * expect(x, g) + kSlack;
    rep.second_holds = expect_product(x, f, g) <= expect(y, f) * expect(x, g) + kSlack;
    rep.third_holds = expect_product(y, f, g) >= expect(x, f) * expect(y, g) - kSlack;
    return rep;
}

CheckList check_em_grid() {
    CheckList out;
    const double gammas[] = {1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0};
    const int ks[] = {1, 2, 5, 10, 100};
    for (double gamma : gammas)
        for (int k : ks) {
            const EmReport rep = em_check(gamma, k);
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "em gamma=%-6g k=%-2d  %.6e <= %.6e <= %.6e  trunc_lo=%.6e %s", gamma,
                          k, rep.lower_coupling, rep.e_varphi, rep.upper, rep.lower_truncated,
                          rep.all_hold() ? "ok" : "FAIL");
            out.add(rep.all_hold(), buf);
        }
    return out;
}

CheckList check_covariance_inequalities() {
    CheckList out;
    const int support = 20;
    const struct {
        double mean_x;
        double mean_y;
        int k;
    } cases[] = {{2.0, 3.0, 3}, {1.0, 4.0, 2}, {3.0, 3.5, 5}, {0.5, 2.5, 1}};
    for (const auto& cs : cases) {
        FiniteDist x, y;
        x.pmf.resize(support + 1);
        y.pmf.resize(support + 1);
        double wx = std::exp(-cs.mean_x), wy = std::exp(-cs.mean_y);
        double sx = 0.0, sy = 0.0;
        for (int j = 0; j <= support; ++j) {
            x.pmf[j] = wx;
            y.pmf[j] = wy;
            sx += wx;
            sy += wy;
            wx *= cs.mean_x / (j + 1);
            wy *= cs.mean_y / (j + 1);
        }
        for (int j = 0; j <= support; ++j) {
            x.pmf[j] /= sx;
            y.pmf[j] /= sy;
        }
        std::vector<double> f(support + 1), g(support + 1);
        for (int j = 0; j <= support; ++j) {
            f[j] = generalized_harmonic(j, cs.k);
            g[j] = pochhammer_ratio(j, cs.k, 1.0);
        }
        const CovarianceReport rep = covariance_inequality_check(x, y, f, g);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "covariance means=(%g,%g) k=%d  i=%d ii=%d iii=%d %s", cs.mean_x,
                      cs.mean_y, cs.k, rep.first_holds, rep.second_holds, rep.third_holds,
                      rep.all_hold() ? "ok" : "FAIL");
        out.add(rep.all_hold(), buf);
    }
    return out;
}

CheckList check_binomial_poisson_order() {
    CheckList out;
    const double p = 1.0 - 1.0 / kE;
    for (int m = 1; m <= 30; ++m) {
        for (double gamma : {m + 0.01, m + 0.5, m + 1.0, 2.0 * m + 0.5}) {
            // Exact CDF comparison: Binomial(m, 1 - 1/e) tails must stay
            // below Poisson(gamma) tails whenever gamma > m.
            std::vector<double> bin(m + 1);
            for (int j = 0; j <= m; ++j)
                bin[j] = std::exp(std::lgamma(m + 1.0) - std::lgamma(j + 1.0) -
                                  std::lgamma(m - j + 1.0)) *
                         std::pow(p, j) * std::pow(1.0 - p, m - j);
            bool ok = true;
            double bin_tail = 0.0;
            double poi_cdf = 0.0, w = std::exp(-gamma);
            for (int j = 0; j <= m; ++j) {
                poi_cdf += w;
                w *= gamma / (j + 1);
                bin_tail = 0.0;
                for (int i = j + 1; i <= m; ++i) bin_tail += bin[i];
                const double poi_tail = 1.0 - poi_cdf;
                if (bin_tail > poi_tail + 1e-14) ok = false;
            }
            char buf[120];
            std::snprintf(buf, sizeof buf, "binomial_order m=%-2d gamma=%-6g %s", m, gamma,
                          ok ? "ok" : "FAIL");
            out.add(ok, buf);
        }
    }
    return out;
}

}  // namespace kslast
