#include "nbfit/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nbfit/common.hpp"
#include "nbfit/dist.hpp"
#include "nbfit/rng.hpp"

namespace nbfit {

namespace {

void check_gof_config(const GofConfig& cfg) {
    if (cfg.boot_reps < 100)
        throw DomainError("GofConfig: boot_reps must be >= 100 for critical values");
    if (!(cfg.level > 0.0) || !(cfg.level < 1.0))
        throw DomainError("GofConfig: level must lie in (0,1)");
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return type7_quantile(v, 0.5);
}

double mean_of(const std::vector<double>& v) {
    Kahan acc;
    for (double x : v) acc.add(x);
    return acc.value() / static_cast<double>(v.size());
}

// One KS evaluation of a freshly fitted NB against its own sample.
double ks_of_fit(const CountSample& s, const FitResult& fit) {
    const NBParams& d = nb_params(fit);
    return ks_statistic(s, fitted_cdf_table(d, s));
}

}  // namespace

double ks_statistic(const CountSample& s, const std::vector<double>& cdf) {
    if (cdf.empty()) throw DomainError("ks_statistic: empty CDF table");
    const double n = static_cast<double>(s.n());
    auto it = s.freq().begin();
    long long cum = 0;
    double worst = 0.0;
    for (std::size_t y = 0; y < cdf.size(); ++y) {
        while (it != s.freq().end() && it->first <= static_cast<long long>(y)) {
            cum += it->second;
            ++it;
        }
        const double fn = static_cast<double>(cum) / n;
        worst = std::max(worst, std::abs(fn - cdf[y]));
    }
    return worst;
}

std::vector<double> fitted_cdf_table(const NBParams& d, const CountSample& s) {
    // A table past 2e7 means the KS scan would need gigabytes; refuse before
    // any allocation.  The sample-max test comes first so a pathological
    // observation never even starts the quantile doubling search.
    constexpr long long kWidthCap = 20000000LL;
    if (s.max() > kWidthCap)
        throw PrecisionError("fitted_cdf_table: support too wide for the CDF scan (y_max = " +
                             std::to_string(s.max()) + ")");
    const long long q_cut = (d.p == 1.0) ? 0 : nb_quantile(d, 1.0 - 1e-9);
    const long long y_max = std::max(s.max(), q_cut);
    if (y_max > kWidthCap)
        throw PrecisionError("fitted_cdf_table: support too wide for the CDF scan (y_max = " +
                             std::to_string(y_max) + ")");
    return nb_cdf_table(d, y_max);
}

double type7_quantile(const std::vector<double>& sorted_values, double q) {
    if (sorted_values.empty()) throw DomainError("type7_quantile: empty pool");
    if (!(q >= 0.0) || !(q <= 1.0)) throw DomainError("type7_quantile: q outside [0,1]");
    const std::size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double h = static_cast<double>(n - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= n) return sorted_values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

GofResult bootstrap_test(const std::vector<long long>& data, const GofConfig& cfg) {
    check_gof_config(cfg);
    const CountSample s = CountSample::summarize(data);
    GofResult out;
    out.fitted = fit_nb(s, cfg.fit_cfg);
    const NBParams fitted = nb_params(out.fitted);
    out.D_n = ks_statistic(s, fitted_cdf_table(fitted, s));

    const std::size_t B = static_cast<std::size_t>(cfg.boot_reps);
    out.boot_stats.assign(B, 0.0);
    const long long n = s.n();
    for_each_index(B, cfg.exec, [&](std::size_t r) {
        RngStream stream(RngStream::derive_key(cfg.seed, r));
        const std::vector<long long> draw = sample_nb(fitted, n, stream);
        const CountSample bs = CountSample::summarize(draw);
        const FitResult refit = fit_nb(bs, cfg.fit_cfg);
        out.boot_stats[r] = ks_of_fit(bs, refit);
    });

    std::vector<double> pool = out.boot_stats;
    std::sort(pool.begin(), pool.end());
    out.d_n = type7_quantile(pool, 1.0 - cfg.level);
    long long ge = 0;
    for (double v : pool)
        if (v >= out.D_n) ++ge;
    out.p_value = static_cast<double>(1 + ge) / static_cast<double>(B + 1);
    out.reject = out.D_n > out.d_n;
    return out;
}

PowerSummary power_experiment(double lambda, long long n, int reps, const GofConfig& cfg) {
    check_gof_config(cfg);
    require_positive_finite(lambda, "power_experiment: lambda");
    if (n < 1) throw DomainError("power_experiment: n must be >= 1");
    if (reps < 1) throw DomainError("power_experiment: reps must be >= 1");

    PowerSummary out;
    out.rows.assign(static_cast<std::size_t>(reps), PowerRow{});
    const PoissonParams truth(lambda);
    for_each_index(static_cast<std::size_t>(reps), cfg.exec, [&](std::size_t r) {
        const std::uint64_t master = RngStream::derive_key(cfg.seed, r);
        RngStream data_stream(RngStream::derive_key(master, 0));
        const std::vector<long long> data = sample_pois(truth, n, data_stream);
        GofConfig rep_cfg = cfg;
        rep_cfg.seed = RngStream::derive_key(master, 1);
        rep_cfg.exec = ExecMode::Serial;  // outer loop owns the workers
        const GofResult g = bootstrap_test(data, rep_cfg);
        const NBParams& d = nb_params(g.fitted);
        out.rows[r] = PowerRow{d.nu, d.p, g.D_n, g.d_n, g.reject};
    });

    std::vector<double> nus, ps, dns, dcs;
    long long rejections = 0;
    for (const PowerRow& row : out.rows) {
        nus.push_back(row.nu_hat);
        ps.push_back(row.p_hat);
        dns.push_back(row.D_n);
        dcs.push_back(row.d_n);
        if (row.reject) ++rejections;
    }
    out.median_nu = median_of(nus);
    out.median_p = median_of(ps);
    out.median_Dn = median_of(dns);
    out.median_dn = median_of(dcs);
    out.mean_nu = mean_of(nus);
    out.mean_p = mean_of(ps);
    out.mean_Dn = mean_of(dns);
    out.mean_dn = mean_of(dcs);
    out.power = static_cast<double>(rejections) / static_cast<double>(reps);
    return out;
}

std::vector<CollapseRow> asymptotic_check(double lambda, const std::vector<long long>& n_grid,
                                          int reps, std::uint64_t seed,
                                          const FitConfig& fit_cfg, ExecMode exec) {
    require_positive_finite(lambda, "asymptotic_check: lambda");
    if (reps < 1) throw DomainError("asymptotic_check: reps must be >= 1");
    if (n_grid.empty()) throw DomainError("asymptotic_check: empty n grid");
    for (std::size_t j = 1; j < n_grid.size(); ++j)
        if (n_grid[j] <= n_grid[j - 1])
            throw DomainError("asymptotic_check: n grid must be strictly increasing");

    const PoissonParams truth(lambda);
    const long long pois_cut = pois_quantile(truth, 1.0 - 1e-9);
    std::vector<CollapseRow> table;
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
        const long long n = n_grid[j];
        const std::uint64_t level_key = RngStream::derive_key(seed, j);
        std::vector<double> dns(static_cast<std::size_t>(reps));
        std::vector<double> dists(static_cast<std::size_t>(reps));
        for_each_index(static_cast<std::size_t>(reps), exec, [&](std::size_t r) {
            RngStream stream(RngStream::derive_key(level_key, r));
            const std::vector<long long> data = sample_pois(truth, n, stream);
            const CountSample s = CountSample::summarize(data);
            const FitResult fit = fit_nb(s, fit_cfg);
            const NBParams& d = nb_params(fit);
            dns[r] = ks_statistic(s, fitted_cdf_table(d, s));
            // Distance between the fitted NB and the data-generating Poisson.
            const long long nb_cut = (d.p == 1.0) ? 0 : nb_quantile(d, 1.0 - 1e-9);
            const long long cut = std::max(pois_cut, nb_cut);
            const std::vector<double> f_nb = nb_cdf_table(d, cut);
            const std::vector<double> f_pois = pois_cdf_table(truth, cut);
            double worst = 0.0;
            for (std::size_t y = 0; y < f_nb.size(); ++y)
                worst = std::max(worst, std::abs(f_nb[y] - f_pois[y]));
            dists[r] = worst;
        });
        table.push_back(CollapseRow{n, median_of(dns), median_of(dists)});
    }
    return table;
}

}  // namespace nbfit
