#include "nbfit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "nbfit/common.hpp"
#include "nbfit/dist.hpp"
#include "nbfit/rng.hpp"

namespace nbfit {

namespace {

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct TaskOutcome {
    bool failed = false;
    double lik_ratio = 1.0;
    double fit_ms = 0.0;
    bool boundary = false;
};

}  // namespace

GridSpec default25_grid(const std::vector<long long>& n_values, int reps, std::uint64_t seed) {
    GridSpec spec;
    spec.nu_values = {0.01, 0.1, 1.0, 10.0, 100.0};
    spec.p_values = {0.99, 0.9, 0.5, 0.1, 0.01};
    spec.n_values = n_values;
    spec.reps = reps;
    spec.seed = seed;
    return spec;
}

GridResult run_grid(const GridSpec& spec, const FitConfig& cfg, bool with_oracle,
                    int oracle_points, ExecMode exec) {
    if (spec.reps < 10) throw DomainError("run_grid: reps must be >= 10");
    if (spec.nu_values.empty() || spec.p_values.empty() || spec.n_values.empty())
        throw DomainError("run_grid: empty grid axis");
    for (double nu : spec.nu_values) require_positive_finite(nu, "run_grid: nu");
    for (double p : spec.p_values)
        if (!(p > 0.0) || !(p <= 1.0)) throw DomainError("run_grid: p outside (0,1]");
    for (long long n : spec.n_values)
        if (n < 1) throw DomainError("run_grid: n must be >= 1");

    struct CellDef {
        double nu, p;
        long long n;
    };
    std::vector<CellDef> defs;
    for (double nu : spec.nu_values)
        for (double p : spec.p_values)
            for (long long n : spec.n_values) defs.push_back({nu, p, n});

    const std::size_t reps = static_cast<std::size_t>(spec.reps);
    std::vector<TaskOutcome> outcomes(defs.size() * reps);
    for_each_index(outcomes.size(), exec, [&](std::size_t task) {
        const CellDef& def = defs[task / reps];
        TaskOutcome& out = outcomes[task];
        try {
            RngStream stream(RngStream::derive_key(spec.seed, task));
            const NBParams truth(def.nu, def.p);
            const std::vector<long long> data = sample_nb(truth, def.n, stream);
            const CountSample s = CountSample::summarize(data);

            const auto t0 = std::chrono::steady_clock::now();
            const FitResult fit = fit_nb(s, cfg);
            const auto t1 = std::chrono::steady_clock::now();
            out.fit_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            out.boundary = fit.at_boundary;
            (void)fit_ext_nb(s, cfg);  // exercised for the never-fail contract

            if (with_oracle && fit.branch == FitBranch::Optimized) {
                const auto [nu_best, h_best] = grid_oracle(s, cfg, oracle_points);
                (void)nu_best;
                out.lik_ratio = std::exp(h_best - fit.loglik);
            }
        } catch (...) {
            out.failed = true;
        }
    });

    GridResult result;
    for (std::size_t c = 0; c < defs.size(); ++c) {
        GridCell cell;
        cell.nu = defs[c].nu;
        cell.p = defs[c].p;
        cell.n = defs[c].n;
        cell.reps = spec.reps;
        Kahan ratio_sum, ms_sum;
        double ratio_max = 0.0;
        int boundary_hits = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            const TaskOutcome& out = outcomes[c * reps + r];
            if (out.failed) {
                ++cell.failures;
                continue;
            }
            ratio_sum.add(out.lik_ratio);
            ms_sum.add(out.fit_ms);
            ratio_max = std::max(ratio_max, out.lik_ratio);
            if (out.boundary) ++boundary_hits;
        }
        const int ok = spec.reps - cell.failures;
        if (ok > 0) {
            cell.mean_lik_ratio = ratio_sum.value() / ok;
            cell.max_lik_ratio = ratio_max;
            cell.mean_fit_ms = ms_sum.value() / ok;
            cell.boundary_frac = static_cast<double>(boundary_hits) / ok;
        }
        result.cells.push_back(cell);
    }
    return result;
}

std::string grid_csv(const GridResult& result) {
    std::string out =
        "nu,p,n,reps,failures,mean_lik_ratio,max_lik_ratio,mean_fit_ms,boundary_frac\n";
    for (const GridCell& c : result.cells) {
        out += fmt6(c.nu) + "," + fmt6(c.p) + "," + std::to_string(c.n) + "," +
               std::to_string(c.reps) + "," + std::to_string(c.failures) + "," +
               fmt6(c.mean_lik_ratio) + "," + fmt6(c.max_lik_ratio) + "," +
               fmt6(c.mean_fit_ms) + "," + fmt6(c.boundary_frac) + "\n";
    }
    return out;
}

std::vector<DispersionCell> dispersion_probability(const std::vector<double>& lambda_values,
                                                   const std::vector<long long>& n_values,
                                                   int reps, std::uint64_t seed,
                                                   ExecMode exec) {
    if (reps < 100) throw DomainError("dispersion_probability: reps must be >= 100");
    if (lambda_values.empty() || n_values.empty())
        throw DomainError("dispersion_probability: empty axis");
    for (double l : lambda_values) require_positive_finite(l, "dispersion_probability: lambda");
    for (long long n : n_values)
        if (n < 2) throw DomainError("dispersion_probability: n must be >= 2");

    struct CellDef {
        double lambda;
        long long n;
    };
    std::vector<CellDef> defs;
    for (double l : lambda_values)
        for (long long n : n_values) defs.push_back({l, n});

    const std::size_t repsz = static_cast<std::size_t>(reps);
    std::vector<unsigned char> over(defs.size() * repsz, 0);
    for_each_index(over.size(), exec, [&](std::size_t task) {
        const CellDef& def = defs[task / repsz];
        RngStream stream(RngStream::derive_key(seed, task));
        const std::vector<long long> data =
            sample_pois(PoissonParams(def.lambda), def.n, stream);
        const CountSample s = CountSample::summarize(data);
        over[task] = (s.var_biased() > s.mean()) ? 1 : 0;
    });

    std::vector<DispersionCell> table;
    for (std::size_t c = 0; c < defs.size(); ++c) {
        long long hits = 0;
        for (std::size_t r = 0; r < repsz; ++r) hits += over[c * repsz + r];
        table.push_back(DispersionCell{defs[c].lambda, defs[c].n,
                                       static_cast<double>(hits) / static_cast<double>(reps)});
    }
    return table;
}

std::string dispersion_csv(const std::vector<DispersionCell>& table) {
    std::string out = "lambda,n,prob\n";
    for (const DispersionCell& c : table)
        out += fmt6(c.lambda) + "," + std::to_string(c.n) + "," + fmt6(c.prob) + "\n";
    return out;
}

}  // namespace nbfit
