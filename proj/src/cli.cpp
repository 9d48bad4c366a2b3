#include "nbfit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "nbfit/apma.hpp"
#include "nbfit/bench.hpp"
#include "nbfit/common.hpp"
#include "nbfit/dist.hpp"
#include "nbfit/gof.hpp"
#include "nbfit/io.hpp"
#include "nbfit/limits.hpp"
#include "nbfit/mc.hpp"
#include "nbfit/rng.hpp"
#include "nbfit/score.hpp"

namespace nbfit::cli {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

DatasetFormat parse_format(const std::string& name) {
    if (name == "raw") return DatasetFormat::RawCounts;
    if (name == "freq") return DatasetFormat::FrequencyCSV;
    throw DomainError("unknown format: " + name);
}

void boundary_warning(std::ostream& err, double nu_max) {
    err << "warning: nu_hat reached nu_max (" << fmt(nu_max)
        << "); the sample looks equidispersed or underdispersed. Consider the enb model"
           " or a larger --nu-max.\n";
}

struct FitFlags {
    std::string input;
    std::string format = "raw";
    std::string model = "nb";
    FitConfig cfg{};
    bool json = false;
};

struct GofFlags {
    std::string input;
    std::string format = "raw";
    int boot = 1000;
    double level = 0.05;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool json = false;
    bool serial = false;
    FitConfig cfg{};
};

struct SimFlags {
    std::string dist;  // pois|nb|enb
    double lambda = 0.0, nu = 0.0, p = 0.0, mu = 0.0;
    bool has_lambda = false, has_nu = false, has_p = false, has_mu = false;
    long long n = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool json = false;
};

struct VerifyFlags {
    std::string check;
    std::uint64_t seed = 1;
    int reps = 50;
    int samples = 50;
    bool serial = false;
};

struct BenchFlags {
    std::string grid = "default25";
    std::string kind = "grid";  // grid | dispersion
    std::vector<long long> n_values;
    int reps = 20;
    std::uint64_t seed = 0;
    std::string out_path;
    bool with_oracle = true;
    int oracle_points = 1000;
    bool serial = false;
};

int cmd_fit(const FitFlags& f, std::ostream& out, std::ostream& err) {
    const CountSample s = read_dataset_file(f.input, parse_format(f.format));
    ResultDocument doc;
    if (f.model == "poisson") {
        const auto [lambda, loglik] = fit_poisson(s);
        doc.n = s.n();
        doc.mean = s.mean();
        doc.var_biased = s.var_biased();
        doc.var_unbiased = s.var_unbiased();
        doc.max = s.max();
        doc.model = "poisson";
        doc.lambda = lambda;
        doc.loglik = loglik;
        doc.branch = "poisson";
        doc.config = f.cfg;
    } else {
        const FitResult fit = (f.model == "nb") ? fit_nb(s, f.cfg) : fit_ext_nb(s, f.cfg);
        doc = make_result_document(s, f.model, fit, f.cfg);
        if (fit.at_boundary) boundary_warning(err, f.cfg.nu_max);
    }
    if (f.json) {
        out << write_result(doc);
        return 0;
    }
    out << "model: " << doc.model << "\n";
    out << "n: " << doc.n << "\n";
    out << "mean: " << fmt(doc.mean) << "\n";
    out << "var_biased: " << fmt(doc.var_biased) << "\n";
    if (doc.var_unbiased) out << "var_unbiased: " << fmt(*doc.var_unbiased) << "\n";
    out << "max: " << doc.max << "\n";
    if (doc.nu) out << "nu_hat: " << fmt(*doc.nu) << "\n";
    if (doc.mu) out << "mu_hat: " << fmt(*doc.mu) << "\n";
    if (doc.lambda) out << "lambda_hat: " << fmt(*doc.lambda) << "\n";
    if (doc.p) out << "p_hat: " << fmt(*doc.p) << "\n";
    out << "loglik: " << fmt(doc.loglik) << "\n";
    out << "branch: " << doc.branch << "\n";
    out << "at_boundary: " << (doc.at_boundary ? "true" : "false") << "\n";
    if (doc.branch == "optimized") out << "iterations: " << doc.iterations << "\n";
    return 0;
}

int cmd_gof(const GofFlags& f, std::ostream& out, std::ostream& err) {
    const CountSample s = read_dataset_file(f.input, parse_format(f.format));
    // Re-expand to raw data for the bootstrap entry point.
    std::vector<long long> data;
    data.reserve(static_cast<std::size_t>(s.n()));
    for (const auto& [y, c] : s.freq())
        for (long long i = 0; i < c; ++i) data.push_back(y);

    GofConfig cfg;
    cfg.boot_reps = f.boot;
    cfg.level = f.level;
    cfg.seed = f.seed;
    cfg.fit_cfg = f.cfg;
    cfg.exec = f.serial ? ExecMode::Serial : ExecMode::Parallel;
    const GofResult g = bootstrap_test(data, cfg);
    if (g.fitted.at_boundary) boundary_warning(err, f.cfg.nu_max);

    if (f.json) {
        ResultDocument doc = make_result_document(s, "nb", g.fitted, f.cfg);
        GofBlock block;
        block.D_n = g.D_n;
        block.d_n = g.d_n;
        block.p_value = g.p_value;
        block.reject = g.reject;
        block.boot_reps = f.boot;
        block.level = f.level;
        block.seed = f.seed;
        doc.gof = block;
        out << write_result(doc);
        return 0;
    }
    const NBParams& d = nb_params(g.fitted);
    out << "fitted nb: nu_hat " << fmt(d.nu) << ", p_hat " << fmt(d.p) << "\n";
    out << "D_n: " << fmt(g.D_n) << "\n";
    out << "d_n (level " << fmt(f.level) << "): " << fmt(g.d_n) << "\n";
    out << "p_value: " << fmt(g.p_value) << "\n";
    out << "reject: " << (g.reject ? "true" : "false") << "\n";
    return 0;
}

int cmd_simulate(const SimFlags& f, std::ostream& out) {
    if (f.n < 1) throw DomainError("simulate: --n must be >= 1");
    RngStream stream(RngStream::derive_key(f.seed, 0));
    std::vector<long long> values;
    std::string params_json;
    if (f.dist == "pois") {
        if (!f.has_lambda) throw DomainError("simulate: --dist pois needs --lambda");
        values = sample_pois(PoissonParams(f.lambda), f.n, stream);
        params_json = "{\"lambda\": " + fmt17(f.lambda) + "}";
    } else if (f.dist == "nb") {
        if (!f.has_nu || !f.has_p) throw DomainError("simulate: --dist nb needs --nu and --p");
        values = sample_nb(NBParams(f.nu, f.p), f.n, stream);
        params_json = "{\"nu\": " + fmt17(f.nu) + ", \"p\": " + fmt17(f.p) + "}";
    } else if (f.dist == "enb") {
        if (!f.has_mu || !f.has_p) throw DomainError("simulate: --dist enb needs --mu and --p");
        const ExtNBParams ext(f.mu, f.p);
        if (ext.mu == 0.0)
            values.assign(static_cast<std::size_t>(f.n), 0LL);
        else if (ext.p == 1.0)
            values = sample_pois(PoissonParams(ext.mu), f.n, stream);
        else
            values = sample_nb(convert_to_nb(ext), f.n, stream);
        params_json = "{\"mu\": " + fmt17(f.mu) + ", \"p\": " + fmt17(f.p) + "}";
    } else {
        throw DomainError("simulate: unknown --dist " + f.dist);
    }

    if (f.json) {
        std::string o = "{\n";
        o += "  \"schema_version\": \"1\",\n";
        o += "  \"dist\": \"" + f.dist + "\",\n";
        o += "  \"params\": " + params_json + ",\n";
        o += "  \"n\": " + std::to_string(f.n) + ",\n";
        o += "  \"seed\": " + std::to_string(f.seed) + ",\n";
        o += "  \"values\": [";
        for (std::size_t i = 0; i < values.size(); ++i)
            o += (i ? "," : "") + std::to_string(values[i]);
        o += "]\n}\n";
        out << o;
        return 0;
    }
    for (std::size_t i = 0; i < values.size(); ++i)
        out << (i ? " " : "") << values[i];
    out << "\n";
    return 0;
}

// ---- verify checks: each returns the number of violations and prints a
// one-line summary per requirement group.

int verify_g_limits(const VerifyFlags& f, std::ostream& out) {
    int bad = 0;
    RngStream root(RngStream::derive_key(f.seed, 0x61));
    int checked_small = 0, checked_large = 0;
    for (int k = 0; k < f.samples; ++k) {
        RngStream stream = root.spawn(static_cast<std::uint64_t>(k));
        // Mix of NB and Poisson shapes, n in [20, 220).
        const long long n = 20 + static_cast<long long>(stream.uniform() * 200.0);
        std::vector<long long> data;
        if (k % 2 == 0) {
            const double nu = std::exp(stream.uniform() * 4.0 - 2.0);
            const double p = 0.05 + 0.9 * stream.uniform();
            data = sample_nb(NBParams(nu, p), n, stream);
        } else {
            const double lambda = 0.5 + 9.5 * stream.uniform();
            data = sample_pois(PoissonParams(lambda), n, stream);
        }
        const CountSample s = CountSample::summarize(data);
        if (!(s.mean() > 0.0)) continue;
        const ScoreContext ctx = make_score_context(s);
        const double f0 = s.freq().count(0)
                              ? static_cast<double>(s.freq().at(0)) / static_cast<double>(s.n())
                              : 0.0;
        const double nu_small = 1e-8;
        const double small_g = nu_small * score_g(ctx, nu_small);
        const double small_gp = nu_small * nu_small * score_g_prime(ctx, nu_small);
        ++checked_small;
        if (std::abs(small_g - (1.0 - f0)) > 1e-4) ++bad;
        if (std::abs(small_gp - (f0 - 1.0)) > 1e-4) ++bad;
        const double excess = s.mean() - s.var_biased();
        if (std::abs(excess) > 0.1) {
            const double nu_large = 1e6;
            const double large_g = nu_large * nu_large * score_g(ctx, nu_large);
            ++checked_large;
            if (std::abs(large_g - excess / 2.0) > 0.05 * std::abs(excess / 2.0)) ++bad;
        }
    }
    out << "g-limits: " << checked_small << " small-nu checks, " << checked_large
        << " large-nu checks, " << bad << " violations\n";
    return bad;
}

int verify_G_positivity(const VerifyFlags& f, std::ostream& out) {
    int bad = 0;
    const std::vector<double> lambdas = {1.0, 3.0, 5.0, 10.0};
    for (double lambda : lambdas) {
        for (int i = 0; i < 40; ++i) {
            const double t = static_cast<double>(i) / 39.0;
            const double nu = std::pow(10.0, -2.0 + 8.0 * t);  // [1e-2, 1e6]
            if (!(G_lambda(lambda, nu, 1e-12) > 0.0)) {
                out << "G-positivity violated at lambda " << fmt(lambda) << ", nu " << fmt(nu)
                    << "\n";
                ++bad;
            }
        }
    }
    // Self-consistency: G vanishes at the matching NB member.
    RngStream stream(RngStream::derive_key(f.seed, 0x47));
    int zero_checked = 0;
    for (int k = 0; k < 20; ++k) {
        const double nu0 = std::exp(stream.uniform() * 6.0 - 3.0);
        const double p = 0.1 + 0.85 * stream.uniform();
        const double g0 = G_of(nb_law(nu0, p), nu0, 1e-12);
        ++zero_checked;
        if (std::abs(g0) > 1e-8) {
            out << "G-zero violated at nu0 " << fmt(nu0) << ", p " << fmt(p) << ": " << fmt(g0)
                << "\n";
            ++bad;
        }
    }
    out << "G-positivity: 160 grid points positive, " << zero_checked
        << " matched-member zeros checked, " << bad << " violations\n";
    return bad;
}

int verify_diff_profile(const VerifyFlags&, std::ostream& out) {
    int bad = 0;
    int checked = 0;
    const std::vector<double> lambdas = {1.0, 3.0, 5.0, 10.0};
    for (double lambda : lambdas) {
        for (int i = 0; i < 40; ++i) {
            const double t = static_cast<double>(i) / 39.0;
            const double nu = std::pow(10.0, -2.0 + 8.0 * t);
            try {
                const DiffProfile prof = diff_profile(lambda, nu, 1e-10);
                ++checked;
                if (std::abs(prof.D.back()) > 1e-8) ++bad;
                if (!(weighted_diff_sum(prof, nu) > 0.0)) ++bad;
            } catch (const StructuralError& e) {
                out << "diff-profile structural failure at lambda " << fmt(lambda) << ", nu "
                    << fmt(nu) << ": " << e.what() << "\n";
                ++bad;
            }
        }
    }
    out << "diff-profile: " << checked << " profiles checked, " << bad << " violations\n";
    return bad;
}

int verify_ks_collapse(const VerifyFlags& f, std::ostream& out) {
    const std::vector<long long> grid = {50, 500, 2000};
    const auto table = asymptotic_check(10.0, grid, f.reps, f.seed, FitConfig{},
                                        f.serial ? ExecMode::Serial : ExecMode::Parallel);
    int bad = 0;
    out << "n, median_Dn, median_model_dist\n";
    for (const auto& row : table)
        out << row.n << ", " << fmt(row.median_Dn) << ", " << fmt(row.median_model_dist) << "\n";
    for (std::size_t j = 1; j < table.size(); ++j) {
        // Nonincreasing with 5% slack per step.
        if (table[j].median_Dn > table[j - 1].median_Dn * 1.05) ++bad;
        if (table[j].median_model_dist > table[j - 1].median_model_dist * 1.05) ++bad;
    }
    out << "ks-collapse: " << (table.size() - 1) << " steps checked, " << bad << " violations\n";
    return bad;
}

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
    int bad = 0;
    if (f.check == "g-limits")
        bad = verify_g_limits(f, out);
    else if (f.check == "G-positivity")
        bad = verify_G_positivity(f, out);
    else if (f.check == "diff-profile")
        bad = verify_diff_profile(f, out);
    else if (f.check == "ks-collapse")
        bad = verify_ks_collapse(f, out);
    else
        throw DomainError("verify: unknown --check " + f.check);
    if (bad > 0) throw StructuralError("verify: " + std::to_string(bad) + " violations");
    out << "verify " << f.check << ": ok\n";
    return 0;
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
    std::string csv;
    const ExecMode exec = f.serial ? ExecMode::Serial : ExecMode::Parallel;
    if (f.kind == "grid") {
        if (f.grid != "default25") throw DomainError("bench: unknown --grid " + f.grid);
        std::vector<long long> ns = f.n_values.empty() ? std::vector<long long>{100} : f.n_values;
        const GridSpec spec = default25_grid(ns, f.reps, f.seed);
        csv = grid_csv(run_grid(spec, FitConfig{}, f.with_oracle, f.oracle_points, exec));
    } else if (f.kind == "dispersion") {
        std::vector<long long> ns =
            f.n_values.empty() ? std::vector<long long>{10, 100, 1000, 5000} : f.n_values;
        csv = dispersion_csv(
            dispersion_probability({0.1, 1.0, 10.0}, ns, std::max(f.reps, 100), f.seed, exec));
    } else {
        throw DomainError("bench: unknown --kind " + f.kind);
    }
    if (!f.out_path.empty()) {
        std::ofstream file(f.out_path);
        if (!file) throw DataError("cannot open " + f.out_path + " for writing");
        file << csv;
        out << "wrote " << f.out_path << "\n";
    } else {
        out << csv;
    }
    return 0;
}

void add_fit_config_flags(CLI::App* cmd, FitConfig& cfg) {
    cmd->add_option("--nu-max", cfg.nu_max, "Upper box bound for nu");
    cmd->add_option("--epsilon", cfg.epsilon, "Lower box bound for nu (exclusive)");
    cmd->add_option("--delta", cfg.delta, "Distinct-ratio threshold for the formula branch");
    cmd->add_option("--max-iter", cfg.max_iter, "Iteration cap for the ascent");
    cmd->add_option("--grad-tol", cfg.grad_tol, "Scaled gradient tolerance");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Count-data fitting toolkit: NB maximum likelihood with boundary"
                 " diagnostics, bootstrap GOF, and asymptotic-theory oracles"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Cap worker threads (results unchanged)");

    FitFlags fit_flags;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a model to a count dataset");
    fit_cmd->add_option("--input", fit_flags.input, "Dataset path")->required();
    fit_cmd->add_option("--format", fit_flags.format, "raw|freq")
        ->check(CLI::IsMember({"raw", "freq"}));
    fit_cmd->add_option("--model", fit_flags.model, "nb|enb|poisson")
        ->check(CLI::IsMember({"nb", "enb", "poisson"}));
    add_fit_config_flags(fit_cmd, fit_flags.cfg);
    fit_cmd->add_flag("--json", fit_flags.json, "Emit the canonical JSON document");

    GofFlags gof_flags;
    auto* gof_cmd = app.add_subcommand("gof", "Bootstrap KS goodness-of-fit for the NB model");
    gof_cmd->add_option("--input", gof_flags.input, "Dataset path")->required();
    gof_cmd->add_option("--format", gof_flags.format, "raw|freq")
        ->check(CLI::IsMember({"raw", "freq"}));
    gof_cmd->add_option("--boot", gof_flags.boot, "Bootstrap replicates");
    gof_cmd->add_option("--level", gof_flags.level, "Test level");
    auto* gof_seed = gof_cmd->add_option("--seed", gof_flags.seed, "RNG seed");
    gof_cmd->add_flag("--json", gof_flags.json, "Emit the canonical JSON document");
    gof_cmd->add_flag("--serial", gof_flags.serial, "Force the serial reference path");
    add_fit_config_flags(gof_cmd, gof_flags.cfg);

    SimFlags sim_flags;
    auto* sim_cmd = app.add_subcommand("simulate", "Draw a seeded sample");
    sim_cmd->add_option("--dist", sim_flags.dist, "pois|nb|enb")
        ->required()
        ->check(CLI::IsMember({"pois", "nb", "enb"}));
    auto* sim_lambda = sim_cmd->add_option("--lambda", sim_flags.lambda, "Poisson rate");
    auto* sim_nu = sim_cmd->add_option("--nu", sim_flags.nu, "NB size");
    auto* sim_p = sim_cmd->add_option("--p", sim_flags.p, "Success probability");
    auto* sim_mu = sim_cmd->add_option("--mu", sim_flags.mu, "Extended-family mean");
    sim_cmd->add_option("--n", sim_flags.n, "Sample size")->required();
    auto* sim_seed = sim_cmd->add_option("--seed", sim_flags.seed, "RNG seed");
    sim_cmd->add_flag("--json", sim_flags.json, "Emit JSON");

    VerifyFlags verify_flags;
    auto* verify_cmd = app.add_subcommand("verify", "Numeric checks of the asymptotic theory");
    verify_cmd->add_option("--check", verify_flags.check,
                           "g-limits|G-positivity|diff-profile|ks-collapse")
        ->required()
        ->check(CLI::IsMember({"g-limits", "G-positivity", "diff-profile", "ks-collapse"}));
    verify_cmd->add_option("--seed", verify_flags.seed, "RNG seed");
    verify_cmd->add_option("--reps", verify_flags.reps, "Replicates for randomized checks");
    verify_cmd->add_option("--samples", verify_flags.samples, "Random samples for g-limits");
    verify_cmd->add_flag("--serial", verify_flags.serial, "Force the serial reference path");

    BenchFlags bench_flags;
    auto* bench_cmd = app.add_subcommand("bench", "Grid experiments; CSV output");
    bench_cmd->add_option("--grid", bench_flags.grid, "Grid name (default25)");
    bench_cmd->add_option("--kind", bench_flags.kind, "grid|dispersion")
        ->check(CLI::IsMember({"grid", "dispersion"}));
    bench_cmd->add_option("--n", bench_flags.n_values, "Sample sizes (repeatable)");
    bench_cmd->add_option("--reps", bench_flags.reps, "Replicates per cell");
    bench_cmd->add_option("--seed", bench_flags.seed, "RNG seed");
    bench_cmd->add_option("--out", bench_flags.out_path, "CSV output path (default stdout)");
    bench_cmd->add_flag("--with-oracle,!--no-oracle", bench_flags.with_oracle,
                        "Include grid-oracle likelihood ratios (--no-oracle to skip)");
    bench_cmd->add_option("--oracle-points", bench_flags.oracle_points, "Oracle grid size");
    bench_cmd->add_flag("--serial", bench_flags.serial, "Force the serial reference path");

    std::vector<const char*> argv;
    argv.push_back("nbfit");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream sink_out, sink_err;
        const int code = app.exit(e, sink_out, sink_err);
        out << sink_out.str();
        err << sink_err.str();
        return code == 0 ? 0 : 1;
    }

    try {
        set_worker_cap(threads);
        if (*fit_cmd) return cmd_fit(fit_flags, out, err);
        if (*gof_cmd) {
            gof_flags.seed_given = gof_seed->count() > 0;
            if (gof_flags.json && !gof_flags.seed_given) {
                err << "error: --json requires an explicit --seed on randomized commands\n";
                return 1;
            }
            return cmd_gof(gof_flags, out, err);
        }
        if (*sim_cmd) {
            sim_flags.has_lambda = sim_lambda->count() > 0;
            sim_flags.has_nu = sim_nu->count() > 0;
            sim_flags.has_p = sim_p->count() > 0;
            sim_flags.has_mu = sim_mu->count() > 0;
            sim_flags.seed_given = sim_seed->count() > 0;
            if (sim_flags.json && !sim_flags.seed_given) {
                err << "error: --json requires an explicit --seed on randomized commands\n";
                return 1;
            }
            return cmd_simulate(sim_flags, out);
        }
        if (*verify_cmd) return cmd_verify(verify_flags, out);
        if (*bench_cmd) return cmd_bench(bench_flags, out);
        err << "error: no subcommand\n";
        return 1;
    } catch (const PrecisionError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace nbfit::cli
