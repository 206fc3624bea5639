#include "fogmatch/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fogmatch/analytic.hpp"
#include "fogmatch/channel.hpp"
#include "fogmatch/codes.hpp"
#include "fogmatch/errors.hpp"
#include "fogmatch/io.hpp"
#include "fogmatch/simulator.hpp"
#include "fogmatch/verify.hpp"

namespace fogmatch {

namespace {

// Flags beat config-file entries, which beat defaults: a file key is applied
// only when the matching flag is absent from the command line.
std::vector<std::string> expand_config_args(const std::vector<std::string>& raw) {
    std::vector<std::string> args;
    std::string config_path;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config") {
            if (i + 1 >= raw.size()) throw UsageError("--config requires a file path");
            config_path = raw[++i];
            continue;
        }
        args.push_back(raw[i]);
    }
    if (config_path.empty()) return args;
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot read config file: " + config_path);
    std::string line;
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string t) {
            const auto b = t.find_first_not_of(" \t\r");
            const auto e = t.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) entries.emplace_back(key, value);
    }
    for (const auto& [key, value] : entries) {
        const std::string flag = "--" + key;
        bool overridden = false;
        for (const auto& a : args) overridden = overridden || a == flag;
        if (overridden) continue;
        args.push_back(flag);
        if (value == "true" || value.empty()) continue; // bare flags
        args.push_back(value);
    }
    return args;
}

std::vector<double> parse_snr_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(spec);
        if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw UsageError("bad --snr-db-range, expected start:stop:step");
        for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
    } else {
        std::istringstream is(spec);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) continue;
            grid.push_back(std::stod(tok));
        }
    }
    if (grid.empty()) throw UsageError("empty --snr-db-range");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw UsageError("--snr-db-range must increase");
    return grid;
}

std::vector<double> parse_double_list(const std::string& spec) {
    std::vector<double> out;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

void emit(const std::string& out_path, const RunManifest& manifest, const std::vector<CsvRow>& rows) {
    const std::string doc = csv_document(manifest, rows);
    if (out_path.empty()) {
        std::cout << doc;
    } else {
        write_file(out_path, doc);
        std::cerr << "wrote " << out_path << " (" << rows.size() << " rows)\n";
    }
}

ConditionalEstimate adaptive_conditional(int K, int k, double R, double gamma, long long cap,
                                         int min_events, std::uint64_t seed) {
    long long trials = std::min<long long>(cap, 4096);
    ConditionalEstimate est;
    while (true) {
        est = simulate_conditional_outage(K, k, R, gamma, trials, seed);
        if (est.events >= min_events || trials >= cap) break;
        trials = std::min(cap, trials * 2);
    }
    return est;
}

struct ConditionalArgs {
    int K = 2, k = 1;
    double R = 2.0;
    std::string snr = "0:40:5";
    long long trials = 1'000'000;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_conditional(const ConditionalArgs& a) {
    if (a.k > a.K || a.k < 0 || a.K < 1) throw UsageError("--k must lie in [0, --K]");
    if (!(a.R > 0)) throw UsageError("--R must be > 0");
    const std::vector<double> grid = parse_snr_grid(a.snr);
    const double alpha = a.R / a.K;

    RunManifest man;
    man.experiment = "conditional";
    man.seed = a.seed;
    man.set("K", static_cast<long long>(a.K));
    man.set("k", static_cast<long long>(a.k));
    man.set("R", a.R);
    man.set("snr_db", a.snr);
    man.set("trials_cap", a.trials);

    std::vector<CsvRow> rows;
    double anchor_gamma = 0, anchor_value = 0;
    for (double snr_db : grid) {
        const double gamma = db_to_linear(snr_db);
        const ConditionalEstimate est =
            adaptive_conditional(a.K, a.k, a.R, gamma, a.trials, 50, a.seed);
        rows.push_back({snr_db, 0, "mc", est.p_hat, est.ci_lo, est.ci_hi, est.trials});

        SaddleConfig cfg{a.K, static_cast<double>(a.k), alpha, gamma};
        double bound = 1.0;
        try {
            bound = conditional_upper_bound(cfg, a.R).value;
        } catch (const NoSaddle&) {
            bound = 1.0; // outside the upper-tail regime, report the trivial bound
        }
        rows.push_back({snr_db, 0, "analytic_high", bound, 0, 0, 0});
        anchor_gamma = gamma;
        anchor_value = bound;

        try {
            const double e = conditional_bound_exponent(cfg, a.R);
            rows.push_back({snr_db, 0, "exponent_analytic", e, 0, 0, 0});
        } catch (const NoSaddle&) {
        }
    }
    // Asymptote: slope from the conditional diversity at fixed rate (r -> 0).
    const double d_line = conditional_dmt(a.K, a.k, 0.0).d;
    for (double snr_db : grid) {
        const double gamma = db_to_linear(snr_db);
        rows.push_back({snr_db, 0, "dmr_asymptote",
                        anchor_value * std::pow(gamma / anchor_gamma, -d_line), 0, 0, 0});
    }
    man.set("dmt_slope", d_line);
    emit(a.out, man, rows);
    return 0;
}

struct ContentArgs {
    int M = 10, N = 5, L = 4;
    int K = 0;                 // homogeneous demand; 0 when --rates/--optimal-k drive it
    std::string rates;         // per-content sizes
    bool use_optimal_k = false;
    double rate = 0;           // fixed rate for all users
    double mux = 0;            // multiplexing gain for all users
    std::string snr = "0:40:5";
    long long trials = 200'000;
    double eta = 0.5;
    std::uint64_t seed = 1;
    std::string estimator = "indicator";
    std::string out;
};

int cmd_content(const ContentArgs& a) {
    ExperimentConfig cfg;
    cfg.M = a.M;
    cfg.N = a.N;
    cfg.L = a.L;
    cfg.seed = a.seed;
    cfg.policy.eta = a.eta;
    cfg.trials_cap = a.trials;
    cfg.trials_init = std::min(cfg.trials_init, a.trials);
    cfg.snr_db = parse_snr_grid(a.snr);
    if (a.estimator == "indicator")
        cfg.estimator = Estimator::indicator;
    else if (a.estimator == "conditioned")
        cfg.estimator = Estimator::conditioned;
    else
        throw UsageError("--estimator must be indicator or conditioned");

    std::vector<double> sizes;
    if (!a.rates.empty()) {
        sizes = parse_double_list(a.rates);
        if (static_cast<int>(sizes.size()) != a.M)
            throw UsageError("--rates must list one content size per user");
    }
    if (a.use_optimal_k) {
        if (sizes.empty()) throw UsageError("--optimal-k requires --rates");
        cfg.K = optimal_k(sizes, a.N);
    } else {
        if (a.K < 1) throw UsageError("either --K or --rates with --optimal-k is required");
        cfg.K.assign(a.M, a.K);
    }
    const bool dynamic = a.mux > 0;
    if (dynamic == (a.rate > 0 || !sizes.empty()))
        throw UsageError("exactly one of --rate/--rates or --mux is required");
    if (dynamic) {
        cfg.rate_mode = RateMode::dynamic_rate;
        cfg.mux.assign(a.M, a.mux);
    } else {
        cfg.rate_mode = RateMode::fixed_rate;
        cfg.rate = sizes.empty() ? std::vector<double>(a.M, a.rate) : sizes;
    }
    cfg.validate(); // infeasible configurations are rejected before any sampling

    RunManifest man;
    man.experiment = "content";
    man.seed = a.seed;
    man.set("M", static_cast<long long>(a.M));
    man.set("N", static_cast<long long>(a.N));
    man.set("L", static_cast<long long>(a.L));
    {
        std::ostringstream os;
        for (size_t i = 0; i < cfg.K.size(); ++i) os << (i ? "," : "") << cfg.K[i];
        man.set("K", os.str());
    }
    man.set("eta", a.eta);
    man.set("mode", dynamic ? "dynamic" : "fixed");
    if (dynamic)
        man.set("mux", a.mux);
    else if (!sizes.empty())
        man.set("rates", a.rates);
    else
        man.set("rate", a.rate);
    man.set("snr_db", a.snr);
    man.set("trials_cap", a.trials);
    man.set("estimator", a.estimator);

    std::vector<OutageCurve> curves = simulate_content_outage(cfg);
    for (auto& c : curves) {
        try {
            estimate_exponent(c);
        } catch (const InsufficientData&) {
        }
    }

    std::vector<CsvRow> rows;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            rows.push_back({p.gamma_db, c.user, "mc", p.p_hat, p.ci_lo, p.ci_hi, p.trials});
            if (p.exponent_valid)
                rows.push_back({p.gamma_db, c.user, "exponent_mc", p.exponent, 0, 0, p.trials});
        }
    }
    for (int m = 0; m < a.M; ++m) {
        const double r_m = dynamic ? a.mux : 1e-9;
        const double d_star = dmr(a.M, a.N, a.L, cfg.K[m], a.eta, r_m);
        double anchor_gamma = 0, anchor_p = 0;
        for (const auto& p : curves[m].points) {
            const double gamma = p.gamma;
            const double R_m = dynamic ? a.mux * std::log(gamma)
                                       : (sizes.empty() ? a.rate : sizes[m]);
            if (R_m > 0) {
                const auto hi = content_outage_high_snr(a.M, a.N, a.L, cfg.K[m], a.eta, R_m, gamma);
                rows.push_back({p.gamma_db, m, "analytic_high", hi.value, 0, 0, 0});
                const double lo = content_outage_low_snr(a.N, cfg.K[m], R_m, gamma);
                rows.push_back({p.gamma_db, m, "analytic_low", lo, 0, 0, 0});
            }
            if (p.p_hat > 0) {
                anchor_gamma = gamma;
                anchor_p = p.p_hat;
            }
        }
        if (anchor_gamma > 0)
            for (const auto& p : curves[m].points)
                rows.push_back({p.gamma_db, m, "dmr_asymptote",
                                anchor_p * std::pow(p.gamma / anchor_gamma, -d_star), 0, 0, 0});
    }
    emit(a.out, man, rows);
    return 0;
}

struct CompareArgs {
    int M = 10, N = 5, L = 4, K = 2, D = 0;
    double rate = 2.0;
    std::string schemes = "msr,mbr";
    std::string snr = "0:30:5";
    long long trials = 100'000;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_compare_codes(const CompareArgs& a) {
    const int D = a.D > 0 ? a.D : std::min(a.K + 1, a.N - 1);
    if (D < a.K) throw InvalidDimensions("compare-codes: need K <= D");
    std::vector<std::string> schemes;
    {
        std::istringstream is(a.schemes);
        std::string tok;
        while (std::getline(is, tok, ',')) schemes.push_back(tok);
    }
    RunManifest man;
    man.experiment = "compare_codes";
    man.seed = a.seed;
    man.set("M", static_cast<long long>(a.M));
    man.set("N", static_cast<long long>(a.N));
    man.set("L", static_cast<long long>(a.L));
    man.set("K", static_cast<long long>(a.K));
    man.set("D", static_cast<long long>(D));
    man.set("R", a.rate);
    man.set("schemes", a.schemes);
    man.set("snr_db", a.snr);
    man.set("trials_cap", a.trials);

    std::vector<CsvRow> rows;
    for (const std::string& scheme : schemes) {
        double alpha_scale = 1.0;
        if (scheme == "msr") {
            alpha_scale = 1.0;
        } else if (scheme == "mbr") {
            const StoragePoint msr = msr_params(a.rate, a.K, D);
            const StoragePoint mbr = mbr_params(a.rate, a.K, D);
            alpha_scale = mbr.alpha / msr.alpha; // 2D/(2D-K+1)
        } else {
            throw UsageError("unknown scheme '" + scheme + "' (use msr,mbr)");
        }
        ExperimentConfig cfg;
        cfg.M = a.M;
        cfg.N = a.N;
        cfg.L = a.L;
        cfg.K.assign(a.M, a.K);
        cfg.rate_mode = RateMode::fixed_rate;
        cfg.rate.assign(a.M, a.rate);
        cfg.snr_db = parse_snr_grid(a.snr);
        cfg.trials_cap = a.trials;
        cfg.trials_init = std::min(cfg.trials_init, a.trials);
        cfg.seed = a.seed; // shared seed: schemes face identical channels
        cfg.alpha_scale = alpha_scale;
        cfg.validate();
        const std::vector<OutageCurve> curves = simulate_content_outage(cfg);
        for (const auto& c : curves)
            for (const auto& p : c.points)
                rows.push_back({p.gamma_db, c.user, "mc_" + scheme, p.p_hat, p.ci_lo, p.ci_hi, p.trials});
    }
    emit(a.out, man, rows);
    return 0;
}

struct VerifyArgs {
    bool quick = false;
    std::uint64_t seed = 7;
    bool inject_degree_violation = false;
};

int cmd_verify(const VerifyArgs& a) {
    const int inst_small = a.quick ? 50 : 200;
    const int inst_bp = a.quick ? 200 : 1000;
    const int grid = a.quick ? 25 : 100;
    const int seeds = a.quick ? 2000 : 10000;
    std::vector<SuiteResult> suites;
    suites.push_back(verify_min_cut_enumeration(inst_small, a.seed));
    suites.push_back(verify_bp_vs_flow(inst_bp, a.seed + 1));
    suites.push_back(verify_special_functions(grid, a.seed + 2));
    suites.push_back(verify_fairness(seeds, a.seed + 3, a.inject_degree_violation));
    bool all_ok = true;
    for (const auto& s : suites) {
        all_ok = all_ok && s.passed();
        std::cout << (s.passed() ? "[PASS] " : "[FAIL] ") << s.name << ": " << s.checks << " checks, "
                  << s.failures << " failures";
        if (!s.detail.empty()) std::cout << " (" << s.detail << ")";
        std::cout << '\n';
    }
    return all_ok ? 0 : 3;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Coded-caching outage toolkit for fog access networks"};
    app.require_subcommand(1);

    std::string config_doc;
    ConditionalArgs ca;
    auto* c1 = app.add_subcommand("conditional", "Conditional outage: MC vs analytic bound");
    c1->add_option("--config", config_doc, "key=value config file; flags override file entries");
    c1->add_option("--K", ca.K, "selected APs per user");
    c1->add_option("--k", ca.k, "non-outage APs among the K");
    c1->add_option("--R", ca.R, "content size in nats");
    c1->add_option("--snr-db-range", ca.snr, "start:stop:step or comma list, dB");
    c1->add_option("--trials", ca.trials, "trial cap per grid point");
    c1->add_option("--seed", ca.seed, "run seed")->envname("FOGMATCH_SEED");
    c1->add_option("--out", ca.out, "output CSV path (default stdout)");

    ContentArgs ct;
    auto* c2 = app.add_subcommand("content", "Content outage across the SNR grid");
    c2->add_option("--config", config_doc, "key=value config file; flags override file entries");
    c2->add_option("--M", ct.M, "users");
    c2->add_option("--N", ct.N, "APs");
    c2->add_option("--L", ct.L, "RBs per AP");
    c2->add_option("--K", ct.K, "APs accessed per user (homogeneous)");
    c2->add_option("--rates", ct.rates, "per-content sizes, comma list");
    c2->add_flag("--optimal-k", ct.use_optimal_k, "derive K from --rates");
    c2->add_option("--rate", ct.rate, "fixed content size for all users");
    c2->add_option("--mux", ct.mux, "multiplexing gain (dynamic rate R = r ln gamma)");
    c2->add_option("--snr-db-range", ct.snr, "start:stop:step or comma list, dB");
    c2->add_option("--trials", ct.trials, "trial cap per grid point");
    c2->add_option("--eta", ct.eta, "fairness share reported and used in branch rules");
    c2->add_option("--seed", ct.seed, "run seed")->envname("FOGMATCH_SEED");
    c2->add_option("--estimator", ct.estimator, "indicator | conditioned");
    c2->add_option("--out", ct.out, "output CSV path (default stdout)");

    CompareArgs cc;
    auto* c3 = app.add_subcommand("compare-codes", "MSR vs MBR outage at equal (R,K,D)");
    c3->add_option("--config", config_doc, "key=value config file; flags override file entries");
    c3->add_option("--M", cc.M, "users");
    c3->add_option("--N", cc.N, "APs");
    c3->add_option("--L", cc.L, "RBs per AP");
    c3->add_option("--K", cc.K, "APs accessed per user");
    c3->add_option("--D", cc.D, "repair degree (default min(K+1, N-1))");
    c3->add_option("--rate", cc.rate, "content size in nats");
    c3->add_option("--schemes", cc.schemes, "comma list from {msr,mbr}");
    c3->add_option("--snr-db-range", cc.snr, "start:stop:step or comma list, dB");
    c3->add_option("--trials", cc.trials, "trial cap per grid point");
    c3->add_option("--seed", cc.seed, "run seed")->envname("FOGMATCH_SEED");
    c3->add_option("--out", cc.out, "output CSV path (default stdout)");

    VerifyArgs va;
    auto* c4 = app.add_subcommand("verify", "Run the oracle/property suites");
    c4->add_flag("--quick", va.quick, "reduced trial counts, same suites");
    c4->add_option("--seed", va.seed, "suite seed")->envname("FOGMATCH_SEED");
    c4->add_flag("--inject-degree-violation", va.inject_degree_violation,
                 "test hook: corrupt one solution to exercise the feasibility check")
        ->group(""); // hidden

    std::vector<std::string> raw;
    for (int i = 1; i < argc; ++i) raw.emplace_back(argv[i]);
    std::vector<std::string> expanded;
    std::vector<const char*> cargv{argv[0]};
    try {
        expanded = expand_config_args(raw);
        for (const auto& a : expanded) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        int rc = 0;
        if (app.got_subcommand(c1)) rc = cmd_conditional(ca);
        if (app.got_subcommand(c2)) rc = cmd_content(ct);
        if (app.got_subcommand(c3)) rc = cmd_compare_codes(cc);
        if (app.got_subcommand(c4)) rc = cmd_verify(va);
        const auto end = std::chrono::steady_clock::now();
        std::cerr << "wall_clock_sec="
                  << std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count() / 1000.0
                  << '\n';
        return rc;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const InfeasibleDemand& e) {
        std::cerr << "infeasible configuration: " << e.what() << '\n';
        return 2;
    } catch (const InvalidDimensions& e) {
        std::cerr << "infeasible configuration: " << e.what() << '\n';
        return 2;
    } catch (const RoundingInfeasible& e) {
        std::cerr << "infeasible configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace fogmatch
