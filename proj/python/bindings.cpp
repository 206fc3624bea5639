#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>

#include "fogmatch/analytic.hpp"
#include "fogmatch/channel.hpp"
#include "fogmatch/codes.hpp"
#include "fogmatch/graph.hpp"
#include "fogmatch/matching.hpp"
#include "fogmatch/simulator.hpp"

namespace py = pybind11;
using namespace fogmatch;

namespace {

BipartiteInstance instance_from_edges(int users, int aps, int rb_per_ap, std::vector<int> demand,
                                      const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::uint8_t> adj(static_cast<size_t>(users) * aps, 0);
    for (const auto& [m, n] : edges) adj[static_cast<size_t>(m) * aps + n] = 1;
    return make_instance(users, aps, rb_per_ap, std::move(demand), std::move(adj));
}

py::dict solution_dict(const MatchingSolution& sol) {
    py::dict d;
    d["cardinality"] = sol.cardinality;
    d["matched"] = sol.matched;
    d["saturated"] = std::vector<bool>(sol.saturated.begin(), sol.saturated.end());
    d["selected"] = sol.selected;
    d["fillers"] = sol.fillers;
    d["shortfall"] = sol.shortfall;
    d["converged"] = sol.converged;
    d["iterations"] = sol.iterations;
    return d;
}

} // namespace

PYBIND11_MODULE(_fogmatch, m) {
    m.doc() = "Coded-caching outage toolkit: channels, b-matching, outage analysis";

    m.def(
        "mutual_information",
        [](double re, double im, double gamma) {
            return mutual_information(std::complex<double>(re, im), gamma);
        },
        py::arg("re"), py::arg("im"), py::arg("gamma"));
    m.def("ap_outage_prob", &ap_outage_prob, py::arg("alpha_star"), py::arg("gamma"));
    m.def(
        "sample_gain_powers",
        [](int users, int aps, std::uint64_t seed, std::uint64_t trial) {
            const GainMatrix g = sample_gains(users, aps, seed, trial);
            std::vector<double> p(g.h.size());
            for (size_t i = 0; i < g.h.size(); ++i) p[i] = std::norm(g.h[i]);
            return p;
        },
        py::arg("users"), py::arg("aps"), py::arg("seed"), py::arg("trial") = 0);

    m.def("phi1", &phi1, py::arg("users"), py::arg("aps"), py::arg("demand_sorted"), py::arg("rank"));
    m.def("phi2", &phi2, py::arg("users"), py::arg("rb_per_ap"), py::arg("demand_sum"));

    m.def(
        "solve_exact",
        [](int users, int aps, int rb_per_ap, std::vector<int> demand,
           const std::vector<std::pair<int, int>>& edges) {
            return solution_dict(
                solve_exact(instance_from_edges(users, aps, rb_per_ap, std::move(demand), edges)));
        },
        py::arg("users"), py::arg("aps"), py::arg("rb_per_ap"), py::arg("demand"), py::arg("edges"));
    m.def(
        "solve_message_passing",
        [](int users, int aps, int rb_per_ap, std::vector<int> demand,
           const std::vector<std::pair<int, int>>& edges, std::uint64_t seed) {
            const BipartiteInstance inst =
                instance_from_edges(users, aps, rb_per_ap, std::move(demand), edges);
            FairnessPolicy pol;
            pol.seed = seed;
            MatchingSolution sol = solve_message_passing(inst, pol);
            sol = complete_fairness_partial(sol, inst, pol);
            return solution_dict(sol);
        },
        py::arg("users"), py::arg("aps"), py::arg("rb_per_ap"), py::arg("demand"), py::arg("edges"),
        py::arg("seed") = 0);

    m.def(
        "msr_params",
        [](double R, int K, int D) {
            const StoragePoint p = msr_params(R, K, D);
            return py::make_tuple(p.alpha, p.beta);
        },
        py::arg("R"), py::arg("K"), py::arg("D"));
    m.def(
        "mbr_params",
        [](double R, int K, int D) {
            const StoragePoint p = mbr_params(R, K, D);
            return py::make_tuple(p.alpha, p.beta);
        },
        py::arg("R"), py::arg("K"), py::arg("D"));
    m.def(
        "optimal_k", [](const std::vector<double>& sizes, int N) { return optimal_k(sizes, N); },
        py::arg("content_sizes"), py::arg("aps"));
    m.def(
        "dmr_optimal_code",
        [](const std::vector<double>& sizes, int N) {
            py::list out;
            for (const CodeParameters& c : dmr_optimal_code(sizes, N)) {
                py::dict d;
                d["n"] = c.n;
                d["k"] = c.k;
                d["d"] = c.d ? py::cast(*c.d) : py::none();
                d["alpha"] = c.alpha;
                d["beta"] = c.beta ? py::cast(*c.beta) : py::none();
                out.append(d);
            }
            return out;
        },
        py::arg("content_sizes"), py::arg("aps"));

    m.def("upper_incomplete_gamma", &upper_inc_gamma, py::arg("order"), py::arg("argument"));
    m.def(
        "cgf",
        [](double lam, int K, double k, double alpha_star, double gamma) {
            return cgf(lam, SaddleConfig{K, k, alpha_star, gamma});
        },
        py::arg("lam"), py::arg("K"), py::arg("k"), py::arg("alpha_star"), py::arg("gamma"));
    m.def(
        "conditional_upper_bound",
        [](int K, double k, double R, double gamma) {
            const BoundResult b = conditional_upper_bound(SaddleConfig{K, k, R / K, gamma}, R);
            return py::make_tuple(b.value, b.clamped);
        },
        py::arg("K"), py::arg("k"), py::arg("R"), py::arg("gamma"));
    m.def("conditional_outage_exact", &conditional_outage_exact, py::arg("n_above"),
          py::arg("n_below"), py::arg("alpha_star"), py::arg("gamma"), py::arg("R"));
    m.def(
        "content_outage_high_snr",
        [](int M, int N, int L, int K, double eta, double R, double gamma) {
            return content_outage_high_snr(M, N, L, K, eta, R, gamma).value;
        },
        py::arg("M"), py::arg("N"), py::arg("L"), py::arg("K"), py::arg("eta"), py::arg("R"),
        py::arg("gamma"));
    m.def("content_outage_low_snr", &content_outage_low_snr, py::arg("N"), py::arg("K"),
          py::arg("R"), py::arg("gamma"));
    m.def(
        "conditional_dmt", [](int K, double k, double r) { return conditional_dmt(K, k, r).d; },
        py::arg("K"), py::arg("k"), py::arg("r"));
    m.def("dmr", &dmr, py::arg("M"), py::arg("N"), py::arg("L"), py::arg("K"), py::arg("eta"),
          py::arg("r"));

    m.def(
        "simulate_conditional_outage",
        [](int K, int k, double R, double gamma, long long trials, std::uint64_t seed) {
            const ConditionalEstimate e = simulate_conditional_outage(K, k, R, gamma, trials, seed);
            py::dict d;
            d["p_hat"] = e.p_hat;
            d["ci_lo"] = e.ci_lo;
            d["ci_hi"] = e.ci_hi;
            d["trials"] = e.trials;
            d["events"] = e.events;
            return d;
        },
        py::arg("K"), py::arg("k"), py::arg("R"), py::arg("gamma"), py::arg("trials"),
        py::arg("seed") = 0);

    m.def(
        "simulate_content_outage",
        [](int M, int N, int L, int K, double rate, double mux, std::vector<double> snr_db,
           long long trials_cap, std::uint64_t seed, const std::string& estimator) {
            ExperimentConfig cfg;
            cfg.M = M;
            cfg.N = N;
            cfg.L = L;
            cfg.K.assign(M, K);
            if (mux > 0) {
                cfg.rate_mode = RateMode::dynamic_rate;
                cfg.mux.assign(M, mux);
            } else {
                cfg.rate_mode = RateMode::fixed_rate;
                cfg.rate.assign(M, rate);
            }
            cfg.snr_db = std::move(snr_db);
            cfg.trials_cap = trials_cap;
            cfg.trials_init = std::min<long long>(cfg.trials_init, trials_cap);
            cfg.seed = seed;
            cfg.estimator = estimator == "conditioned" ? Estimator::conditioned : Estimator::indicator;
            py::list out;
            for (const OutageCurve& c : simulate_content_outage(cfg)) {
                py::list pts;
                for (const OutagePoint& p : c.points) {
                    py::dict d;
                    d["gamma_db"] = p.gamma_db;
                    d["p_hat"] = p.p_hat;
                    d["ci_lo"] = p.ci_lo;
                    d["ci_hi"] = p.ci_hi;
                    d["trials"] = p.trials;
                    d["events"] = p.events;
                    pts.append(d);
                }
                py::dict cu;
                cu["user"] = c.user;
                cu["points"] = pts;
                out.append(cu);
            }
            return out;
        },
        py::arg("M"), py::arg("N"), py::arg("L"), py::arg("K"), py::arg("rate") = 0.0,
        py::arg("mux") = 0.0, py::arg("snr_db") = std::vector<double>{10.0},
        py::arg("trials_cap") = 100000, py::arg("seed") = 0, py::arg("estimator") = "indicator");
}
