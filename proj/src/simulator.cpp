#include "fogmatch/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "fogmatch/analytic.hpp"
#include "fogmatch/channel.hpp"
#include "fogmatch/errors.hpp"
#include "fogmatch/rng.hpp"

namespace fogmatch {

namespace {

constexpr std::uint64_t kTagGain = 0x6761696eull;
constexpr std::uint64_t kTagPolicy = 0x706f6c73ull;
constexpr std::uint64_t kTagConditional = 0x636f6e64ull;

// Reusable unit-augmentation max flow deciding whether every user can be
// saturated on the current CSI sample (source->user K_m, user->AP 1, AP->sink L).
struct SaturationChecker {
    int M = 0, N = 0;
    std::vector<int> match_count;  // per user
    std::vector<int> load;         // per AP
    std::vector<int> mate_scan;    // BFS parent per AP
    std::vector<int> user_parent;  // BFS parent per user (AP id it was reached from)
    std::vector<int> queue;

    void reset(int users, int aps) {
        M = users;
        N = aps;
        match_count.assign(M, 0);
        load.assign(N, 0);
    }

    // edges[m*N+n] != 0 marks an edge; assign[m*N+n] is the selected matrix.
    long long max_saturating_flow(const std::vector<std::uint8_t>& edges, const std::vector<int>& K,
                                  int L, std::vector<std::uint8_t>& assign) {
        std::fill(assign.begin(), assign.end(), 0);
        std::fill(match_count.begin(), match_count.end(), 0);
        std::fill(load.begin(), load.end(), 0);
        long long flow = 0;
        for (int m0 = 0; m0 < M; ++m0) {
            while (match_count[m0] < K[m0]) {
                if (!augment(m0, edges, L, assign)) break;
                ++match_count[m0];
                ++flow;
            }
        }
        return flow;
    }

private:
    bool augment(int m0, const std::vector<std::uint8_t>& edges, int L,
                 std::vector<std::uint8_t>& assign) {
        user_parent.assign(M, -2);
        mate_scan.assign(N, -2);
        queue.clear();
        queue.push_back(m0);
        user_parent[m0] = -1;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            const int m = queue[qi];
            for (int n = 0; n < N; ++n) {
                const size_t idx = static_cast<size_t>(m) * N + n;
                if (!edges[idx] || assign[idx] || mate_scan[n] != -2) continue;
                mate_scan[n] = m;
                if (load[n] < L) {
                    // Augment along parents.
                    int ap = n;
                    int user = m;
                    ++load[n];
                    while (true) {
                        assign[static_cast<size_t>(user) * N + ap] = 1;
                        const int prev_ap = user_parent[user];
                        if (prev_ap < 0) break;
                        assign[static_cast<size_t>(user) * N + prev_ap] = 0;
                        ap = prev_ap;
                        user = mate_scan[prev_ap];
                    }
                    return true;
                }
                // AP full: try to reroute one of its current users.
                for (int m2 = 0; m2 < M; ++m2) {
                    if (!assign[static_cast<size_t>(m2) * N + n] || user_parent[m2] != -2) continue;
                    user_parent[m2] = n;
                    queue.push_back(m2);
                }
            }
        }
        return false;
    }
};

struct PointAccum {
    std::vector<double> value_sum;
    std::vector<double> value_sq;
    std::vector<long long> events;
    long long shortfalls = 0;

    void init(int users) {
        value_sum.assign(users, 0.0);
        value_sq.assign(users, 0.0);
        events.assign(users, 0);
        shortfalls = 0;
    }
    void merge(const PointAccum& o) {
        for (size_t i = 0; i < value_sum.size(); ++i) {
            value_sum[i] += o.value_sum[i];
            value_sq[i] += o.value_sq[i];
            events[i] += o.events[i];
        }
        shortfalls += o.shortfalls;
    }
};

struct PointSetup {
    double gamma = 0;
    int gidx = 0;
    std::vector<double> alpha;      // quantizer threshold per user (<=0 marks inactive)
    std::vector<double> rate_eff;   // sum test threshold K_m * alpha_m
    std::vector<double> q;          // per-user non-outage probability
    std::vector<std::uint8_t> active;
};

double keyed_uniform_open(std::uint64_t seed, std::uint64_t s0, std::uint64_t s1, std::uint64_t s2) {
    CounterRng g(seed, s0, s1, s2);
    return g.uniform_open();
}

// Worker over a contiguous trial block; all scratch is local so blocks can run
// on any thread with identical results.
struct TrialWorker {
    const ExperimentConfig* cfg = nullptr;
    const PointSetup* pt = nullptr;
    SaturationChecker sat;
    std::vector<std::uint8_t> bits;
    std::vector<std::uint8_t> assign;
    std::map<std::pair<int, int>, double> pcon_cache; // (n_above, n_below) -> exact p_con

    void run(long long t0, long long t1, PointAccum& acc) {
        const int M = cfg->M, N = cfg->N;
        bits.assign(static_cast<size_t>(M) * N, 0);
        assign.assign(static_cast<size_t>(M) * N, 0);
        sat.reset(M, N);
        long long want = 0;
        for (int m = 0; m < M; ++m) want += cfg->K[m];

        for (long long t = t0; t < t1; ++t) {
            bool complete = true;
            for (int m = 0; m < M; ++m) {
                const double qm = pt->q[m];
                for (int n = 0; n < N; ++n) {
                    const size_t idx = static_cast<size_t>(m) * N + n;
                    const double u = keyed_uniform_open(cfg->seed, kTagGain,
                                                        static_cast<std::uint64_t>(t), idx);
                    const bool b = u <= qm;
                    bits[idx] = b ? 1 : 0;
                    complete = complete && b;
                }
            }
            if (complete) continue; // perfect matching exists: nobody is in outage
            const long long flow = sat.max_saturating_flow(bits, cfg->K, cfg->L, assign);
            if (flow == want) continue;
            rare_branch(t, acc);
        }
    }

    double info_value(long long t, int m, int n) const {
        const size_t idx = static_cast<size_t>(m) * cfg->N + n;
        const double u =
            keyed_uniform_open(cfg->seed, kTagGain, static_cast<std::uint64_t>(t), idx);
        return std::log1p(-std::log(u) * pt->gamma);
    }

    void rare_branch(long long t, PointAccum& acc) {
        const int M = cfg->M, N = cfg->N;
        BipartiteInstance inst = make_instance(M, N, cfg->L, cfg->K, bits);
        FairnessPolicy pol = cfg->policy;
        pol.seed = CounterRng(cfg->seed, kTagPolicy, 0, static_cast<std::uint64_t>(t)).next_u64();
        const MatchingSolution sol = solve_message_passing(inst, pol);
        MatchingSolution com = complete_fairness_partial(sol, inst, pol);
        bool short_user = false;
        for (int m = 0; m < M; ++m)
            if (com.shortfall[m] > 0) {
                short_user = true;
                ++acc.shortfalls;
            }
        if (short_user) {
            // A maximum matching can strand a user whose only spare RB sits on
            // an AP it already holds; the degree-exact assignment cannot.
            com = solve_assignment(inst, pol);
        }
        validate_solution(com, inst, true);
        for (int m = 0; m < M; ++m) {
            if (!pt->active[m]) continue;
            const int n_above = com.matched[m];
            const int n_below = static_cast<int>(com.selected[m].size()) - n_above;
            if (n_above >= cfg->K[m]) continue; // saturated: sum >= K*alpha by construction
            double value = 0;
            if (cfg->estimator == Estimator::indicator) {
                double sum = 0;
                for (int n : com.selected[m]) sum += info_value(t, m, n);
                value = sum < pt->rate_eff[m] ? 1.0 : 0.0;
            } else {
                const auto key = std::make_pair(n_above, n_below);
                auto it = pcon_cache.find(key);
                if (it == pcon_cache.end()) {
                    const double v = conditional_outage_exact(n_above, n_below, pt->alpha[m], pt->gamma,
                                                              pt->rate_eff[m]);
                    it = pcon_cache.emplace(key, v).first;
                }
                value = it->second;
            }
            if (value > 0) {
                acc.value_sum[m] += value;
                acc.value_sq[m] += value * value;
                ++acc.events[m];
            }
        }
    }
};

} // namespace

void ExperimentConfig::validate() const {
    if (M < 1 || N < 1 || L < 1) throw InvalidDimensions("config: M, N, L must be >= 1");
    if (static_cast<int>(K.size()) != M) throw InvalidDimensions("config: one K per user required");
    long long sum = 0;
    for (int k : K) {
        if (k < 1 || k > N) throw InfeasibleDemand("config: K_m must lie in [1, N]");
        sum += k;
    }
    if (sum > static_cast<long long>(N) * L) throw InfeasibleDemand("config: sum K_m exceeds N*L");
    if (snr_db.empty()) throw InvalidDimensions("config: empty SNR grid");
    for (size_t i = 1; i < snr_db.size(); ++i)
        if (!(snr_db[i] > snr_db[i - 1])) throw InvalidDimensions("config: SNR grid must increase");
    const bool has_rate = !rate.empty(), has_mux = !mux.empty();
    if (has_rate == has_mux)
        throw InvalidDimensions("config: exactly one of fixed rates / multiplexing gains required");
    if (rate_mode == RateMode::fixed_rate && static_cast<int>(rate.size()) != M)
        throw InvalidDimensions("config: one rate per user required");
    if (rate_mode == RateMode::dynamic_rate && static_cast<int>(mux.size()) != M)
        throw InvalidDimensions("config: one multiplexing gain per user required");
    if (trials_init < 1 || trials_cap < trials_init)
        throw InvalidDimensions("config: bad trial budget");
    if (!(alpha_scale > 0)) throw DomainError("config: alpha_scale must be > 0");
}

std::vector<OutageCurve> simulate_content_outage(const ExperimentConfig& cfg) {
    cfg.validate();
    const int M = cfg.M;
    int threads = cfg.threads > 0 ? cfg.threads
                                  : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    constexpr long long kChunk = 1 << 15;

    std::vector<OutageCurve> curves(M);
    for (int m = 0; m < M; ++m) curves[m].user = m;

    for (size_t gi = 0; gi < cfg.snr_db.size(); ++gi) {
        PointSetup pt;
        pt.gidx = static_cast<int>(gi);
        pt.gamma = db_to_linear(cfg.snr_db[gi]);
        pt.alpha.resize(M);
        pt.rate_eff.resize(M);
        pt.q.resize(M);
        pt.active.resize(M);
        for (int m = 0; m < M; ++m) {
            const double R = cfg.rate_mode == RateMode::fixed_rate ? cfg.rate[m]
                                                                   : cfg.mux[m] * std::log(pt.gamma);
            const double alpha = cfg.alpha_scale * R / cfg.K[m];
            pt.active[m] = alpha > 0 ? 1 : 0;
            pt.alpha[m] = alpha;
            pt.rate_eff[m] = cfg.K[m] * alpha;
            pt.q[m] = alpha > 0 ? 1.0 - ap_outage_prob(alpha, pt.gamma) : 1.0;
        }

        PointAccum total;
        total.init(M);
        long long done = 0;
        long long batch = std::min(cfg.trials_init, cfg.trials_cap);
        bool any_active = false;
        for (int m = 0; m < M; ++m) any_active = any_active || pt.active[m];

        while (any_active && batch > 0) {
            // Fixed chunk grid; thread j takes chunks j, j+T, ... and results
            // merge in chunk order, so the outcome is schedule-independent.
            const long long n_chunks = (batch + kChunk - 1) / kChunk;
            std::vector<PointAccum> chunk_acc(static_cast<size_t>(n_chunks));
            auto work = [&](int tid) {
                TrialWorker w;
                w.cfg = &cfg;
                w.pt = &pt;
                for (long long c = tid; c < n_chunks; c += threads) {
                    chunk_acc[c].init(M);
                    const long long t0 = done + c * kChunk;
                    const long long t1 = std::min(done + batch, t0 + kChunk);
                    w.run(t0, t1, chunk_acc[c]);
                }
            };
            if (threads == 1 || n_chunks == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (int j = 0; j < threads; ++j) pool.emplace_back(work, j);
                for (auto& th : pool) th.join();
            }
            for (const auto& ca : chunk_acc) total.merge(ca);
            done += batch;

            long long min_events = std::numeric_limits<long long>::max();
            for (int m = 0; m < M; ++m)
                if (pt.active[m]) min_events = std::min(min_events, total.events[m]);
            if (min_events >= cfg.min_events || done >= cfg.trials_cap) break;
            batch = std::min(done, cfg.trials_cap - done);
        }
        if (!any_active) done = std::min(cfg.trials_init, cfg.trials_cap);

        for (int m = 0; m < M; ++m) {
            OutagePoint op;
            op.gamma_db = cfg.snr_db[gi];
            op.gamma = pt.gamma;
            op.trials = done;
            op.events = total.events[m];
            op.shortfall_users = total.shortfalls;
            const double n = static_cast<double>(done);
            op.p_hat = done > 0 ? total.value_sum[m] / n : 0.0;
            if (cfg.estimator == Estimator::indicator) {
                wilson_interval(static_cast<long long>(std::llround(total.value_sum[m])), done,
                                op.ci_lo, op.ci_hi);
            } else {
                const double mean = op.p_hat;
                const double var =
                    done > 1 ? std::max(0.0, (total.value_sq[m] - n * mean * mean) / (n - 1.0)) : 0.0;
                const double half = 1.959963984540054 * std::sqrt(var / std::max(1.0, n));
                op.ci_lo = std::max(0.0, mean - half);
                op.ci_hi = std::min(1.0, mean + half);
            }
            curves[m].points.push_back(op);
        }
    }
    return curves;
}

double sample_conditional_above(double alpha_star, double gamma, double u01) {
    return std::log(std::exp(alpha_star) - gamma * std::log1p(-u01));
}

double sample_conditional_below(double alpha_star, double gamma, double u01) {
    const double log_q = -std::expm1(alpha_star) / gamma;
    const double p = -std::expm1(log_q);
    return std::log1p(-gamma * std::log1p(-p * u01));
}

ConditionalEstimate simulate_conditional_outage(int K, int k, double R, double gamma,
                                                long long trials, std::uint64_t seed) {
    if (K < 1 || k < 0 || k > K) throw DomainError("simulate_conditional_outage: need 0 <= k <= K");
    if (!(gamma > 0) || !(R > 0)) throw DomainError("simulate_conditional_outage: need gamma, R > 0");
    if (trials < 1) throw DomainError("simulate_conditional_outage: trials must be >= 1");
    const double alpha = R / K;
    long long events = 0;
    for (long long t = 0; t < trials; ++t) {
        CounterRng rng(seed, kTagConditional, static_cast<std::uint64_t>(t));
        double sum = 0;
        for (int i = 0; i < k; ++i) sum += sample_conditional_above(alpha, gamma, rng.uniform());
        for (int i = k; i < K; ++i) sum += sample_conditional_below(alpha, gamma, rng.uniform());
        if (sum < R) ++events;
    }
    ConditionalEstimate est;
    est.trials = trials;
    est.events = events;
    est.p_hat = static_cast<double>(events) / static_cast<double>(trials);
    wilson_interval(events, trials, est.ci_lo, est.ci_hi);
    return est;
}

void wilson_interval(long long successes, long long trials, double& lo, double& hi) {
    if (trials <= 0) {
        lo = 0;
        hi = 1;
        return;
    }
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

void estimate_exponent(OutageCurve& curve) {
    auto& pts = curve.points;
    std::vector<int> usable;
    for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i].p_hat > 0) usable.push_back(static_cast<int>(i));
    if (usable.size() < 3) throw InsufficientData("estimate_exponent: need >= 3 positive points");
    for (size_t ui = 0; ui < usable.size(); ++ui) {
        const int i = usable[ui];
        const int i_lo = usable[ui == 0 ? 0 : ui - 1];
        const int i_hi = usable[ui + 1 == usable.size() ? ui : ui + 1];
        if (i_lo == i_hi) continue;
        const double dlnp = std::log(pts[i_hi].p_hat) - std::log(pts[i_lo].p_hat);
        const double dlng = std::log(pts[i_hi].gamma) - std::log(pts[i_lo].gamma);
        pts[i].exponent = -dlnp / dlng;
        pts[i].exponent_valid = true;
    }
}

} // namespace fogmatch
