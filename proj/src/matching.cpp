#include "fogmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fogmatch/errors.hpp"
#include "fogmatch/rng.hpp"

namespace fogmatch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Jitter stream tags so the solver, fallback relabeling and completion draws
// never collide on the same counters.
constexpr std::uint64_t kTagJitter = 0x6a697474ull;
constexpr std::uint64_t kTagRelabel = 0x70657268ull;
constexpr std::uint64_t kTagComplete = 0x66696c6cull;

// Plain Dinic max flow; instances are small so no scaling needed.
struct FlowNet {
    struct Arc {
        int to;
        int rev;
        int cap;
    };
    std::vector<std::vector<Arc>> g;
    std::vector<int> level, it;

    explicit FlowNet(int n) : g(n), level(n), it(n) {}

    void add(int a, int b, int cap) {
        g[a].push_back({b, static_cast<int>(g[b].size()), cap});
        g[b].push_back({a, static_cast<int>(g[a].size()) - 1, 0});
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::vector<int> queue{s};
        level[s] = 0;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (const Arc& a : g[v])
                if (a.cap > 0 && level[a.to] < 0) {
                    level[a.to] = level[v] + 1;
                    queue.push_back(a.to);
                }
        }
        return level[t] >= 0;
    }

    int dfs(int v, int t, int f) {
        if (v == t) return f;
        for (int& i = it[v]; i < static_cast<int>(g[v].size()); ++i) {
            Arc& a = g[v][i];
            if (a.cap > 0 && level[a.to] == level[v] + 1) {
                int got = dfs(a.to, t, std::min(f, a.cap));
                if (got > 0) {
                    a.cap -= got;
                    g[a.to][a.rev].cap += got;
                    return got;
                }
            }
        }
        return 0;
    }

    int max_flow(int s, int t) {
        int flow = 0;
        while (bfs(s, t)) {
            std::fill(it.begin(), it.end(), 0);
            while (int f = dfs(s, t, std::numeric_limits<int>::max())) flow += f;
        }
        return flow;
    }
};

std::vector<int> seeded_permutation(int n, std::uint64_t seed, std::uint64_t tag, std::uint64_t salt) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(seed, tag, salt);
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

MatchingSolution solution_from_matrix(const BipartiteInstance& inst, std::vector<std::uint8_t> x) {
    MatchingSolution sol;
    sol.users = inst.users;
    sol.aps = inst.aps;
    sol.x = std::move(x);
    sol.matched.assign(inst.users, 0);
    sol.saturated.assign(inst.users, 0);
    sol.selected.assign(inst.users, {});
    sol.fillers.assign(inst.users, {});
    sol.shortfall.assign(inst.users, 0);
    for (int m = 0; m < inst.users; ++m) {
        for (int n = 0; n < inst.aps; ++n)
            if (sol.matched_edge(m, n)) {
                sol.selected[m].push_back(n);
                ++sol.matched[m];
                ++sol.cardinality;
            }
        sol.saturated[m] = sol.matched[m] == inst.demand[m] ? 1 : 0;
        sol.shortfall[m] = inst.demand[m] - sol.matched[m];
    }
    return sol;
}

} // namespace

double selection(std::span<const double> values, int k) {
    if (k < 1 || k > static_cast<int>(values.size()))
        throw RankOutOfRange("selection: rank " + std::to_string(k) + " outside multiset of size " +
                             std::to_string(values.size()));
    std::vector<double> tmp(values.begin(), values.end());
    std::nth_element(tmp.begin(), tmp.begin() + (k - 1), tmp.end(), std::greater<>());
    return tmp[k - 1];
}

MatchingSolution solve_exact(const BipartiteInstance& inst) {
    const int M = inst.users, N = inst.aps;
    const int source = 0, sink = M + N + 1;
    FlowNet net(M + N + 2);
    for (int m = 0; m < M; ++m) net.add(source, 1 + m, inst.demand[m]);
    // Remember where each user->AP arc lives to read the matching back.
    std::vector<std::pair<int, int>> arc_of(static_cast<size_t>(M) * N, {-1, -1});
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n)
            if (inst.edge(m, n)) {
                arc_of[static_cast<size_t>(m) * N + n] = {1 + m, static_cast<int>(net.g[1 + m].size())};
                net.add(1 + m, 1 + M + n, 1);
            }
    for (int n = 0; n < N; ++n) net.add(1 + M + n, sink, inst.rb_per_ap);
    const int flow = net.max_flow(source, sink);

    std::vector<std::uint8_t> x(static_cast<size_t>(M) * N, 0);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n) {
            auto [v, i] = arc_of[static_cast<size_t>(m) * N + n];
            if (v >= 0 && net.g[v][i].cap == 0) x[static_cast<size_t>(m) * N + n] = 1;
        }
    MatchingSolution sol = solution_from_matrix(inst, std::move(x));
    sol.converged = true;
    sol.iterations = 0;
    if (sol.cardinality != flow) throw std::logic_error("solve_exact: inconsistent flow readback");
    return sol;
}

// ---------------------------------------------------------------------------
// Belief propagation
// ---------------------------------------------------------------------------

BpSolver::BpSolver(const BipartiteInstance& inst, const FairnessPolicy& policy)
    : inst_(inst), policy_(policy) {
    const int M = inst.users, N = inst.aps;
    total_ = M + N;
    const double cap = 1.0 / (2.0 * static_cast<double>(M) * N);
    jitter_scale_ = policy.jitter_scale > 0 ? policy.jitter_scale : 0.9 * cap;
    if (jitter_scale_ >= cap)
        throw DomainError("BpSolver: jitter_scale must stay below 1/(2*M*N)");
    int max_demand = 0;
    for (int k : inst.demand) max_demand = std::max(max_demand, k);
    cache_size_ = std::max(max_demand, inst.rb_per_ap) + 1;

    neighbors_.assign(total_, {});
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n)
            if (inst.edge(m, n)) {
                neighbors_[vertex_of_user(m)].push_back(vertex_of_ap(n));
                neighbors_[vertex_of_ap(n)].push_back(vertex_of_user(m));
            }

    weight_cache_.assign(total_, {});
    for (int v = 0; v < total_; ++v) {
        auto& wc = weight_cache_[v];
        wc = neighbors_[v];
        std::sort(wc.begin(), wc.end(), [&](int a, int b) { return weight_between(v, a) > weight_between(v, b); });
        if (static_cast<int>(wc.size()) > cache_size_) wc.resize(cache_size_);
    }

    for (int g = 0; g < 2; ++g) {
        price_b_[g].assign(total_, 0.0);
        price_b1_[g].assign(total_, 0.0);
        bits_[g].assign(2 * static_cast<size_t>(M) * N, 0);
    }
    nu_order_.resize(total_);
    std::iota(nu_order_.begin(), nu_order_.end(), 0);
    visit_stamp_.assign(total_, -1);
}

int BpSolver::bound(int v) const {
    return v < inst_.users ? inst_.demand[v] : inst_.rb_per_ap;
}

double BpSolver::edge_weight(int m, int n) const {
    CounterRng rng(policy_.seed, kTagJitter, static_cast<std::uint64_t>(m) * inst_.aps + n);
    return 1.0 + jitter_scale_ * rng.uniform_open();
}

double BpSolver::weight_between(int v, int u) const {
    return v < inst_.users ? edge_weight(v, u - inst_.users) : edge_weight(u, v - inst_.users);
}

size_t BpSolver::float_state_size() const {
    return price_b_[0].size() + price_b_[1].size() + price_b1_[0].size() + price_b1_[1].size();
}

double BpSolver::belief_prev(int holder, int other) const {
    // B(holder,other)^{t-1} = W - price charged by `other`; the (b+1)-th price
    // applies when `other` ranked this edge inside its own top-b last round.
    const int M = inst_.users, N = inst_.aps;
    size_t idx;
    if (other < M)
        idx = static_cast<size_t>(other) * N + (holder - M);
    else
        idx = static_cast<size_t>(M) * N + static_cast<size_t>(other - M) * M + holder;
    const bool member = bits_[cur_][idx] != 0;
    const double price = member ? price_b1_[cur_][other] : price_b_[cur_][other];
    return weight_between(holder, other) - price;
}

void BpSolver::rebuild_nu_order() {
    std::iota(nu_order_.begin(), nu_order_.end(), 0);
    const auto& p = price_b1_[cur_];
    std::stable_sort(nu_order_.begin(), nu_order_.end(), [&](int a, int b) { return p[a] < p[b]; });
}

std::pair<double, double> BpSolver::row_selections(int vertex, bool sufficient, int* inspected) const {
    const int b = bound(vertex);
    const auto& nbr = neighbors_[vertex];
    const int deg = static_cast<int>(nbr.size());
    // Running top-(b+1), descending.
    std::vector<double> top;
    top.reserve(b + 2);
    auto insert_belief = [&](double val) {
        auto pos = std::upper_bound(top.begin(), top.end(), val, std::greater<>());
        top.insert(pos, val);
        if (static_cast<int>(top.size()) > b + 1) top.pop_back();
    };
    int seen = 0;

    if (!sufficient) {
        for (int u : nbr) insert_belief(belief_prev(vertex, u));
        seen = deg;
    } else {
        const auto& wc = weight_cache_[vertex];
        ++scan_id_;
        const auto& nu_price = price_b1_[cur_];
        double last_w = kPosInf;     // weight frontier (descending walk)
        double last_nu_price = 0.0;  // floored prices are nonnegative
        auto visit = [&](int u) {
            if (visit_stamp_[u] == scan_id_) return;
            visit_stamp_[u] = scan_id_;
            ++seen;
            insert_belief(belief_prev(vertex, u));
        };
        auto can_exit = [&]() {
            if (seen >= deg) return true;
            if (static_cast<int>(top.size()) < b + 1) return false;
            return top.back() >= last_w - last_nu_price;
        };
        for (int k = 0; !can_exit(); ++k) {
            const bool in_wc = k < static_cast<int>(wc.size());
            const bool in_nu = k < total_;
            if (!in_wc && !in_nu) break;
            if (in_wc) {
                last_w = weight_between(vertex, wc[k]);
                visit(wc[k]);
                if (can_exit()) break;
            }
            if (in_nu) {
                const int u = nu_order_[k];
                last_nu_price = nu_price[u];
                const bool adjacent = (vertex < inst_.users) != (u < inst_.users) &&
                                      (vertex < inst_.users ? inst_.edge(vertex, u - inst_.users)
                                                            : inst_.edge(u, vertex - inst_.users));
                if (adjacent) visit(u);
            }
        }
    }
    if (inspected) *inspected = seen;
    const double sel_b = static_cast<int>(top.size()) >= b ? top[b - 1] : kNegInf;
    const double sel_b1 = static_cast<int>(top.size()) >= b + 1 ? top[b] : kNegInf;
    return {sel_b, sel_b1};
}

bool BpSolver::run(int max_iters, Trace* trace) {
    const int M = inst_.users, N = inst_.aps;
    for (iter_ = 1; iter_ <= max_iters; ++iter_) {
        const int next = 1 - cur_;
        rebuild_nu_order();
        for (int v = 0; v < total_; ++v) {
            int seen = 0;
            auto [sel_b, sel_b1] = row_selections(v, true, &seen);
            if (trace) {
                auto [fb, fb1] = row_selections(v, false);
                trace->push_back({iter_, v, sel_b, sel_b1, fb, fb1, seen,
                                  static_cast<int>(neighbors_[v].size())});
            }
            // At-most-b semantics: prices floor at zero (declining an edge is free).
            price_b_[next][v] = std::max(sel_b, 0.0);
            price_b1_[next][v] = std::max(sel_b1, 0.0);
            const double threshold = price_b_[next][v];
            for (int u : neighbors_[v]) {
                const size_t idx = v < M ? static_cast<size_t>(v) * N + (u - M)
                                         : static_cast<size_t>(M) * N + static_cast<size_t>(v - M) * M + u;
                bits_[next][idx] = belief_prev(v, u) >= threshold ? 1 : 0;
            }
        }
        cur_ = next;
        if (bits_[0] == bits_[1]) {
            // Accept the fixed point only if both endpoints agree and the
            // estimate is degree-feasible.
            bool ok = true;
            std::vector<int> ap_load(N, 0);
            for (int m = 0; m < M && ok; ++m) {
                int cnt = 0;
                for (int n = 0; n < N; ++n) {
                    if (!inst_.edge(m, n)) continue;
                    const bool bu = bits_[cur_][static_cast<size_t>(m) * N + n] != 0;
                    const bool ba =
                        bits_[cur_][static_cast<size_t>(M) * N + static_cast<size_t>(n) * M + m] != 0;
                    if (bu != ba) {
                        ok = false;
                        break;
                    }
                    if (bu) {
                        ++cnt;
                        ++ap_load[n];
                    }
                }
                if (cnt > inst_.demand[m]) ok = false;
            }
            for (int n = 0; n < N && ok; ++n)
                if (ap_load[n] > inst_.rb_per_ap) ok = false;
            if (ok) return true;
        }
    }
    return false;
}

MatchingSolution BpSolver::extract() const {
    const int M = inst_.users, N = inst_.aps;
    std::vector<std::uint8_t> x(static_cast<size_t>(M) * N, 0);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n) {
            if (!inst_.edge(m, n)) continue;
            const bool bu = bits_[cur_][static_cast<size_t>(m) * N + n] != 0;
            const bool ba = bits_[cur_][static_cast<size_t>(M) * N + static_cast<size_t>(n) * M + m] != 0;
            if (bu && ba) x[static_cast<size_t>(m) * N + n] = 1;
        }
    return solution_from_matrix(inst_, std::move(x));
}

namespace {

MatchingSolution solve_exact_relabeled(const BipartiteInstance& inst, std::uint64_t seed) {
    const int M = inst.users, N = inst.aps;
    const auto pu = seeded_permutation(M, seed, kTagRelabel, 1);
    const auto pa = seeded_permutation(N, seed, kTagRelabel, 2);
    std::vector<int> demand(M);
    std::vector<std::uint8_t> adj(static_cast<size_t>(M) * N);
    for (int m = 0; m < M; ++m) {
        demand[m] = inst.demand[pu[m]];
        for (int n = 0; n < N; ++n)
            adj[static_cast<size_t>(m) * N + n] = inst.edge(pu[m], pa[n]) ? 1 : 0;
    }
    const BipartiteInstance relabeled =
        make_instance(M, N, inst.rb_per_ap, std::move(demand), std::move(adj));
    const MatchingSolution inner = solve_exact(relabeled);
    std::vector<std::uint8_t> x(static_cast<size_t>(M) * N, 0);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n)
            if (inner.matched_edge(m, n)) x[static_cast<size_t>(pu[m]) * N + pa[n]] = 1;
    return solution_from_matrix(inst, std::move(x));
}

} // namespace

MatchingSolution solve_message_passing(const BipartiteInstance& inst, const FairnessPolicy& policy,
                                       int max_iters, BpSolver::Trace* trace) {
    BpSolver solver(inst, policy);
    const int cap = max_iters > 0 ? max_iters : 100 * (inst.users + inst.aps);
    if (solver.run(cap, trace)) {
        MatchingSolution sol = solver.extract();
        sol.converged = true;
        sol.iterations = solver.iterations();
        return sol;
    }
    MatchingSolution sol = solve_exact_relabeled(inst, policy.seed);
    sol.converged = false;
    sol.iterations = cap;
    return sol;
}

// ---------------------------------------------------------------------------
// Degree-exact assignment (min-cost flow)
// ---------------------------------------------------------------------------

namespace {

// Successive shortest paths with potentials on the tiny assignment network.
struct CostFlowNet {
    struct Arc {
        int to, rev, cap;
        double cost;
    };
    std::vector<std::vector<Arc>> g;
    explicit CostFlowNet(int n) : g(n) {}
    void add(int a, int b, int cap, double cost) {
        g[a].push_back({b, static_cast<int>(g[b].size()), cap, cost});
        g[b].push_back({a, static_cast<int>(g[a].size()) - 1, 0, -cost});
    }
    // Sends up to `want` units from s to t; costs must be nonnegative.
    int run(int s, int t, int want) {
        const int n = static_cast<int>(g.size());
        std::vector<double> potential(n, 0.0), dist(n);
        std::vector<int> prev_v(n), prev_a(n);
        int sent = 0;
        while (sent < want) {
            std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
            std::vector<std::uint8_t> done(n, 0);
            dist[s] = 0;
            while (true) {
                int v = -1;
                for (int i = 0; i < n; ++i)
                    if (!done[i] && std::isfinite(dist[i]) && (v < 0 || dist[i] < dist[v])) v = i;
                if (v < 0) break;
                done[v] = 1;
                for (int ai = 0; ai < static_cast<int>(g[v].size()); ++ai) {
                    const Arc& a = g[v][ai];
                    if (a.cap <= 0) continue;
                    const double nd = dist[v] + a.cost + potential[v] - potential[a.to];
                    if (nd < dist[a.to] - 1e-15) {
                        dist[a.to] = nd;
                        prev_v[a.to] = v;
                        prev_a[a.to] = ai;
                    }
                }
            }
            if (!std::isfinite(dist[t])) break;
            for (int i = 0; i < n; ++i)
                if (std::isfinite(dist[i])) potential[i] += dist[i];
            for (int v = t; v != s; v = prev_v[v]) {
                Arc& a = g[prev_v[v]][prev_a[v]];
                --a.cap;
                ++g[v][a.rev].cap;
            }
            ++sent;
        }
        return sent;
    }
};

} // namespace

MatchingSolution solve_assignment(const BipartiteInstance& inst, const FairnessPolicy& policy) {
    const int M = inst.users, N = inst.aps;
    BpSolver weights(inst, policy); // reuse the seeded jitter definition
    const int source = 0, sink = M + N + 1;
    CostFlowNet net(M + N + 2);
    long long want = 0;
    for (int m = 0; m < M; ++m) {
        net.add(source, 1 + m, inst.demand[m], 0.0);
        want += inst.demand[m];
    }
    // Every (user, AP) pair is assignable; non-outage pairs are strictly
    // cheaper by ~1, so the flow first maximizes the matched edge count.
    std::vector<std::pair<int, int>> arc_of(static_cast<size_t>(M) * N);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n) {
            const double w = (inst.edge(m, n) ? 1.0 : 0.0) + weights.edge_weight(m, n) - 1.0;
            arc_of[static_cast<size_t>(m) * N + n] = {1 + m, static_cast<int>(net.g[1 + m].size())};
            net.add(1 + m, 1 + M + n, 1, 2.0 - w);
        }
    for (int n = 0; n < N; ++n) net.add(1 + M + n, sink, inst.rb_per_ap, 0.0);
    const int sent = net.run(source, sink, static_cast<int>(want));
    if (sent != want)
        throw CompletionInfeasible("solve_assignment: demand not satisfiable (requires sum K <= N*L)");

    std::vector<std::uint8_t> x(static_cast<size_t>(M) * N, 0);
    MatchingSolution sol;
    sol.users = M;
    sol.aps = N;
    sol.matched.assign(M, 0);
    sol.saturated.assign(M, 0);
    sol.selected.assign(M, {});
    sol.fillers.assign(M, {});
    sol.shortfall.assign(M, 0);
    sol.converged = true;
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < N; ++n) {
            auto [v, i] = arc_of[static_cast<size_t>(m) * N + n];
            if (net.g[v][i].cap != 0) continue; // unused pair
            sol.selected[m].push_back(n);
            if (inst.edge(m, n)) {
                x[static_cast<size_t>(m) * N + n] = 1;
                ++sol.matched[m];
                ++sol.cardinality;
            } else {
                sol.fillers[m].push_back(n);
            }
        }
        sol.saturated[m] = sol.matched[m] == inst.demand[m] ? 1 : 0;
    }
    sol.x = std::move(x);
    return sol;
}

// ---------------------------------------------------------------------------
// Fairness completion
// ---------------------------------------------------------------------------

namespace {

MatchingSolution complete_impl(const MatchingSolution& sol, const BipartiteInstance& inst,
                               const FairnessPolicy& policy) {
    MatchingSolution out = solution_from_matrix(inst, sol.x);
    out.converged = sol.converged;
    out.iterations = sol.iterations;
    const int M = inst.users, N = inst.aps;
    std::vector<int> load(N, 0);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n)
            if (out.matched_edge(m, n)) ++load[n];

    CounterRng rng(policy.seed, kTagComplete, 0);
    const auto order = seeded_permutation(M, policy.seed, kTagComplete, 1);
    bool stuck = false;
    for (int m : order) {
        int need = inst.demand[m] - static_cast<int>(out.selected[m].size());
        std::vector<std::uint8_t> mine(N, 0);
        for (int n : out.selected[m]) mine[n] = 1;
        while (need > 0) {
            std::vector<int> eligible;
            for (int n = 0; n < N; ++n)
                if (!mine[n] && load[n] < inst.rb_per_ap) eligible.push_back(n);
            if (eligible.empty()) {
                stuck = true;
                break;
            }
            const int pick = eligible[rng.below(eligible.size())];
            out.selected[m].push_back(pick);
            out.fillers[m].push_back(pick);
            mine[pick] = 1;
            ++load[pick];
            --need;
        }
    }

    if (stuck) {
        // Greedy left somebody short; redo the completion as a max flow so no
        // assignable filler is wasted.
        out = solution_from_matrix(inst, sol.x);
        out.converged = sol.converged;
        out.iterations = sol.iterations;
        std::fill(load.begin(), load.end(), 0);
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < N; ++n)
                if (out.matched_edge(m, n)) ++load[n];
        const int source = 0, sink = M + N + 1;
        FlowNet net(M + N + 2);
        for (int m = 0; m < M; ++m)
            net.add(source, 1 + m, inst.demand[m] - static_cast<int>(out.selected[m].size()));
        std::vector<std::pair<int, int>> arc_of(static_cast<size_t>(M) * N, {-1, -1});
        const auto ap_order = seeded_permutation(N, policy.seed, kTagComplete, 2);
        for (int m = 0; m < M; ++m) {
            std::vector<std::uint8_t> mine(N, 0);
            for (int n : out.selected[m]) mine[n] = 1;
            for (int ni = 0; ni < N; ++ni) {
                const int n = ap_order[ni];
                if (mine[n] || load[n] >= inst.rb_per_ap) continue;
                arc_of[static_cast<size_t>(m) * N + n] = {1 + m, static_cast<int>(net.g[1 + m].size())};
                net.add(1 + m, 1 + M + n, 1);
            }
        }
        for (int n = 0; n < N; ++n) net.add(1 + M + n, sink, inst.rb_per_ap - load[n]);
        net.max_flow(source, sink);
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < N; ++n) {
                auto [v, i] = arc_of[static_cast<size_t>(m) * N + n];
                if (v >= 0 && net.g[v][i].cap == 0) {
                    out.selected[m].push_back(n);
                    out.fillers[m].push_back(n);
                }
            }
    }

    for (int m = 0; m < M; ++m)
        out.shortfall[m] = inst.demand[m] - static_cast<int>(out.selected[m].size());
    return out;
}

} // namespace

MatchingSolution complete_fairness_partial(const MatchingSolution& sol, const BipartiteInstance& inst,
                                           const FairnessPolicy& policy) {
    return complete_impl(sol, inst, policy);
}

MatchingSolution complete_fairness(const MatchingSolution& sol, const BipartiteInstance& inst,
                                   const FairnessPolicy& policy) {
    MatchingSolution out = complete_impl(sol, inst, policy);
    for (int m = 0; m < inst.users; ++m)
        if (out.shortfall[m] > 0)
            throw CompletionInfeasible("complete_fairness: user " + std::to_string(m + 1) +
                                       " short by " + std::to_string(out.shortfall[m]) + " APs");
    return out;
}

void validate_solution(const MatchingSolution& sol, const BipartiteInstance& inst, bool completed) {
    if (sol.users != inst.users || sol.aps != inst.aps)
        throw std::logic_error("solution/instance dimension mismatch");
    std::vector<int> load(inst.aps, 0);
    long long card = 0;
    for (int m = 0; m < inst.users; ++m) {
        int k = 0;
        for (int n = 0; n < inst.aps; ++n)
            if (sol.matched_edge(m, n)) {
                if (!inst.edge(m, n)) throw std::logic_error("matched edge absent from instance");
                ++k;
                ++load[n];
                ++card;
            }
        if (k != sol.matched[m]) throw std::logic_error("matched count mismatch");
        if (k > inst.demand[m]) throw std::logic_error("user degree bound violated");
        if ((sol.saturated[m] != 0) != (k == inst.demand[m]))
            throw std::logic_error("saturation flag mismatch");
    }
    if (card != sol.cardinality) throw std::logic_error("cardinality mismatch");
    for (int n = 0; n < inst.aps; ++n)
        if (load[n] > inst.rb_per_ap) throw std::logic_error("AP capacity violated by matching");
    if (!completed) return;

    std::fill(load.begin(), load.end(), 0);
    for (int m = 0; m < inst.users; ++m) {
        std::vector<std::uint8_t> seen(inst.aps, 0);
        for (int n : sol.selected[m]) {
            if (n < 0 || n >= inst.aps || seen[n]) throw std::logic_error("A* entries invalid");
            seen[n] = 1;
            ++load[n];
        }
        for (int n : sol.fillers[m])
            if (!seen[n] || sol.matched_edge(m, n)) throw std::logic_error("filler list invalid");
        if (static_cast<int>(sol.selected[m].size()) + sol.shortfall[m] != inst.demand[m])
            throw std::logic_error("completed A* size mismatch");
        if (sol.shortfall[m] < 0) throw std::logic_error("negative shortfall");
    }
    for (int n = 0; n < inst.aps; ++n)
        if (load[n] > inst.rb_per_ap) throw std::logic_error("AP capacity violated by completion");
}

std::string serialize_solution(const MatchingSolution& sol) {
    std::ostringstream os;
    for (int m = 0; m < sol.users; ++m) {
        os << (m + 1) << ':';
        std::vector<std::uint8_t> filler(sol.aps, 0);
        for (int n : sol.fillers[m]) filler[n] = 1;
        for (int n : sol.selected[m]) {
            os << ' ' << (n + 1);
            if (filler[n]) os << '*';
        }
        os << '\n';
    }
    return os.str();
}

} // namespace fogmatch
