#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fogmatch/graph.hpp"

namespace fogmatch {

// Knobs for the randomized tie-breaking that spreads degenerate optima
// uniformly across users. eta/epsilon are the target non-outage fraction and
// its probability; they are carried for reporting and the analytic branch
// rules, not enforced by the solver.
struct FairnessPolicy {
    double eta = 0.5;
    double epsilon = 0.5;
    double jitter_scale = 0.0; // 0 = auto: 0.45/(M*N), always < 1/(2*M*N)
    std::uint64_t seed = 0;
};

struct MatchingSolution {
    int users = 0;
    int aps = 0;
    std::vector<std::uint8_t> x;             // matched decision matrix, M x N
    std::vector<int> matched;                // k_m = matched non-outage APs
    std::vector<std::uint8_t> saturated;     // k_m == K_m
    std::vector<std::vector<int>> selected;  // A*_m (matched APs; fillers appended by completion)
    std::vector<std::vector<int>> fillers;   // the filler subset of selected per user
    std::vector<int> shortfall;              // K_m - |A*_m| after completion (0 when complete)
    long long cardinality = 0;               // total matched edges
    int iterations = 0;
    bool converged = false;

    bool matched_edge(int m, int n) const { return x[static_cast<size_t>(m) * aps + n] != 0; }
};

// k-th largest element of a multiset, duplicates counted; throws RankOutOfRange.
double selection(std::span<const double> values, int k);

// Maximum-cardinality b-matching by augmenting-path max flow
// (source->user cap K_m, user->AP cap 1 on edges, AP->sink cap L).
// Deterministic; used as the optimality oracle.
MatchingSolution solve_exact(const BipartiteInstance& inst);

// Belief-propagation solver state. Beliefs are never materialized: an edge
// belief is reconstructed from the opposite endpoint's previous prices and
// membership bit, so the floating working set stays linear in M+N (plus the
// fixed per-vertex weight cache). Update schedule is Jacobi: iteration t reads
// only generation t-1.
class BpSolver {
public:
    struct TraceEntry {
        int iteration = 0;
        int vertex = 0;
        double sel_b_fast = 0, sel_b1_fast = 0;  // from sufficient selection
        double sel_b_full = 0, sel_b1_full = 0;  // from the full row scan
        int inspected = 0;                       // entries examined by the fast path
        int degree = 0;
    };
    using Trace = std::vector<TraceEntry>;

    BpSolver(const BipartiteInstance& inst, const FairnessPolicy& policy);

    // Runs until the matching estimate is stable across two iterations (and
    // feasible/symmetric) or until max_iters. Returns true on convergence.
    bool run(int max_iters, Trace* trace = nullptr);

    MatchingSolution extract() const;

    int iterations() const { return iter_; }
    int vertex_count() const { return total_; }
    int cache_size() const { return cache_size_; }
    double edge_weight(int m, int n) const;

    // Negated b-th and (b+1)-th floored selections of the current generation.
    double mu(int v) const { return -price_b_[cur_][v]; }
    double nu(int v) const { return -price_b1_[cur_][v]; }

    // Raw row selections for `vertex` against the previous generation, via the
    // sufficient-selection walk or a full scan. Used by the equivalence tests.
    std::pair<double, double> row_selections(int vertex, bool sufficient, int* inspected = nullptr) const;

    // Doubles retained across iterations (price generations + nu cache).
    size_t float_state_size() const;

private:
    int vertex_of_user(int m) const { return m; }
    int vertex_of_ap(int n) const { return inst_.users + n; }
    int bound(int v) const;
    double weight_between(int v, int u) const;
    double belief_prev(int holder, int other) const; // B(holder,other) at gen prev
    void rebuild_nu_order();

    const BipartiteInstance& inst_;
    FairnessPolicy policy_;
    int total_ = 0;
    double jitter_scale_ = 0;
    int cache_size_ = 0;
    int iter_ = 0;
    int cur_ = 0; // current generation index (prices/bits), prev = 1 - cur_

    std::vector<std::vector<int>> neighbors_;    // vertex -> neighbor vertex ids
    std::vector<std::vector<int>> weight_cache_; // vertex -> top-c neighbors by weight desc
    std::vector<double> price_b_[2];             // floored b-th selection per vertex
    std::vector<double> price_b1_[2];            // floored (b+1)-th selection per vertex
    std::vector<std::uint8_t> bits_[2];          // directed membership estimate, 2*M*N
    std::vector<int> nu_order_;                  // vertices by ascending previous price_b1
    mutable std::vector<int> visit_stamp_;
    mutable int scan_id_ = 0;
};

// Algorithm entry point: jittered belief propagation with exact fallback after
// max_iters (0 = 100*(M+N)). The fallback solves a seed-relabeled copy via
// solve_exact so degenerate optima stay symmetric across users.
MatchingSolution solve_message_passing(const BipartiteInstance& inst, const FairnessPolicy& policy,
                                       int max_iters = 0, BpSolver::Trace* trace = nullptr);

// Degree-exact assignment: every user receives exactly K_m distinct APs
// (outage APs allowed), AP loads stay within L, and the number of non-outage
// assignments is maximized (min-cost flow over jittered weights, so degenerate
// optima split symmetrically across users). Feasible whenever sum K_m <= N*L.
// Used by the simulator to repair the rare samples where a maximum matching
// strands a short user without an eligible filler.
MatchingSolution solve_assignment(const BipartiteInstance& inst, const FairnessPolicy& policy);

// Fills every unsaturated user's A*_m up to K_m with APs drawn uniformly at
// random among those with residual capacity and not already assigned.
// Throws CompletionInfeasible when the residual capacity cannot supply a user.
MatchingSolution complete_fairness(const MatchingSolution& sol, const BipartiteInstance& inst,
                                   const FairnessPolicy& policy);

// Same, but tolerates infeasible corners: maximizes the number of assigned
// fillers (greedy, then a flow repair) and records per-user shortfalls.
MatchingSolution complete_fairness_partial(const MatchingSolution& sol, const BipartiteInstance& inst,
                                           const FairnessPolicy& policy);

// Degree-feasibility assertions: matched edges exist in the instance, AP loads
// stay within L, per-user counts are consistent; with completed=true also
// |A*_m| + shortfall == K_m and fillers are distinct unmatched APs.
// Throws std::logic_error on any violation.
void validate_solution(const MatchingSolution& sol, const BipartiteInstance& inst, bool completed);

// "m: n1 n2 ... nK" per user, 1-based, fillers marked with '*'.
std::string serialize_solution(const MatchingSolution& sol);

} // namespace fogmatch
