#include <doctest.h>

#include <cmath>
#include <set>

#include "fogmatch/errors.hpp"
#include "fogmatch/graph.hpp"
#include "fogmatch/matching.hpp"
#include "fogmatch/rng.hpp"
#include "fogmatch/verify.hpp"

using namespace fogmatch;

namespace {

// The 4x3 running example: 7 edges, every user wants 2 APs, 3 RBs per AP.
BipartiteInstance small_example() {
    std::vector<std::uint8_t> adj(12, 0);
    auto set = [&](int m, int n) { adj[static_cast<size_t>(m) * 3 + n] = 1; };
    set(0, 0);
    set(0, 2);
    set(1, 0);
    set(2, 1);
    set(2, 2);
    set(3, 1);
    set(3, 2);
    return make_instance(4, 3, 3, {2, 2, 2, 2}, adj);
}

} // namespace

TEST_CASE("instance construction and validation") {
    QuantizedCsi csi;
    csi.users = 2;
    csi.aps = 3;
    csi.q = {1, 1, 1, 1, 1, 1};
    const BipartiteInstance inst = from_csi(csi, {2, 2}, 2);
    CHECK(inst.edge_count() == 6);
    CHECK(inst.demand_sum == 4);

    CHECK_THROWS_AS(from_csi(csi, {2, 2}, 1), InfeasibleDemand); // sum K > N*L

    QuantizedCsi narrow;
    narrow.users = 1;
    narrow.aps = 2;
    narrow.q = {1, 1};
    CHECK_THROWS_AS(from_csi(narrow, {3}, 5), InfeasibleDemand); // K_m > N

    const BipartiteInstance ex = small_example();
    CHECK(ex.edge_count() == 7);
    CHECK(ex.user_degree(1) == 1);
    CHECK(ex.ap_degree(2) == 3);
}

TEST_CASE("random bipartite sampling matches the edge law") {
    const BipartiteInstance full =
        sample_rbg(3, 4, 3, {2, 2, 2}, {0.0, 0.0, 0.0}, 1);
    CHECK(full.edge_count() == 12);
    const BipartiteInstance empty =
        sample_rbg(3, 4, 3, {2, 2, 2}, {1.0, 1.0, 1.0}, 1);
    CHECK(empty.edge_count() == 0);

    long long edges = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        const BipartiteInstance s = sample_rbg(1, 5, 5, {1}, {0.5}, 77, t);
        edges += s.edge_count();
    }
    const double n = 5.0 * trials;
    const double sigma = std::sqrt(0.25 * n);
    CHECK(std::fabs(edges - 0.5 * n) < 3.0 * sigma);
}

TEST_CASE("edge-count thresholds") {
    CHECK(phi1(10, 5, std::vector<int>(10, 2), 3) == 46);
    CHECK(phi1(1, 4, {1}, 1) == 0);
    CHECK(phi1(2, 3, {2, 2}, 1) == 4);
    CHECK_THROWS_AS(phi1(2, 3, {2, 2}, 3), RankOutOfRange);
    CHECK_THROWS_AS(phi1(2, 3, {3, 2}, 1), DomainError); // unsorted

    CHECK(phi2(10, 4, 20) == 43);
    CHECK(phi2(6, 6, 9) == 8); // M == L collapses the first term
    CHECK(phi2(6, 3, 12) == 20);

    CHECK(branch_threshold(10, 4, 20, 2, 0.5) == doctest::Approx((43.0 - 1.0) / 9.0));
}

TEST_CASE("demand ordering is stable") {
    const std::vector<int> K{3, 1, 2, 1, 3};
    const auto idx = order_users_by_demand(K);
    CHECK(idx == std::vector<int>{1, 3, 2, 0, 4});
}

TEST_CASE("edge list serialization round-trips") {
    CounterRng rng(505);
    for (int i = 0; i < 50; ++i) {
        const BipartiteInstance inst = random_instance(rng, 6, 6);
        const BipartiteInstance back = parse_instance(serialize_instance(inst));
        CHECK(back.users == inst.users);
        CHECK(back.aps == inst.aps);
        CHECK(back.rb_per_ap == inst.rb_per_ap);
        CHECK(back.demand == inst.demand);
        CHECK(back.adj == inst.adj);
    }
}

TEST_CASE("flow oracle agrees with the exhaustive min formula") {
    CounterRng rng(606);
    for (int i = 0; i < 80; ++i) {
        BipartiteInstance inst = random_instance(rng, 5, 5);
        while (static_cast<long long>(inst.users) * inst.aps > 20) inst = random_instance(rng, 5, 5);
        CHECK(solve_exact(inst).cardinality == min_cut_formula_bruteforce(inst));
    }
}

TEST_CASE("extremal edge count leaves exactly one user unsaturated") {
    // Homogeneous M=10, L=4, K=2 family: phi2 = 43 edges arranged as a full
    // block on ceil(K_sum/L)-1 APs plus K_sum - L*(that) - 1 extra edges.
    const int M = 10, L = 4, K = 2, N = 5;
    const long long k_sum = static_cast<long long>(M) * K;
    const int n0 = static_cast<int>((k_sum + L - 1) / L) - 1;
    const int extra = static_cast<int>(k_sum - static_cast<long long>(L) * n0 - 1);
    CounterRng rng(707);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::uint8_t> adj(static_cast<size_t>(M) * N, 0);
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < n0; ++n) adj[static_cast<size_t>(m) * N + n] = 1;
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < extra)
            chosen.insert(static_cast<int>(rng.below(M)));
        for (int m : chosen) adj[static_cast<size_t>(m) * N + n0] = 1;
        const BipartiteInstance inst = make_instance(M, N, L, std::vector<int>(M, K), adj);
        CHECK(inst.edge_count() == phi2(M, L, k_sum));
        const MatchingSolution sol = solve_exact(inst);
        CHECK(sol.cardinality == k_sum - 1);
        int unsat = 0;
        for (int m = 0; m < M; ++m)
            if (!sol.saturated[m]) ++unsat;
        CHECK(unsat == 1);
    }
}
