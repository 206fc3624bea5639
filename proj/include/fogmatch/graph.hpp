#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fogmatch/channel.hpp"

namespace fogmatch {

// One snapshot of the user/AP bipartite graph: vertices are users and APs,
// an edge marks a non-outage pair, demand[m] is the user-side degree bound,
// rb_per_ap the AP-side bound. Immutable after construction.
struct BipartiteInstance {
    int users = 0;      // M
    int aps = 0;        // N
    int rb_per_ap = 0;  // L
    std::vector<int> demand;       // K_m
    std::vector<std::uint8_t> adj; // M x N, row-major
    long long demand_sum = 0;

    bool edge(int m, int n) const { return adj[static_cast<size_t>(m) * aps + n] != 0; }
    int user_degree(int m) const;
    int ap_degree(int n) const;
    long long edge_count() const;
};

// Validates demand <= N per user and sum(demand) <= N*L; throws InfeasibleDemand.
BipartiteInstance make_instance(int users, int aps, int rb_per_ap, std::vector<int> demand,
                                std::vector<std::uint8_t> adj);

// Edge (m,n) present iff the CSI bit is set.
BipartiteInstance from_csi(const QuantizedCsi& csi, std::vector<int> demand, int rb_per_ap);

// Edge (m,n) present independently with probability 1 - edge_absence[m].
BipartiteInstance sample_rbg(int users, int aps, int rb_per_ap, std::vector<int> demand,
                             const std::vector<double>& edge_absence, std::uint64_t seed,
                             std::uint64_t trial = 0);

// Stable order of user indices by ascending demand (original index breaks ties).
std::vector<int> order_users_by_demand(const std::vector<int>& demand);

// Largest edge count that still admits a maximum b-matching whose only
// unsaturated vertex sits in the ordered demand tail starting at `rank`
// (1-based): (M-1)N + K_{rank:M} - 1.
long long phi1(int users, int aps, const std::vector<int>& demand_sorted, int rank);

// Largest edge count that still admits a maximum b-matching with exactly one
// unsaturated user: (M-L)(ceil(K_sum/L)-1) + K_sum - 1.
long long phi2(int users, int rb_per_ap, long long demand_sum);

// Branch threshold (phi2 - eta*K_m)/(M-1) used by the outage approximations.
double branch_threshold(int users, int rb_per_ap, long long demand_sum, int demand_m, double eta);

// Plain-text edge list: header "M N L", then "K: k1 ... kM", then one "m n"
// per edge, 1-based.
std::string serialize_instance(const BipartiteInstance& inst);
BipartiteInstance parse_instance(std::istream& in);
BipartiteInstance parse_instance(const std::string& text);

} // namespace fogmatch
