#include "fogmatch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fogmatch/errors.hpp"
#include "fogmatch/rng.hpp"

namespace fogmatch {

int BipartiteInstance::user_degree(int m) const {
    int d = 0;
    for (int n = 0; n < aps; ++n) d += edge(m, n) ? 1 : 0;
    return d;
}

int BipartiteInstance::ap_degree(int n) const {
    int d = 0;
    for (int m = 0; m < users; ++m) d += edge(m, n) ? 1 : 0;
    return d;
}

long long BipartiteInstance::edge_count() const {
    long long e = 0;
    for (auto b : adj) e += b ? 1 : 0;
    return e;
}

BipartiteInstance make_instance(int users, int aps, int rb_per_ap, std::vector<int> demand,
                                std::vector<std::uint8_t> adj) {
    if (users < 1 || aps < 1 || rb_per_ap < 1)
        throw InvalidDimensions("instance: users, aps, rb_per_ap must be >= 1");
    if (static_cast<int>(demand.size()) != users)
        throw InvalidDimensions("instance: one demand per user required");
    if (adj.size() != static_cast<size_t>(users) * aps)
        throw InvalidDimensions("instance: adjacency must be users x aps");
    long long sum = 0;
    for (int m = 0; m < users; ++m) {
        if (demand[m] < 1 || demand[m] > aps)
            throw InfeasibleDemand("instance: demand out of [1, aps] for user " + std::to_string(m + 1));
        sum += demand[m];
    }
    if (sum > static_cast<long long>(aps) * rb_per_ap)
        throw InfeasibleDemand("instance: total demand exceeds aps * rb_per_ap");
    for (auto& b : adj) b = b ? 1 : 0;
    BipartiteInstance inst;
    inst.users = users;
    inst.aps = aps;
    inst.rb_per_ap = rb_per_ap;
    inst.demand = std::move(demand);
    inst.adj = std::move(adj);
    inst.demand_sum = sum;
    return inst;
}

BipartiteInstance from_csi(const QuantizedCsi& csi, std::vector<int> demand, int rb_per_ap) {
    return make_instance(csi.users, csi.aps, rb_per_ap, std::move(demand), csi.q);
}

BipartiteInstance sample_rbg(int users, int aps, int rb_per_ap, std::vector<int> demand,
                             const std::vector<double>& edge_absence, std::uint64_t seed,
                             std::uint64_t trial) {
    if (static_cast<int>(edge_absence.size()) != users)
        throw InvalidDimensions("sample_rbg: one absence probability per user required");
    for (double p : edge_absence)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_rbg: probabilities must be in [0,1]");
    std::vector<std::uint8_t> adj(static_cast<size_t>(users) * aps);
    for (int m = 0; m < users; ++m)
        for (int n = 0; n < aps; ++n) {
            const std::uint64_t entry = static_cast<std::uint64_t>(m) * aps + n;
            adj[entry] = keyed_uniform(seed, trial, entry, 0x5b9) >= edge_absence[m] ? 1 : 0;
        }
    return make_instance(users, aps, rb_per_ap, std::move(demand), std::move(adj));
}

std::vector<int> order_users_by_demand(const std::vector<int>& demand) {
    std::vector<int> idx(demand.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return demand[a] < demand[b]; });
    return idx;
}

long long phi1(int users, int aps, const std::vector<int>& demand_sorted, int rank) {
    if (rank < 1 || rank > static_cast<int>(demand_sorted.size()))
        throw RankOutOfRange("phi1: rank out of range");
    for (size_t i = 1; i < demand_sorted.size(); ++i)
        if (demand_sorted[i - 1] > demand_sorted[i]) throw DomainError("phi1: demands must be sorted ascending");
    return static_cast<long long>(users - 1) * aps + demand_sorted[rank - 1] - 1;
}

long long phi2(int users, int rb_per_ap, long long demand_sum) {
    if (demand_sum < 1 || rb_per_ap < 1) throw DomainError("phi2: demand_sum and rb_per_ap must be >= 1");
    const long long ceil_ratio = (demand_sum + rb_per_ap - 1) / rb_per_ap;
    return static_cast<long long>(users - rb_per_ap) * (ceil_ratio - 1) + demand_sum - 1;
}

double branch_threshold(int users, int rb_per_ap, long long demand_sum, int demand_m, double eta) {
    if (users < 2) throw DomainError("branch_threshold: needs at least two users");
    return (static_cast<double>(phi2(users, rb_per_ap, demand_sum)) - eta * demand_m) / (users - 1);
}

std::string serialize_instance(const BipartiteInstance& inst) {
    std::ostringstream os;
    os << inst.users << ' ' << inst.aps << ' ' << inst.rb_per_ap << '\n';
    os << "K:";
    for (int k : inst.demand) os << ' ' << k;
    os << '\n';
    for (int m = 0; m < inst.users; ++m)
        for (int n = 0; n < inst.aps; ++n)
            if (inst.edge(m, n)) os << (m + 1) << ' ' << (n + 1) << '\n';
    return os.str();
}

BipartiteInstance parse_instance(std::istream& in) {
    int users = 0, aps = 0, rb = 0;
    if (!(in >> users >> aps >> rb)) throw DomainError("parse_instance: bad header");
    std::string tag;
    if (!(in >> tag) || tag != "K:") throw DomainError("parse_instance: expected 'K:' line");
    std::vector<int> demand(users);
    for (int m = 0; m < users; ++m)
        if (!(in >> demand[m])) throw DomainError("parse_instance: bad demand list");
    std::vector<std::uint8_t> adj(static_cast<size_t>(users) * aps, 0);
    int m = 0, n = 0;
    while (in >> m >> n) {
        if (m < 1 || m > users || n < 1 || n > aps) throw DomainError("parse_instance: edge out of range");
        adj[static_cast<size_t>(m - 1) * aps + (n - 1)] = 1;
    }
    return make_instance(users, aps, rb, std::move(demand), std::move(adj));
}

BipartiteInstance parse_instance(const std::string& text) {
    std::istringstream is(text);
    return parse_instance(is);
}

} // namespace fogmatch
