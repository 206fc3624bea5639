#pragma once

#include <cstdint>
#include <string>

#include "fogmatch/graph.hpp"
#include "fogmatch/rng.hpp"

namespace fogmatch {

// Self-check suites shared by the `verify` CLI command and the test binaries.
// Each suite pairs an implementation with an independent oracle
// (subset enumeration vs max flow, quadrature vs continued fraction, ...).

struct SuiteResult {
    std::string name;
    long long checks = 0;
    long long failures = 0;
    std::string detail;

    bool passed() const { return failures == 0; }
};

// Exhaustive min over all 2^(M+N) vertex subsets of b(V \ X) + |E(X)|.
long long min_cut_formula_bruteforce(const BipartiteInstance& inst);

// Upper incomplete gamma and its order derivative straight from the defining
// integral, adaptive quadrature with truncated tail.
double quadrature_upper_inc_gamma(double s, double a, double tol = 1e-12);
double quadrature_inc_gamma_order_deriv(double s, double a, double tol = 1e-12);

// Random feasible instance with users <= max_m, aps <= max_n and mixed density.
BipartiteInstance random_instance(CounterRng& rng, int max_m, int max_n);

// Approximate chi-square upper critical value (Wilson-Hilferty).
double chi_square_critical(int dof, double significance);

SuiteResult verify_min_cut_enumeration(int instances, std::uint64_t seed);
SuiteResult verify_bp_vs_flow(int instances, std::uint64_t seed);
SuiteResult verify_special_functions(int grid_points, std::uint64_t seed);
SuiteResult verify_fairness(int seeds, std::uint64_t seed, bool inject_degree_violation = false);

} // namespace fogmatch
