#pragma once

#include <optional>
#include <vector>

namespace fogmatch {

enum class CodingScheme { MDS, MBR, MSR };

// Distributed-storage code tuple for one content: n nodes store alpha nats
// each, any k recover, d help a repair (absent for MDS, which has no repair
// bandwidth figure).
struct CodeParameters {
    CodingScheme scheme = CodingScheme::MSR;
    int n = 0;
    int k = 0;
    std::optional<int> d;
    double alpha = 0;
    std::optional<double> beta;
};

struct StoragePoint {
    double alpha = 0;
    double beta = 0;
};

// Minimum-storage point: alpha = R/K, beta = D/(D-K+1) * R/K.
StoragePoint msr_params(double R, int K, int D);

// Minimum-bandwidth point: alpha = beta = 2D/(2D-K+1) * R/K.
StoragePoint mbr_params(double R, int K, int D);

enum class RoundingPolicy { largest_remainder };

// Demand split K*_m = R_m * N / sum(R), apportioned to integers summing to N
// with every entry in [1, N]. Throws RoundingInfeasible when impossible
// (more contents than APs).
std::vector<int> optimal_k(const std::vector<double>& content_sizes, int N,
                           RoundingPolicy policy = RoundingPolicy::largest_remainder);

// Per-content MSR design achieving the best diversity-multiplexing region:
// (n,k,d) = (N, K*_m, K*_m); at the ideal split alpha = sum(R)/N and beta = R_m.
std::vector<CodeParameters> dmr_optimal_code(const std::vector<double>& content_sizes, int N);

} // namespace fogmatch
