#include "fogmatch/codes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fogmatch/errors.hpp"

namespace fogmatch {

namespace {

void check_code_dims(double R, int K, int D) {
    if (!(R > 0)) throw InvalidDimensions("code params: content size must be > 0");
    if (K < 1 || K > D) throw InvalidDimensions("code params: need 1 <= K <= D");
}

} // namespace

StoragePoint msr_params(double R, int K, int D) {
    check_code_dims(R, K, D);
    const double alpha = R / K;
    return {alpha, static_cast<double>(D) / (D - K + 1) * alpha};
}

StoragePoint mbr_params(double R, int K, int D) {
    check_code_dims(R, K, D);
    const double a = 2.0 * D / (2.0 * D - K + 1) * R / K;
    return {a, a};
}

std::vector<int> optimal_k(const std::vector<double>& content_sizes, int N, RoundingPolicy) {
    const int M = static_cast<int>(content_sizes.size());
    if (M < 1 || N < 1) throw InvalidDimensions("optimal_k: need at least one content and one AP");
    for (double r : content_sizes)
        if (!(r > 0)) throw InvalidDimensions("optimal_k: content sizes must be > 0");
    if (N < M) throw RoundingInfeasible("optimal_k: fewer APs than contents, cannot keep K_m >= 1");

    const double total = std::accumulate(content_sizes.begin(), content_sizes.end(), 0.0);
    std::vector<double> ideal(M);
    for (int m = 0; m < M; ++m) ideal[m] = content_sizes[m] * N / total;

    // Largest-remainder apportionment of N seats, then lift any zero to one by
    // taking a seat from the currently largest holder.
    std::vector<int> k(M);
    std::vector<std::pair<double, int>> rem(M);
    int assigned = 0;
    for (int m = 0; m < M; ++m) {
        k[m] = static_cast<int>(std::floor(ideal[m]));
        assigned += k[m];
        rem[m] = {ideal[m] - k[m], m};
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int i = 0; i < N - assigned; ++i) ++k[rem[static_cast<size_t>(i) % M].second];
    for (int m = 0; m < M; ++m) {
        while (k[m] < 1) {
            const int donor =
                static_cast<int>(std::max_element(k.begin(), k.end()) - k.begin());
            if (k[donor] <= 1) throw RoundingInfeasible("optimal_k: cannot keep every K_m >= 1");
            --k[donor];
            ++k[m];
        }
    }
    return k;
}

std::vector<CodeParameters> dmr_optimal_code(const std::vector<double>& content_sizes, int N) {
    const std::vector<int> k = optimal_k(content_sizes, N);
    std::vector<CodeParameters> codes(content_sizes.size());
    for (size_t m = 0; m < content_sizes.size(); ++m) {
        CodeParameters c;
        c.scheme = CodingScheme::MSR;
        c.n = N;
        c.k = k[m];
        c.d = k[m]; // the smallest repair degree already attains beta = R_m
        const StoragePoint sp = msr_params(content_sizes[m], k[m], k[m]);
        c.alpha = sp.alpha;
        c.beta = sp.beta;
        codes[m] = c;
    }
    return codes;
}

} // namespace fogmatch
