#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace fogmatch {

// Complex channel gains h_mn for every (user, AP) pair, row-major M x N.
struct GainMatrix {
    int users = 0;
    int aps = 0;
    std::vector<std::complex<double>> h;

    std::complex<double> at(int m, int n) const { return h[static_cast<size_t>(m) * aps + n]; }
};

// Per-RB mutual information in nats, row-major M x N.
struct MutualInfoMatrix {
    int users = 0;
    int aps = 0;
    std::vector<double> info;

    double at(int m, int n) const { return info[static_cast<size_t>(m) * aps + n]; }
};

// One-bit CSI: entry is 1 when the pair's RB clears the fragment-size threshold.
struct QuantizedCsi {
    int users = 0;
    int aps = 0;
    std::vector<std::uint8_t> q;

    bool at(int m, int n) const { return q[static_cast<size_t>(m) * aps + n] != 0; }
};

// i.i.d. circularly symmetric complex Gaussian gains, zero mean, unit variance.
// Entry (m,n) is keyed by (seed, trial, m*N+n), so a fixed key always yields the
// same matrix and distinct trials never share randomness.
GainMatrix sample_gains(int users, int aps, std::uint64_t seed, std::uint64_t trial = 0);

// ln(1 + |h|^2 * gamma), gamma linear.
inline double mutual_information(std::complex<double> h, double gamma) {
    return std::log1p(std::norm(h) * gamma);
}

MutualInfoMatrix mutual_information(const GainMatrix& gains, double gamma);

// Probability that one RB's mutual information falls below alpha_star under
// Rayleigh fading: p = 1 - exp(-(e^alpha_star - 1)/gamma).
double ap_outage_prob(double alpha_star, double gamma);

// Threshold comparison, one bit per pair; ties (info == threshold) map to 1.
QuantizedCsi quantize_csi(const MutualInfoMatrix& info, const std::vector<double>& alpha_star);
QuantizedCsi quantize_csi(const MutualInfoMatrix& info, double alpha_star);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace fogmatch
