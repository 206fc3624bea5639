#pragma once

#include <cstdint>
#include <vector>

#include "fogmatch/matching.hpp"

namespace fogmatch {

enum class RateMode { fixed_rate, dynamic_rate };

// indicator: per-trial 0/1 outage through the full pipeline.
// conditioned: replaces the indicator by its exact conditional expectation
// given the quantized CSI (depends on the trial only through each user's
// matched non-outage count) -- unbiased for the same quantity with far lower
// variance on steep high-SNR curves.
enum class Estimator { indicator, conditioned };

struct ExperimentConfig {
    int M = 0, N = 0, L = 0;
    std::vector<int> K;
    RateMode rate_mode = RateMode::fixed_rate;
    std::vector<double> rate;  // fixed-rate R_m (nats); used when rate_mode == fixed_rate
    std::vector<double> mux;   // multiplexing gains r_m; R_m = r_m ln(gamma) when dynamic
    std::vector<double> snr_db;
    long long trials_init = 1 << 14;
    long long trials_cap = 1'000'000;
    int min_events = 50;
    std::uint64_t seed = 0;
    FairnessPolicy policy;
    Estimator estimator = Estimator::indicator;
    int threads = 0;          // 0 = hardware concurrency (capped at 8)
    double alpha_scale = 1.0; // quantizer threshold alpha = alpha_scale * R_m / K_m
                              // and sum test against K_m * alpha (MBR comparison hook)

    void validate() const; // throws InfeasibleDemand / InvalidDimensions / DomainError
};

struct OutagePoint {
    double gamma_db = 0;
    double gamma = 0;
    double p_hat = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    long long trials = 0;
    long long events = 0;         // trials with nonzero outage contribution
    long long shortfall_users = 0; // completion shortfalls observed (rare corners)
    double exponent = 0;
    bool exponent_valid = false;
};

struct OutageCurve {
    int user = 0;
    std::vector<OutagePoint> points;
};

// Monte Carlo content outage across the SNR grid, one curve per user.
// Trials per point double from trials_init until every user has at least
// min_events contributing trials or trials_cap is reached. Deterministic for a
// fixed config/seed regardless of thread count.
std::vector<OutageCurve> simulate_content_outage(const ExperimentConfig& cfg);

struct ConditionalEstimate {
    double p_hat = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    long long trials = 0;
    long long events = 0;
};

// Conditional content outage for one user by inverse-transform sampling of the
// threshold-conditioned per-RB laws: k draws at or above alpha_star, K-k below.
ConditionalEstimate simulate_conditional_outage(int K, int k, double R, double gamma,
                                                long long trials, std::uint64_t seed);

// Draws from the two conditional laws (exposed for the simulator tests).
double sample_conditional_above(double alpha_star, double gamma, double u01);
double sample_conditional_below(double alpha_star, double gamma, double u01);

// Wilson 95% score interval.
void wilson_interval(long long successes, long long trials, double& lo, double& hi);

// Fills the exponent fields by central differences of ln(p_hat) against
// ln(gamma); endpoints one-sided; nonpositive estimates are skipped.
// Throws InsufficientData when fewer than 3 usable points exist.
void estimate_exponent(OutageCurve& curve);

} // namespace fogmatch
