#pragma once

#include <functional>
#include <vector>

namespace fogmatch {

// --------------------------------------------------------------------------
// Special functions
// --------------------------------------------------------------------------

// Upper incomplete gamma integral(a..inf) e^-t t^(s-1) dt for any real order s
// and a > 0. Continued fraction when a dominates the order, series plus
// downward order recurrence otherwise. Throws DomainError for a <= 0.
double upper_inc_gamma(double s, double a);
double log_upper_inc_gamma(double s, double a);

// d/ds of the upper incomplete gamma, central differences with Richardson
// extrapolation (step 1e-5 scaled by |s|).
double upper_inc_gamma_order_deriv(double s, double a);

// Adaptive Simpson on [a,b]; tol is absolute.
double adaptive_integral(const std::function<double(double)>& f, double a, double b, double tol);

double log_choose(double n, double k);
double log_add(double la, double lb); // ln(e^la + e^lb)

// --------------------------------------------------------------------------
// Conditional outage: saddle point bound and exact small-K evaluation
// --------------------------------------------------------------------------

// Parameters of the conditional law: K selected APs, of which k cleared the
// threshold alpha_star (k may be fractional when it encodes eta*K).
struct SaddleConfig {
    int K = 1;
    double k = 0;
    double alpha_star = 0;
    double gamma = 1;

    double rho() const { return 1.0 - k / K; }
};

struct SaddlePoint {
    double lambda_star = 0;
    double sigma_sq = 0;
    double cgf_at_star = 0;
    double log_psi = 0; // ln(1/(sqrt(2 pi K sigma^2) lambda*))
};

// Per-variable cumulant generating function of alpha_star - Z under the
// conditional mixture law.
double cgf(double lambda, const SaddleConfig& cfg);

// First/second derivative of the CGF by central differences.
double cgf_deriv(double lambda, const SaddleConfig& cfg);
double cgf_second_deriv(double lambda, const SaddleConfig& cfg);

// Root of cgf_deriv on (0, inf); throws NoSaddle when the outage event is not
// in the upper tail (cgf_deriv(0+) >= 0) so the bound regime does not apply.
SaddlePoint solve_saddle(const SaddleConfig& cfg);

struct BoundResult {
    double log_value = 0; // ln of the bound, clamped at 0
    double value = 0;
    bool clamped = false;   // true when psi*exp(K Lambda) exceeded 1
    bool no_saddle = false; // true when the regime was invalid and 1 was returned
};

// Exponentially tight upper bound psi * exp(K * Lambda(lambda*)) on the
// conditional content outage probability, clamped to [0,1].
BoundResult conditional_upper_bound(const SaddleConfig& cfg, double R);

// Exact conditional outage P(sum of n_above draws >= alpha plus n_below draws
// < alpha falls below R) by nested adaptive quadrature of the closed-form
// conditional CDFs. Supports n_above + n_below <= 4 (depth cap).
double conditional_outage_exact(int n_above, int n_below, double alpha_star, double gamma, double R);

// --------------------------------------------------------------------------
// Content outage approximations, exponents and regions
// --------------------------------------------------------------------------

enum class OutageBranch { sum_over_ap_patterns, single_unsaturated_user, both };

struct ContentOutageApprox {
    double log_value = 0;
    double value = 0;
    OutageBranch branch = OutageBranch::sum_over_ap_patterns;
    bool any_clamped = false;
    bool any_no_saddle = false;
};

// High-SNR first-order approximation for a user with demand K in a homogeneous
// system (K_sum = M*K). Branch picked by N versus (phi2 - eta*K)/(M-1).
ContentOutageApprox content_outage_high_snr(int M, int N, int L, int K, double eta, double R,
                                            double gamma);

// Low-SNR first-order approximation p^N + N * pcon(k=1) * p^(N-1) * q, with the
// k=1 conditional term evaluated exactly by quadrature.
double content_outage_low_snr(int N, int K, double R, double gamma);

struct DmtPoint {
    double r = 0;
    double d = 0;
};

// Conditional diversity-multiplexing tradeoff d = k (1 - r/K).
DmtPoint conditional_dmt(int K, double k, double r);

// Best achievable diversity gain at multiplexing gain r for the homogeneous
// system; the branch mirrors content_outage_high_snr.
double dmr(int M, int N, int L, int K, double eta, double r);

struct OerConfig {
    int M = 0, N = 0, L = 0, K = 0;
    double eta = 0.5;
    double R = 0;
};

// Outage exponents -d ln p / d ln gamma of the high-SNR approximation,
// central differences on a local log-SNR stencil.
std::vector<double> oer(const std::vector<OerConfig>& configs, double gamma);

// Exponent of the conditional upper bound at gamma (central log-log slope).
double conditional_bound_exponent(const SaddleConfig& cfg, double R, double step_factor = 1.7782794100389228);

} // namespace fogmatch
