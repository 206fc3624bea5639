#include "fogmatch/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fogmatch/channel.hpp"
#include "fogmatch/errors.hpp"
#include "fogmatch/graph.hpp"

namespace fogmatch {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

// Lentz evaluation of the standard continued fraction for Gamma(s,a),
// valid when a is to the right of the order. Returns ln of the value.
double log_gamma_cf(double s, double a) {
    const double tiny = 1e-300;
    double b = a + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / (b == 0.0 ? tiny : b);
    double h = d;
    for (int n = 1; n <= 10000; ++n) {
        const double an = -n * (n - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return -a + s * std::log(a) + std::log(h);
}

// Lower regularized-style series: gamma_low(s,a) = a^s e^-a sum a^n / (s...(s+n)),
// requires s > 0. Returns the raw (non-log) value.
double lower_gamma_series(double s, double a) {
    double term = 1.0 / s;
    double sum = term;
    double sp = s;
    for (int n = 1; n <= 10000; ++n) {
        sp += 1.0;
        term *= a / sp;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return std::exp(s * std::log(a) - a) * sum;
}

// E1(a) for a <= 1 by the ascending series.
double expint_e1_series(double a) {
    double sum = -kEulerGamma - std::log(a);
    double term = 1.0;
    for (int n = 1; n <= 100; ++n) {
        term *= -a / n;
        sum -= term / n;
        if (std::fabs(term / n) < 1e-18) break;
    }
    return sum;
}

bool use_cf(double s, double a) { return a > 1.0 && a >= s + 1.0; }

double upper_inc_gamma_impl(double s, double a) {
    if (use_cf(s, a)) return std::exp(log_gamma_cf(s, a));
    if (s > 0.0) return std::tgamma(s) - lower_gamma_series(s, a);
    // s <= 0, a small: walk the order down with
    // Gamma(s,a) = (Gamma(s+1,a) - a^s e^-a)/s, seeded at a positive or zero order.
    const double r = std::round(s);
    double t, val;
    if (std::fabs(s - r) < 1e-12) {
        t = 0.0;
        val = expint_e1_series(a);
    } else {
        t = s - std::floor(s); // in (0,1)
        val = std::tgamma(t) - lower_gamma_series(t, a);
    }
    while (t > s + 0.5) {
        t -= 1.0;
        val = (val - std::exp(t * std::log(a) - a)) / t;
    }
    return val;
}

} // namespace

double upper_inc_gamma(double s, double a) {
    if (!(a > 0.0)) throw DomainError("upper_inc_gamma: argument must be > 0");
    return upper_inc_gamma_impl(s, a);
}

double log_upper_inc_gamma(double s, double a) {
    if (!(a > 0.0)) throw DomainError("log_upper_inc_gamma: argument must be > 0");
    if (use_cf(s, a)) return log_gamma_cf(s, a);
    const double v = upper_inc_gamma_impl(s, a);
    if (!(v > 0.0)) throw DomainError("log_upper_inc_gamma: nonpositive value");
    return std::log(v);
}

double upper_inc_gamma_order_deriv(double s, double a) {
    const double h = 1e-5 * std::max(1.0, std::fabs(s));
    auto diff = [&](double step) {
        return (upper_inc_gamma(s + step, a) - upper_inc_gamma(s - step, a)) / (2.0 * step);
    };
    const double d1 = diff(h);
    const double d2 = diff(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

} // namespace

double adaptive_integral(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a >= b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

double log_choose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_add(double la, double lb) {
    if (la == -std::numeric_limits<double>::infinity()) return lb;
    if (lb == -std::numeric_limits<double>::infinity()) return la;
    const double hi = std::max(la, lb), lo = std::min(la, lb);
    return hi + std::log1p(std::exp(lo - hi));
}

// --------------------------------------------------------------------------
// CGF and saddle point
// --------------------------------------------------------------------------

namespace {

void validate_saddle_config(const SaddleConfig& cfg) {
    if (cfg.K < 1) throw DomainError("SaddleConfig: K must be >= 1");
    if (cfg.k < 0 || cfg.k > cfg.K) throw DomainError("SaddleConfig: k must lie in [0, K]");
    if (!(cfg.alpha_star > 0)) throw DomainError("SaddleConfig: alpha_star must be > 0");
    if (!(cfg.gamma > 0)) throw DomainError("SaddleConfig: gamma must be > 0");
}

} // namespace

double cgf(double lambda, const SaddleConfig& cfg) {
    validate_saddle_config(cfg);
    const double rho = cfg.rho();
    const double gamma = cfg.gamma;
    const double alpha = cfg.alpha_star;
    const double arg_hi = std::exp(alpha) / gamma; // e^alpha / gamma
    const double arg_lo = 1.0 / gamma;
    const double log_q = -std::expm1(alpha) / gamma;
    const double p = -std::expm1(log_q);
    if (!(p > 0.0)) throw DomainError("cgf: outage probability underflowed to 0");
    const double log_p = std::log(p);

    double val = (alpha - std::log(gamma)) * lambda + 1.0 / gamma - (rho * log_p + (1.0 - rho) * log_q);
    if (rho < 1.0) val += (1.0 - rho) * log_upper_inc_gamma(1.0 - lambda, arg_hi);
    if (rho > 0.0) {
        const double la = log_upper_inc_gamma(1.0 - lambda, arg_lo);
        const double lb = log_upper_inc_gamma(1.0 - lambda, arg_hi);
        if (!(lb < la)) throw DomainError("cgf: conditional-law gamma difference not positive");
        val += rho * (la + std::log1p(-std::exp(lb - la)));
    }
    return val;
}

double cgf_deriv(double lambda, const SaddleConfig& cfg) {
    const double h = 1e-5 * std::max(1.0, std::fabs(lambda));
    return (cgf(lambda + h, cfg) - cgf(lambda - h, cfg)) / (2.0 * h);
}

double cgf_second_deriv(double lambda, const SaddleConfig& cfg) {
    auto second = [&](double h) {
        return (cgf(lambda + h, cfg) - 2.0 * cgf(lambda, cfg) + cgf(lambda - h, cfg)) / (h * h);
    };
    const double h = 1e-4 * std::max(1.0, std::fabs(lambda));
    return (4.0 * second(h / 2.0) - second(h)) / 3.0;
}

SaddlePoint solve_saddle(const SaddleConfig& cfg) {
    validate_saddle_config(cfg);
    double lo = 1e-8;
    double f_lo = cgf_deriv(lo, cfg);
    if (f_lo >= 0.0)
        throw NoSaddle("solve_saddle: CGF slope at 0+ is nonnegative; event is not an upper tail");
    double hi = 0.999;
    double f_hi = cgf_deriv(hi, cfg);
    int expansions = 0;
    while (f_hi < 0.0) {
        if (++expansions > 60) throw NoSaddle("solve_saddle: no sign change found while expanding");
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = cgf_deriv(hi, cfg);
    }
    // Bisection with a secant polish; convexity of the CGF makes any bracket safe.
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = cgf_deriv(mid, cfg);
        if (std::fabs(fm) <= 1e-9 || (hi - lo) <= 1e-13 * std::max(1.0, mid)) break;
        if (fm < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if (f_hi > f_lo && f_lo < 0.0 && f_hi > 0.0) {
        const double secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        if (secant > lo && secant < hi && std::fabs(cgf_deriv(secant, cfg)) < std::fabs(cgf_deriv(mid, cfg)))
            mid = secant;
    }
    SaddlePoint sp;
    sp.lambda_star = mid;
    sp.sigma_sq = std::max(cgf_second_deriv(mid, cfg), 1e-12);
    sp.cgf_at_star = cgf(mid, cfg);
    sp.log_psi = -0.5 * std::log(2.0 * M_PI * cfg.K * sp.sigma_sq) - std::log(sp.lambda_star);
    return sp;
}

BoundResult conditional_upper_bound(const SaddleConfig& cfg, double R) {
    validate_saddle_config(cfg);
    if (std::fabs(R - cfg.K * cfg.alpha_star) > 1e-9 * std::max(1.0, std::fabs(R)))
        throw DomainError("conditional_upper_bound: R must equal K * alpha_star");
    BoundResult res;
    if (cfg.k >= cfg.K) {
        // Every draw clears alpha_star, so the sum cannot fall below R.
        res.log_value = -std::numeric_limits<double>::infinity();
        res.value = 0.0;
        return res;
    }
    const SaddlePoint sp = solve_saddle(cfg);
    double lv = sp.log_psi + cfg.K * sp.cgf_at_star;
    if (lv > 0.0) {
        lv = 0.0;
        res.clamped = true;
    }
    res.log_value = lv;
    res.value = std::exp(lv);
    return res;
}

// --------------------------------------------------------------------------
// Exact conditional outage by nested quadrature
// --------------------------------------------------------------------------

namespace {

struct CondLaws {
    double alpha, gamma, p, q, ealpha;

    double cdf_above(double w) const {
        if (w <= alpha) return 0.0;
        return -std::expm1(-(std::exp(w) - ealpha) / gamma);
    }
    double pdf_above(double z) const {
        if (z < alpha) return 0.0;
        const double ez = std::exp(z);
        return ez / gamma * std::exp(-(ez - ealpha) / gamma);
    }
    double cdf_below(double w) const {
        if (w <= 0.0) return 0.0;
        if (w >= alpha) return 1.0;
        return -std::expm1(-std::expm1(w) / gamma) / p;
    }
    double pdf_below(double z) const {
        if (z < 0.0 || z >= alpha) return 0.0;
        const double ez = std::exp(z);
        return ez / gamma * std::exp(-(ez - 1.0) / gamma) / p;
    }
};

double cond_cdf(const CondLaws& laws, int n_above, int n_below, double w, double tol) {
    if (n_above == 0 && n_below == 0) return w > 0.0 ? 1.0 : 0.0;
    if (w <= n_above * laws.alpha) return 0.0;
    if (n_above == 0 && w >= n_below * laws.alpha) return 1.0;
    if (n_above == 1 && n_below == 0) return laws.cdf_above(w);
    if (n_above == 0 && n_below == 1) return laws.cdf_below(w);
    if (n_below > 0) {
        const double hi = std::min(laws.alpha, w);
        return adaptive_integral(
            [&](double z) { return laws.pdf_below(z) * cond_cdf(laws, n_above, n_below - 1, w - z, tol * 4.0); },
            0.0, hi, tol);
    }
    // All remaining draws are above-threshold; the integrand dies once the
    // rest cannot fit under w.
    const double hi = w - (n_above - 1) * laws.alpha;
    return adaptive_integral(
        [&](double z) { return laws.pdf_above(z) * cond_cdf(laws, n_above - 1, 0, w - z, tol * 4.0); },
        laws.alpha, hi, tol);
}

} // namespace

double conditional_outage_exact(int n_above, int n_below, double alpha_star, double gamma, double R) {
    if (n_above < 0 || n_below < 0 || n_above + n_below > 4)
        throw DomainError("conditional_outage_exact: supports at most 4 draws");
    if (!(alpha_star > 0) || !(gamma > 0))
        throw DomainError("conditional_outage_exact: alpha_star and gamma must be > 0");
    CondLaws laws;
    laws.alpha = alpha_star;
    laws.gamma = gamma;
    laws.ealpha = std::exp(alpha_star);
    const double log_q = -std::expm1(alpha_star) / gamma;
    laws.q = std::exp(log_q);
    laws.p = -std::expm1(log_q);
    const double v = cond_cdf(laws, n_above, n_below, R, 1e-11);
    return std::clamp(v, 0.0, 1.0);
}

// --------------------------------------------------------------------------
// Content outage approximations
// --------------------------------------------------------------------------

namespace {

// ln p_con(R | K, k) through the saddle bound, with the out-of-regime cases
// pinned to their exact limits.
double log_pcon_bound(int K, double k, double alpha, double gamma, bool* clamped, bool* no_saddle) {
    if (k <= 0.0) return 0.0; // all draws below alpha: outage is certain
    if (k >= K) return -std::numeric_limits<double>::infinity();
    SaddleConfig cfg{K, k, alpha, gamma};
    try {
        const BoundResult b = conditional_upper_bound(cfg, K * alpha);
        if (b.clamped && clamped) *clamped = true;
        return b.log_value;
    } catch (const NoSaddle&) {
        if (no_saddle) *no_saddle = true;
        return 0.0; // mean-side regime: bound degenerates to the trivial 1
    }
}

} // namespace

ContentOutageApprox content_outage_high_snr(int M, int N, int L, int K, double eta, double R,
                                            double gamma) {
    if (M < 1 || N < 1 || L < 1 || K < 1 || K > N)
        throw InvalidDimensions("content_outage_high_snr: bad system dimensions");
    const double alpha = R / K;
    const double p = ap_outage_prob(alpha, gamma);
    const double lp = std::log(p);
    ContentOutageApprox out;

    auto eq_sum_over_patterns = [&]() {
        double acc = -std::numeric_limits<double>::infinity();
        for (int kappa = N - K + 1; kappa <= N; ++kappa) {
            const int k_good = N - kappa;
            const double term = log_choose(N, kappa) +
                                log_pcon_bound(K, k_good, alpha, gamma, &out.any_clamped, &out.any_no_saddle) +
                                kappa * lp;
            acc = log_add(acc, term);
        }
        return acc;
    };
    auto eq_single_unsaturated = [&]() {
        const long long f2 = phi2(M, L, static_cast<long long>(M) * K);
        const double exponent = static_cast<double>(M) * N - static_cast<double>(f2);
        return log_choose(static_cast<double>(M) * N, static_cast<double>(f2)) +
               log_pcon_bound(K, eta * K, alpha, gamma, &out.any_clamped, &out.any_no_saddle) +
               exponent * lp;
    };

    if (M == 1) {
        out.branch = OutageBranch::sum_over_ap_patterns;
        out.log_value = eq_sum_over_patterns();
    } else {
        const double T = branch_threshold(M, L, static_cast<long long>(M) * K, K, eta);
        if (std::fabs(N - T) <= 1e-12 * std::max(1.0, std::fabs(T))) {
            out.branch = OutageBranch::both;
            out.log_value = log_add(eq_sum_over_patterns(), eq_single_unsaturated());
        } else if (N > T) {
            out.branch = OutageBranch::sum_over_ap_patterns;
            out.log_value = eq_sum_over_patterns();
        } else {
            out.branch = OutageBranch::single_unsaturated_user;
            out.log_value = eq_single_unsaturated();
        }
    }
    if (out.log_value > 0.0) {
        out.log_value = 0.0;
        out.any_clamped = true;
    }
    out.value = std::exp(out.log_value);
    return out;
}

double content_outage_low_snr(int N, int K, double R, double gamma) {
    if (N < 1 || K < 1) throw InvalidDimensions("content_outage_low_snr: bad dimensions");
    const double alpha = R / K;
    const double p = ap_outage_prob(alpha, gamma);
    const double q = 1.0 - p;
    const double pcon1 = K >= 2 ? conditional_outage_exact(1, K - 1, alpha, gamma, R) : 0.0;
    const double v = std::pow(p, N) + N * pcon1 * std::pow(p, N - 1) * q;
    return std::min(v, 1.0);
}

DmtPoint conditional_dmt(int K, double k, double r) {
    if (r < 0 || r > K) throw DomainError("conditional_dmt: r must lie in [0, K]");
    return {r, k * (1.0 - r / K)};
}

double dmr(int M, int N, int L, int K, double eta, double r) {
    if (!(r > 0) || r > K) throw DomainError("dmr: r must lie in (0, K]");
    const double slope = 1.0 - r / K;
    if (M == 1) return N * slope;
    const long long f2 = phi2(M, L, static_cast<long long>(M) * K);
    const double T = branch_threshold(M, L, static_cast<long long>(M) * K, K, eta);
    if (N >= T) return N * slope;
    return (static_cast<double>(M) * N - static_cast<double>(f2) + eta * K) * slope;
}

std::vector<double> oer(const std::vector<OerConfig>& configs, double gamma) {
    std::vector<double> exponents;
    exponents.reserve(configs.size());
    const double c = 1.1885022274370185; // quarter-decade half-step in gamma
    for (const auto& cfg : configs) {
        const double up =
            content_outage_high_snr(cfg.M, cfg.N, cfg.L, cfg.K, cfg.eta, cfg.R, gamma * c).log_value;
        const double dn =
            content_outage_high_snr(cfg.M, cfg.N, cfg.L, cfg.K, cfg.eta, cfg.R, gamma / c).log_value;
        exponents.push_back(-(up - dn) / (2.0 * std::log(c)));
    }
    return exponents;
}

double conditional_bound_exponent(const SaddleConfig& cfg, double R, double step_factor) {
    SaddleConfig hi = cfg, lo = cfg;
    hi.gamma = cfg.gamma * step_factor;
    lo.gamma = cfg.gamma / step_factor;
    const double up = conditional_upper_bound(hi, R).log_value;
    const double dn = conditional_upper_bound(lo, R).log_value;
    return -(up - dn) / (2.0 * std::log(step_factor));
}

} // namespace fogmatch
