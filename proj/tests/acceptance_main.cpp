// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on any
// failure. Heavier Monte Carlo criteria report their measurement setup inline.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "fogmatch/analytic.hpp"
#include "fogmatch/channel.hpp"
#include "fogmatch/codes.hpp"
#include "fogmatch/errors.hpp"
#include "fogmatch/matching.hpp"
#include "fogmatch/simulator.hpp"
#include "fogmatch/verify.hpp"

using namespace fogmatch;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
               .count() /
           1000.0;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// --- criterion 1: message passing equals the max-flow oracle -----------------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult r = verify_bp_vs_flow(1000, 101);
    const double sec = seconds_since(t0);
    report(1, r.passed() && sec < 60.0,
           fmt("BP vs oracle cardinality on %lld random instances, %lld mismatches, %.1fs (%s)",
               r.checks, r.failures, sec, r.detail.c_str()));
}

// --- criterion 2: exhaustive min formula --------------------------------------
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult r = verify_min_cut_enumeration(200, 202);
    const double sec = seconds_since(t0);
    report(2, r.passed() && sec < 120.0,
           fmt("oracle vs 2^(M+N) subset enumeration, %lld checks, %lld mismatches, %.1fs", r.checks,
               r.failures, sec));
}

// --- criterion 3: conditional bound tightness ---------------------------------
void criterion_3() {
    const int K = 2, k = 1;
    const double R = 2.0;
    bool above_mc = true;
    double ratio20 = 0, ratio40 = 0, mc40 = 0, bound40 = 0;
    std::string margin;
    for (double db = 0.0; db <= 40.0; db += 5.0) {
        const double g = db_to_linear(db);
        ConditionalEstimate mc;
        long long trials = 4096;
        while (true) {
            mc = simulate_conditional_outage(K, k, R, g, trials, 303);
            if (mc.events >= 50 || trials >= (1 << 20)) break;
            trials *= 2;
        }
        double bound = 1.0;
        try {
            bound = conditional_upper_bound(SaddleConfig{K, static_cast<double>(k), R / K, g}, R).value;
        } catch (const NoSaddle&) {
            bound = 1.0;
        }
        const double sigma = std::sqrt(std::max(mc.p_hat * (1 - mc.p_hat), 1e-12) / mc.trials);
        if (bound < mc.p_hat - 3.0 * sigma) {
            above_mc = false;
            margin += fmt(" [%g dB: bound %.4g < mc-3s %.4g]", db, bound, mc.p_hat - 3 * sigma);
        }
        if (db == 20.0) ratio20 = bound / mc.p_hat;
        if (db == 40.0) {
            ratio40 = bound / mc.p_hat;
            mc40 = mc.p_hat;
            bound40 = bound;
        }
    }
    const double exact40 = conditional_outage_exact(1, 1, R / K, db_to_linear(40.0), R);
    report(3, above_mc && ratio40 >= 1.0 && ratio40 <= 1.6 && ratio40 < ratio20,
           fmt("bound>=MC-3sigma %s%s; ratio(40dB)=%.3f in [1.0,1.6] %s; ratio(20dB)=%.3f "
               "monotone %s | deterministic refs at 40 dB: bound=%.5g, exact=%.5g, "
               "bound/exact=%.4f (first-order tail estimate sits ~5%% below the exact "
               "conditional law at this K; see decisions notes)",
               above_mc ? "yes" : "NO", margin.c_str(), ratio40,
               (ratio40 >= 1.0 && ratio40 <= 1.6) ? "yes" : "NO", ratio20,
               ratio40 < ratio20 ? "yes" : "NO", bound40, exact40, bound40 / exact40));
    (void)mc40;
}

// --- criterion 4: conditional exponent approaches the conditional DMT ---------
void criterion_4() {
    const SaddleConfig cfg{2, 1.0, 1.0, db_to_linear(40.0)};
    const double e = conditional_bound_exponent(cfg, 2.0);
    const double d = conditional_dmt(2, 1.0, 0.0).d;
    const double rel = std::fabs(e - d) / d;
    report(4, rel <= 0.10,
           fmt("bound log-log slope at 40 dB = %.4f vs conditional diversity %.1f (rel err %.1f%%)",
               e, d, rel * 100));
}

// --- criterion 5: content outage slope at high SNR ----------------------------
struct SlopeResult {
    double slope = 0;
    std::string detail;
    double seconds = 0;
};

SlopeResult measure_slope(double r, const std::vector<double>& grid, long long cap, int min_events) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.M = 10;
    cfg.N = 5;
    cfg.L = 4;
    cfg.K.assign(10, 2);
    cfg.rate_mode = RateMode::dynamic_rate;
    cfg.mux.assign(10, r);
    cfg.snr_db = grid;
    cfg.trials_init = 1 << 20;
    cfg.trials_cap = cap;
    cfg.min_events = min_events;
    cfg.seed = 1;
    cfg.estimator = Estimator::conditioned;
    const auto curves = simulate_content_outage(cfg);
    const auto& pts = curves[0].points;
    SlopeResult out;
    const size_t last = pts.size() - 1;
    out.slope = -(std::log(pts[last].p_hat) - std::log(pts[0].p_hat)) /
                (std::log(pts[last].gamma) - std::log(pts[0].gamma));
    out.seconds = seconds_since(t0);
    for (const auto& p : pts)
        out.detail += fmt(" p(%.3gdB)=%.3g/ev%lld", p.gamma_db, p.p_hat, p.events);
    return out;
}

void criterion_5() {
    {
        const SlopeResult s = measure_slope(0.9, {25.0, 27.5, 30.0, 32.5}, 1'500'000'000, 200);
        const double d = dmr(10, 5, 4, 2, 0.5, 0.9);
        const double rel = std::fabs(s.slope - d) / d;
        report(5, rel <= 0.15,
               fmt("r=0.9 slope over 25-32.5 dB = %.3f vs d*=%.3f (rel err %.1f%%), %.0fs;%s",
                   s.slope, d, rel * 100, s.seconds, s.detail.c_str()));
    }
    {
        const SlopeResult s = measure_slope(0.6, {25.0, 27.5}, 5'000'000'000, 200);
        const double d = dmr(10, 5, 4, 2, 0.5, 0.6);
        const double rel = std::fabs(s.slope - d) / d;
        report(5, rel <= 0.15,
               fmt("r=0.6 slope over 25-27.5 dB = %.3f vs d*=%.3f (rel err %.1f%%), %.0fs;%s",
                   s.slope, d, rel * 100, s.seconds, s.detail.c_str()));
    }
}

// --- criterion 6: low-SNR first-order formula ---------------------------------
void criterion_6() {
    ExperimentConfig cfg;
    cfg.M = 10;
    cfg.N = 5;
    cfg.L = 4;
    cfg.K.assign(10, 2);
    cfg.rate_mode = RateMode::fixed_rate;
    cfg.rate.assign(10, 2.0);
    cfg.snr_db = {-10.0, -5.0, 0.0};
    cfg.trials_init = 20000;
    cfg.trials_cap = 20000;
    cfg.seed = 606;
    cfg.estimator = Estimator::indicator;
    const auto curves = simulate_content_outage(cfg);
    bool ok = true;
    std::string detail;
    for (const auto& p : curves[0].points) {
        const double analytic = content_outage_low_snr(5, 2, 2.0, p.gamma);
        const double sigma = std::sqrt(std::max(p.p_hat * (1 - p.p_hat), 1e-12) / p.trials);
        const bool within = std::fabs(analytic - p.p_hat) <= 3.0 * sigma;
        ok = ok && within;
        detail += fmt(" %gdB: mc=%.4f vs %.4f (%.1f sigma)", p.gamma_db, p.p_hat, analytic,
                      sigma > 0 ? (analytic - p.p_hat) / sigma : 0.0);
    }
    report(6, ok, "low-SNR formula within 3 sigma of MC at 20k trials/point:" + detail);
}

// --- criterion 7: MSR never loses to MBR --------------------------------------
void criterion_7() {
    const int K = 2, D = 3;
    const double R = 2.0;
    std::vector<std::vector<OutagePoint>> results;
    for (double scale : {1.0, mbr_params(R, K, D).alpha / msr_params(R, K, D).alpha}) {
        ExperimentConfig cfg;
        cfg.M = 10;
        cfg.N = 5;
        cfg.L = 4;
        cfg.K.assign(10, K);
        cfg.rate_mode = RateMode::fixed_rate;
        cfg.rate.assign(10, R);
        cfg.snr_db = {10.0, 15.0, 20.0, 25.0};
        cfg.trials_init = 1 << 17;
        cfg.trials_cap = 1 << 21;
        cfg.seed = 707; // shared seed: both schemes see identical channel draws
        cfg.estimator = Estimator::indicator;
        cfg.alpha_scale = scale;
        const auto curves = simulate_content_outage(cfg);
        results.push_back(curves[0].points);
    }
    bool ok = true;
    std::string detail;
    for (size_t i = 0; i < results[0].size(); ++i) {
        const auto& msr = results[0][i];
        const auto& mbr = results[1][i];
        const double sigma = std::sqrt(std::max(msr.p_hat * (1 - msr.p_hat), 1e-12) / msr.trials +
                                       std::max(mbr.p_hat * (1 - mbr.p_hat), 1e-12) / mbr.trials);
        const bool within = msr.p_hat <= mbr.p_hat + 3.0 * sigma;
        ok = ok && within;
        detail += fmt(" %gdB: %.3g<=%.3g%s", msr.gamma_db, msr.p_hat, mbr.p_hat, within ? "" : "!");
    }
    report(7, ok, "MSR outage <= MBR outage + 3 sigma at equal (R,K,D):" + detail);
}

// --- criterion 8: best-region code identities ---------------------------------
void criterion_8() {
    const auto codes = dmr_optimal_code({2.0, 3.0}, 5);
    const bool ok = codes.size() == 2 && codes[0].n == 5 && codes[0].k == 2 &&
                    codes[0].d.value() == 2 && codes[1].k == 3 && codes[1].d.value() == 3 &&
                    codes[0].alpha == 1.0 && codes[1].alpha == 1.0 &&
                    codes[0].beta.value() == 2.0 && codes[1].beta.value() == 3.0;
    report(8, ok,
           fmt("R=(2,3), N=5 -> codes (5,%d,%d),(5,%d,%d), alpha=(%g,%g), beta=(%g,%g), exact",
               codes[0].k, codes[0].d.value(), codes[1].k, codes[1].d.value(), codes[0].alpha,
               codes[1].alpha, codes[0].beta.value(), codes[1].beta.value()));
}

// --- criterion 9: special function suite --------------------------------------
void criterion_9() {
    const SuiteResult r = verify_special_functions(100, 909);
    report(9, r.passed(),
           fmt("incomplete-gamma recurrence + order-derivative identity on a 100-point grid, "
               "CGF(0)=0 on 50 configs: %lld checks, %lld failures",
               r.checks, r.failures));
}

// --- criterion 10: fairness symmetry ------------------------------------------
void criterion_10() {
    const SuiteResult r = verify_fairness(10000, 1010);
    report(10, r.passed(), fmt("chi-square over 10000 seeds: %s", r.detail.c_str()));
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_4();
    criterion_6();
    criterion_7();
    criterion_3();
    criterion_5();
    std::printf("acceptance: %d criterion failure(s), %.0fs total\n", g_failures,
                seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
