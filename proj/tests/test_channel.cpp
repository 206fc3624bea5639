#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fogmatch/channel.hpp"
#include "fogmatch/errors.hpp"
#include "fogmatch/rng.hpp"

using namespace fogmatch;

TEST_CASE("gain sampling is reproducible and shaped") {
    const GainMatrix a = sample_gains(2, 3, 42, 7);
    const GainMatrix b = sample_gains(2, 3, 42, 7);
    CHECK(a.users == 2);
    CHECK(a.aps == 3);
    CHECK(a.h.size() == 6);
    for (size_t i = 0; i < a.h.size(); ++i) CHECK(a.h[i] == b.h[i]);

    const GainMatrix c = sample_gains(2, 3, 42, 8);
    bool any_diff = false;
    for (size_t i = 0; i < a.h.size(); ++i) any_diff = any_diff || a.h[i] != c.h[i];
    CHECK(any_diff);
}

TEST_CASE("squared gain magnitudes are unit-mean exponential") {
    const int n = 100000;
    const GainMatrix g = sample_gains(1, n, 2024, 0);
    std::vector<double> x(n);
    double mean = 0;
    for (int i = 0; i < n; ++i) {
        x[i] = std::norm(g.h[i]);
        mean += x[i];
    }
    mean /= n;
    // Var of an Exp(1) sample mean is 1/n.
    CHECK(std::fabs(mean - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));

    // Kolmogorov-Smirnov against Exp(1), significance 0.01.
    std::sort(x.begin(), x.end());
    double d = 0;
    for (int i = 0; i < n; ++i) {
        const double cdf = -std::expm1(-x[i]);
        d = std::max(d, std::fabs(cdf - (i + 1.0) / n));
        d = std::max(d, std::fabs(cdf - static_cast<double>(i) / n));
    }
    CHECK(d * std::sqrt(static_cast<double>(n)) < 1.628);
}

TEST_CASE("mutual information formula") {
    CHECK(mutual_information(std::complex<double>{0.0, 0.0}, 10.0) == 0.0);
    CHECK(mutual_information(std::complex<double>{1.0, 0.0}, M_E - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0;
    for (double gamma : {0.1, 1.0, 10.0, 100.0}) {
        const double v = mutual_information(std::complex<double>{0.3, -0.4}, gamma);
        CHECK(v > prev);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("per-RB outage probability") {
    CHECK(ap_outage_prob(0.0, 10.0) == 0.0);
    CHECK(ap_outage_prob(1.0, 1e12) < 2e-12);
    CHECK(ap_outage_prob(1.0, 10.0) == doctest::Approx(0.15787).epsilon(1e-4));
    CHECK(ap_outage_prob(1.0, 10.0) ==
          doctest::Approx(-std::expm1(-std::expm1(1.0) / 10.0)).epsilon(1e-15));
    CHECK(ap_outage_prob(1.0, 20.0) < ap_outage_prob(1.0, 10.0));
    CHECK(ap_outage_prob(2.0, 10.0) > ap_outage_prob(1.0, 10.0));
    CHECK_THROWS_AS(ap_outage_prob(1.0, 0.0), DomainError);
}

TEST_CASE("quantizer maps threshold ties to one") {
    MutualInfoMatrix mi;
    mi.users = 2;
    mi.aps = 2;
    mi.info = {0.0, 0.5, 1.0, 2.0};
    const QuantizedCsi q = quantize_csi(mi, std::vector<double>{0.5, 1.5});
    CHECK_FALSE(q.at(0, 0));
    CHECK(q.at(0, 1)); // exact tie maps to 1
    CHECK_FALSE(q.at(1, 0));
    CHECK(q.at(1, 1));

    const QuantizedCsi qs = quantize_csi(mi, 0.75);
    CHECK_FALSE(qs.at(0, 0));
    CHECK_FALSE(qs.at(0, 1));
    CHECK(qs.at(1, 0));
    CHECK(qs.at(1, 1));

    MutualInfoMatrix zero;
    zero.users = 1;
    zero.aps = 4;
    zero.info.assign(4, 0.0);
    const QuantizedCsi qz = quantize_csi(zero, 0.1);
    for (int n = 0; n < 4; ++n) CHECK_FALSE(qz.at(0, n));
}

TEST_CASE("quantizer frequency matches the closed-form outage probability") {
    const double gamma = 5.0, alpha = 1.2;
    const int trials = 100000;
    long long zeros = 0;
    for (int t = 0; t < trials; ++t) {
        const GainMatrix g = sample_gains(1, 1, 99, t);
        const MutualInfoMatrix mi = mutual_information(g, gamma);
        const QuantizedCsi q = quantize_csi(mi, 1.2);
        if (!q.at(0, 0)) ++zeros;
    }
    const double p = ap_outage_prob(alpha, gamma);
    const double sigma = std::sqrt(p * (1 - p) * trials);
    CHECK(std::fabs(zeros - p * trials) < 3.0 * sigma);
}
