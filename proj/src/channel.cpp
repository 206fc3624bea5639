#include "fogmatch/channel.hpp"

#include <cmath>

#include "fogmatch/errors.hpp"
#include "fogmatch/rng.hpp"

namespace fogmatch {

GainMatrix sample_gains(int users, int aps, std::uint64_t seed, std::uint64_t trial) {
    if (users < 1 || aps < 1) throw InvalidDimensions("sample_gains: need users, aps >= 1");
    GainMatrix g;
    g.users = users;
    g.aps = aps;
    g.h.resize(static_cast<size_t>(users) * aps);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int m = 0; m < users; ++m) {
        for (int n = 0; n < aps; ++n) {
            const std::uint64_t entry = static_cast<std::uint64_t>(m) * aps + n;
            CounterRng rng(seed, trial, entry);
            // Box-Muller with |h|^2 = -ln(u1), exactly Exp(1) as required of a
            // unit-variance complex Gaussian.
            const double r = std::sqrt(-std::log(rng.uniform_open()));
            const double phi = two_pi * rng.uniform();
            g.h[entry] = {r * std::cos(phi), r * std::sin(phi)};
        }
    }
    return g;
}

MutualInfoMatrix mutual_information(const GainMatrix& gains, double gamma) {
    MutualInfoMatrix mi;
    mi.users = gains.users;
    mi.aps = gains.aps;
    mi.info.resize(gains.h.size());
    for (size_t i = 0; i < gains.h.size(); ++i) mi.info[i] = std::log1p(std::norm(gains.h[i]) * gamma);
    return mi;
}

double ap_outage_prob(double alpha_star, double gamma) {
    if (alpha_star < 0) throw DomainError("ap_outage_prob: alpha_star must be >= 0");
    if (gamma <= 0) throw DomainError("ap_outage_prob: gamma must be > 0");
    return -std::expm1(-std::expm1(alpha_star) / gamma);
}

QuantizedCsi quantize_csi(const MutualInfoMatrix& info, const std::vector<double>& alpha_star) {
    if (static_cast<int>(alpha_star.size()) != info.users)
        throw InvalidDimensions("quantize_csi: one threshold per user required");
    QuantizedCsi csi;
    csi.users = info.users;
    csi.aps = info.aps;
    csi.q.resize(info.info.size());
    for (int m = 0; m < info.users; ++m)
        for (int n = 0; n < info.aps; ++n) {
            const size_t i = static_cast<size_t>(m) * info.aps + n;
            csi.q[i] = info.info[i] >= alpha_star[m] ? 1 : 0;
        }
    return csi;
}

QuantizedCsi quantize_csi(const MutualInfoMatrix& info, double alpha_star) {
    return quantize_csi(info, std::vector<double>(info.users, alpha_star));
}

} // namespace fogmatch
