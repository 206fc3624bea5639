"""Smoke test for the _fogmatch extension module.

Run under ctest with PYTHONPATH pointing at the build directory.
"""

import math
import sys

import _fogmatch as fm


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol * max(1.0, abs(a), abs(b)), f"{a} != {b}"


def main():
    # channel closed forms
    approx(fm.mutual_information(1.0, 0.0, math.e - 1.0), 1.0)
    approx(fm.ap_outage_prob(1.0, 10.0), -math.expm1(-math.expm1(1.0) / 10.0))
    powers = fm.sample_gain_powers(2, 3, seed=42)
    assert len(powers) == 6 and all(p >= 0 for p in powers)
    assert powers == fm.sample_gain_powers(2, 3, seed=42)

    # matching: the 4x3 seven-edge example
    edges = [(0, 0), (0, 2), (1, 0), (2, 1), (2, 2), (3, 1), (3, 2)]
    oracle = fm.solve_exact(4, 3, 3, [2, 2, 2, 2], edges)
    assert oracle["cardinality"] == 7
    bp = fm.solve_message_passing(4, 3, 3, [2, 2, 2, 2], edges, seed=9)
    assert bp["cardinality"] == 7
    assert all(len(s) == 2 for s in bp["selected"])
    assert bp["shortfall"] == [0, 0, 0, 0]

    # edge-count thresholds and code parameters
    assert fm.phi2(10, 4, 20) == 43
    approx(fm.msr_params(2.0, 2, 3)[1], 1.5)
    assert fm.optimal_k([2.0, 3.0], 5) == [2, 3]
    codes = fm.dmr_optimal_code([2.0, 3.0], 5)
    approx(codes[0]["alpha"], 1.0)
    approx(codes[1]["beta"], 3.0)

    # analytics
    approx(fm.upper_incomplete_gamma(1.0, 0.5), math.exp(-0.5))
    approx(fm.cgf(0.0, 2, 1.0, 1.0, 100.0), 0.0, tol=1e-12)
    assert fm.dmr(10, 5, 4, 2, 0.5, 0.9) == 2.75
    approx(fm.conditional_dmt(2, 1.0, 0.0), 1.0)
    bound, clamped = fm.conditional_upper_bound(2, 1.0, 2.0, 10_000.0)
    assert 0 < bound < 1e-3 and not clamped
    exact = fm.conditional_outage_exact(1, 1, 1.0, 10_000.0, 2.0)
    assert 0.8 < bound / exact < 1.2

    # small end-to-end simulation
    curves = fm.simulate_content_outage(
        M=3, N=3, L=2, K=2, rate=2.0, snr_db=[5.0, 10.0], trials_cap=20000, seed=7
    )
    assert len(curves) == 3
    for c in curves:
        pts = c["points"]
        assert len(pts) == 2
        assert 0.0 <= pts[0]["p_hat"] <= 1.0
        assert pts[1]["p_hat"] <= pts[0]["p_hat"] + 0.05

    est = fm.simulate_conditional_outage(2, 1, 2.0, 100.0, trials=50000, seed=3)
    assert 0.0 < est["p_hat"] < 1.0
    assert est["ci_lo"] <= est["p_hat"] <= est["ci_hi"]

    print("python smoke test: OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())
