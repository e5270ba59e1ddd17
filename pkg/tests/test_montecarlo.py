"""Monte Carlo engine: determinism, agreement with the reference path, exact oracles."""

import math
import time
from statistics import NormalDist

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from gqnm.analytics import bep_b0
from gqnm.modem import DetectorMode, SchemeParams, thresholds
from gqnm.montecarlo import (
    BepEstimate,
    TrialPlan,
    default_workers,
    run,
    transmit_symbol,
    wilson_ci,
)
from gqnm.noise import Gaussian

SW = 2e-5


def exact_gg_b1(scheme, sigma_w):
    """Variance-bit BEP of a Gaussian scheme from the noncentral chi-square law.

    For case variance s2 and mean m, N * m2 / s2 ~ chi2'(N, N m**2 / s2).
    """
    th_v, n = thresholds(scheme).th_v, scheme.N
    total = 0.0
    for m in (scheme.m_L, scheme.m_H):
        for model, b1 in ((scheme.low, 0), (scheme.high, 1)):
            s2 = model.sigma**2 + sigma_w**2
            above = stats.ncx2.sf(n * th_v / s2, n, n * m * m / s2)
            total += (1 - above) if b1 else above
    return total / 4


class TestPlanAndEstimate:
    def test_invalid_plans(self, gg):
        with pytest.raises(ValueError):
            TrialPlan(gg, SW, 0)
        with pytest.raises(ValueError):
            TrialPlan(gg, -1.0, 10)

    def test_estimate_identities(self):
        e = BepEstimate(1000, 120, 55)
        assert e.p_b0 == 0.12 and e.p_b1 == 0.055
        assert e.p_b == (e.p_b0 + e.p_b1) / 2
        assert e.se_b0 == pytest.approx(math.sqrt(0.12 * 0.88 / 1000))


class TestWilson:
    def test_zero_errors(self):
        lo, hi = wilson_ci(0, 100)
        assert lo == 0.0 and 0 < hi < 0.05

    def test_half(self):
        lo, hi = wilson_ci(50, 100)
        assert lo < 0.5 < hi
        assert (lo + hi) / 2 == pytest.approx(0.5, abs=1e-12)

    def test_width_shrinks_with_symbols(self):
        widths = [np.subtract(*wilson_ci(10 * k, 10**6 * k)[::-1]) for k in (1, 10, 100)]
        assert widths[0] > widths[1] > widths[2] > 0

    @pytest.mark.parametrize("errors, symbols", [(-1, 10), (11, 10), (0, 0)])
    def test_invalid_counts(self, errors, symbols):
        with pytest.raises(ValueError):
            wilson_ci(errors, symbols)

    @given(n=st.integers(1, 10**7), frac=st.floats(0, 1), level=st.floats(0.5, 0.999))
    def test_endpoints_solve_score_equation(self, n, frac, level):
        k = round(frac * n)
        lo, hi = wilson_ci(k, n, level)
        z = NormalDist().inv_cdf(0.5 + level / 2)
        ph = k / n
        for p in (lo, hi):
            if 0 < p < 1:
                # (ph - p)**2 = z**2 p (1 - p) / n at both interior endpoints
                assert (ph - p) ** 2 == pytest.approx(z * z * p * (1 - p) / n, rel=1e-6, abs=1e-15)
        assert lo <= ph <= hi


class TestDeterminism:
    def test_repeat_is_identical(self, gmotg):
        plan = TrialPlan(gmotg, SW, 50_000, master_seed=3)
        assert run(plan) == run(plan)

    @pytest.mark.parametrize("name", ["gg", "gmotg", "glap"])
    def test_worker_count_does_not_matter(self, name, request):
        plan = TrialPlan(request.getfixturevalue(name), SW, 200_000, master_seed=9)
        results = {run(plan, workers=w) for w in (1, 2, 8)}
        assert len(results) == 1

    def test_seed_changes_result(self, gg):
        a = run(TrialPlan(gg, SW, 100_000, master_seed=1))
        b = run(TrialPlan(gg, SW, 100_000, master_seed=2))
        assert (a.errors_b0, a.errors_b1) != (b.errors_b0, b.errors_b1)

    def test_env_worker_override(self, monkeypatch):
        monkeypatch.setenv("GQNM_WORKERS", "3")
        assert default_workers() == 3
        monkeypatch.setenv("GQNM_WORKERS", "0")
        assert default_workers() >= 1
        monkeypatch.setenv("GQNM_WORKERS", "-2")
        with pytest.raises(ValueError):
            default_workers()

    def test_zero_workers_rejected(self, gg):
        with pytest.raises(ValueError):
            run(TrialPlan(gg, SW, 10), workers=0)


class TestReferencePath:
    @pytest.mark.parametrize("name", ["gg", "gmotg", "glap"])
    @pytest.mark.parametrize("sigma_w", [0.0, SW, 3e-3])
    def test_engine_matches_public_ops(self, name, sigma_w, request):
        plan = TrialPlan(request.getfixturevalue(name), sigma_w, 1500, master_seed=21)
        e0 = e1 = 0
        for k in range(plan.num_symbols):
            sent, got = transmit_symbol(plan, k)
            e0 += sent.b0 != got.b0
            e1 += sent.b1 != got.b1
        est = run(plan)
        assert (est.errors_b0, est.errors_b1) == (e0, e1)

    def test_engine_matches_public_ops_compensated(self, gmotg):
        plan = TrialPlan(gmotg, SW, 1500, 4, DetectorMode.MEAN_COMPENSATED)
        e1 = sum(s.b1 != g.b1 for s, g in (transmit_symbol(plan, k) for k in range(1500)))
        assert run(plan).errors_b1 == e1


class TestStatistics:
    def test_near_noiseless_separability(self):
        s = SchemeParams(0.0, 0.0, Gaussian(1.0), Gaussian(20.0), 10_000, binary=True)
        est = run(TrialPlan(s, 0.0, 1000, master_seed=0))
        assert est.p_b1 < 1e-2

    def test_bits_are_equiprobable(self, gg):
        n = 20_000
        plan = TrialPlan(gg, SW, n)
        ones = sum(transmit_symbol(plan, k)[0].b0 for k in range(n))
        assert abs(ones - n / 2) < 5 * math.sqrt(n) / 2

    def test_gg_mean_bit_matches_theory(self, gg):
        # the sample mean of a Gaussian scheme is exactly Gaussian, so the theory is exact
        est = run(TrialPlan(gg, SW, 1_000_000, master_seed=100))
        assert abs(est.p_b0 - bep_b0(gg, SW)) < 3 * est.se_b0

    @pytest.mark.parametrize("n", [5, 10, 40])
    def test_gg_variance_bit_matches_exact_law(self, gg, n):
        scheme = gg.with_n(n)
        est = run(TrialPlan(scheme, SW, 1_000_000, master_seed=200 + n))
        assert abs(est.p_b1 - exact_gg_b1(scheme, SW)) < 3.5 * est.se_b1

    def test_mean_compensated_mode_runs(self, gg):
        a = run(TrialPlan(gg, SW, 100_000, 1))
        b = run(TrialPlan(gg, SW, 100_000, 1, DetectorMode.MEAN_COMPENSATED))
        assert a.errors_b0 == b.errors_b0
        assert a.errors_b1 != b.errors_b1


def test_throughput_floor(gg):
    """At least 1e6 symbols (N=10) per second on one worker."""
    run(TrialPlan(gg, SW, 1000))
    best = 0.0
    for _ in range(3):
        t = time.perf_counter()
        run(TrialPlan(gg, SW, 1_000_000, master_seed=5), workers=1)
        best = max(best, 1e6 / (time.perf_counter() - t))
    assert best >= 1e6
