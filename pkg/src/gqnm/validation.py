"""Quick self-check of the library invariants, used by ``gqnm validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gqnm import analytics
from gqnm.modem import thresholds
from gqnm.montecarlo import TrialPlan, run
from gqnm.noise import Fidelity, Gaussian, Laplacian, Mixture, fourth_moment, substream, variance
from gqnm.presets import PROFILE, gg_scheme, profile_schemes


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _moment_checks(draws: int, seed: int) -> list[Check]:
    out = []
    models = [
        Gaussian(PROFILE["sigma0"]),
        Mixture(0.5, PROFILE["sigma0L"], PROFILE["sigma1L"]),
        Laplacian(PROFILE["lambda0"]),
    ]
    for i, model in enumerate(models):
        x = substream(seed, i).sample(model, draws)
        x2 = x * x
        var_z = (x2.mean() - variance(model)) / (x2.std() / math.sqrt(draws))
        x4 = x2 * x2
        m4_z = (x4.mean() - fourth_moment(model)) / (x4.std() / math.sqrt(draws))
        ok = abs(var_z) < 5 and abs(m4_z) < 5
        out.append(Check(f"moments[{model.family}]", ok,
                         f"variance z={var_z:+.2f}, fourth moment z={m4_z:+.2f}"))
    return out


def run_checks(draws: int = 200_000, symbols: int = 20_000, seed: int = 1) -> list[Check]:
    checks = _moment_checks(draws, seed)

    xs = np.linspace(-8, 8, 1001)
    sym = float(np.max(np.abs(analytics.q(xs) + analytics.q(-xs) - 1.0)))
    steps = np.diff(analytics.q(xs))
    # below about -5.5, q(x) sits within a few ulps of 1 and consecutive values may round equal
    mono = bool(np.all(steps <= 0) and np.all(steps[xs[:-1] >= -5.5] < 0))
    checks.append(Check("q symmetry and monotonicity", sym <= 1e-12 and mono,
                        f"max |q(x)+q(-x)-1| = {sym:.2e}"))

    c = PROFILE
    target = analytics.transmit_power(gg_scheme())
    lam1 = analytics.match_power_laplace(target, c["lambda0"], c["m_L"], c["m_H"])
    s1h = analytics.match_power_motg(target, 0.5, c["sigma0L"], c["sigma1L"], c["sigma0H"],
                                     c["m_L"], c["m_H"])
    powers = {name: analytics.transmit_power(s) for name, s in profile_schemes().items()}
    spread = (max(powers.values()) - min(powers.values())) / target
    checks.append(Check("power matching", spread <= 1e-12,
                        f"lambda1={lam1:.9e}, sigma1H={s1h:.9e}, relative spread={spread:.1e}"))

    th = thresholds(gg_scheme())
    scaled = thresholds(gg_scheme().scaled(3.0))
    ok = math.isclose(scaled.th_m, 3 * th.th_m) and math.isclose(scaled.th_v, 9 * th.th_v)
    checks.append(Check("threshold scaling", ok, f"th_m={th.th_m:.9e}, th_v={th.th_v:.9e}"))

    plan = TrialPlan(gg_scheme(), c["sigma_w"], symbols, seed)
    counts = {w: run(plan, workers=w) for w in (1, 2, 8)}
    same = len({(e.errors_b0, e.errors_b1) for e in counts.values()}) == 1
    checks.append(Check("worker determinism", same,
                        ", ".join(f"{w}: {e.errors_b0}/{e.errors_b1}" for w, e in counts.items())))

    exact = analytics.motg_case_moments(profile_schemes()["GMoTG"], c["sigma_w"],
                                        analytics.ALL_BITS[3], fidelity=Fidelity.EXACT)
    literal = analytics.motg_case_moments(profile_schemes()["GMoTG"], c["sigma_w"],
                                          analytics.ALL_BITS[3], fidelity=Fidelity.PAPER_LITERAL)
    checks.append(Check("fidelity switch", literal.var_sigma2 > exact.var_sigma2,
                        f"exact={exact.var_sigma2:.9e}, literal={literal.var_sigma2:.9e}"))
    return checks
