"""Monte Carlo BEP estimation, deterministic under any worker partitioning."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from gqnm import _kernels
from gqnm.channel import awgn
from gqnm.modem import (
    BitPair,
    DetectorMode,
    SchemeParams,
    detect,
    modulate,
    statistics,
    thresholds,
)
from gqnm.noise import RngStream, _split_seed, substream

CHUNK = 1 << 15


@dataclass(frozen=True)
class TrialPlan:
    scheme: SchemeParams
    sigma_w: float
    num_symbols: int
    master_seed: int = 0
    detector_mode: DetectorMode = DetectorMode.PAPER_THRESHOLD

    def __post_init__(self):
        if int(self.num_symbols) != self.num_symbols or self.num_symbols < 1:
            raise ValueError(f"num_symbols must be a positive integer, got {self.num_symbols!r}")
        if not (math.isfinite(self.sigma_w) and self.sigma_w >= 0):
            raise ValueError(f"sigma_w must be finite and >= 0, got {self.sigma_w!r}")


@dataclass(frozen=True)
class BepEstimate:
    symbols: int
    errors_b0: int
    errors_b1: int

    @property
    def p_b0(self) -> float:
        return self.errors_b0 / self.symbols

    @property
    def p_b1(self) -> float:
        return self.errors_b1 / self.symbols

    @property
    def p_b(self) -> float:
        return (self.p_b0 + self.p_b1) / 2

    @property
    def se_b0(self) -> float:
        return _binomial_se(self.p_b0, self.symbols)

    @property
    def se_b1(self) -> float:
        return _binomial_se(self.p_b1, self.symbols)

    def ci_b0(self, level: float = 0.95) -> tuple[float, float]:
        return wilson_ci(self.errors_b0, self.symbols, level)

    def ci_b1(self, level: float = 0.95) -> tuple[float, float]:
        return wilson_ci(self.errors_b1, self.symbols, level)


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def default_workers() -> int:
    """Worker count from ``GQNM_WORKERS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get("GQNM_WORKERS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GQNM_WORKERS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"GQNM_WORKERS must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def _count_range(plan: TrialPlan, start: int, stop: int) -> tuple[int, int]:
    scheme = plan.scheme
    th = thresholds(scheme)
    k0, k1 = _split_seed(plan.master_seed)
    e0, e1 = _kernels.run_range(
        start, stop, k0, k1, scheme.N, float(scheme.m_L), float(scheme.m_H),
        np.array(scheme.low.params(), dtype=np.float64),
        np.array(scheme.high.params(), dtype=np.float64),
        float(plan.sigma_w), th.th_m, th.th_v,
        plan.detector_mode is DetectorMode.MEAN_COMPENSATED,
    )
    return int(e0), int(e1)


def run(plan: TrialPlan, workers: int | None = None) -> BepEstimate:
    """Simulate ``plan.num_symbols`` symbols; symbol ``k`` uses ``substream(seed, k)``."""
    n = plan.num_symbols
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    ranges = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]
    if workers == 1 or len(ranges) == 1:
        counts = [_count_range(plan, a, b) for a, b in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda r: _count_range(plan, *r), ranges))
    return BepEstimate(n, sum(c[0] for c in counts), sum(c[1] for c in counts))


def transmit_symbol(plan: TrialPlan, k: int) -> tuple[BitPair, BitPair]:
    """Reference path for symbol ``k`` built from the public operations.

    Returns ``(sent, decided)`` and consumes the stream in the same order as
    the compiled engine.
    """
    stream: RngStream = substream(plan.master_seed, k)
    bits = BitPair(int(stream.uniform() < 0.5), int(stream.uniform() < 0.5))
    rx = awgn(modulate(plan.scheme, bits, stream), plan.sigma_w, stream)
    return bits, detect(statistics(rx), thresholds(plan.scheme), plan.detector_mode)


def wilson_ci(errors: int, symbols: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if symbols < 1 or errors < 0 or errors > symbols:
        raise ValueError(f"invalid counts: {errors} errors out of {symbols}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level!r}")
    z = NormalDist().inv_cdf(0.5 + level / 2)
    phat = errors / symbols
    z2n = z * z / symbols
    denom = 1.0 + z2n
    centre = (phat + z2n / 2) / denom
    half = z / denom * math.sqrt(phat * (1.0 - phat) / symbols + z2n / (4 * symbols))
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == symbols else min(1.0, centre + half)
    return lo, hi
