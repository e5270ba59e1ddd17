"""Two-bit noise modulator and the mean/second-moment threshold detector."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from gqnm import _kernels
from gqnm.noise import NoiseModel, RngStream, variance


class DetectorMode(enum.Enum):
    PAPER_THRESHOLD = "paper-threshold"
    # Extension: compares the centred sample variance (m2 - mean**2) with th_v.
    MEAN_COMPENSATED = "mean-compensated"


@dataclass(frozen=True)
class SchemeParams:
    """A GQNM scheme: mean biases, low/high variance noise classes, samples per symbol.

    ``binary=True`` admits the classical single-bit mode where ``m_L == m_H``.
    """

    m_L: float
    m_H: float
    low: NoiseModel
    high: NoiseModel
    N: int
    binary: bool = False

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if self.binary:
            if self.m_L != self.m_H:
                raise ValueError("binary mode requires m_L == m_H")
        elif not self.m_L < self.m_H:
            raise ValueError(f"need m_L < m_H, got {self.m_L!r}, {self.m_H!r}")
        if not variance(self.low) < variance(self.high):
            raise ValueError("variance(low) must be smaller than variance(high)")

    @property
    def family(self) -> str:
        """Common family name of both classes, or ``"mixed"``."""
        if self.low.family == self.high.family:
            return self.low.family
        return "mixed"

    def with_n(self, n: int) -> SchemeParams:
        return SchemeParams(self.m_L, self.m_H, self.low, self.high, n, self.binary)

    def scaled(self, c: float) -> SchemeParams:
        return SchemeParams(
            self.m_L * c, self.m_H * c, self.low.scaled(c), self.high.scaled(c),
            self.N, self.binary,
        )


@dataclass(frozen=True)
class BitPair:
    b0: int
    b1: int

    def __post_init__(self):
        if self.b0 not in (0, 1) or self.b1 not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {self.b0!r}, {self.b1!r}")

    def __str__(self):
        return f"{self.b0}{self.b1}"


ALL_BITS = tuple(BitPair(b0, b1) for b0 in (0, 1) for b1 in (0, 1))


@dataclass(frozen=True)
class Thresholds:
    th_m: float
    th_v: float

    def __post_init__(self):
        if not self.th_v > 0:
            raise ValueError(f"th_v must be > 0, got {self.th_v!r}")


@dataclass(frozen=True)
class SymbolStats:
    sample_mean: float
    raw_second_moment: float


def case_mean(scheme: SchemeParams, bits: BitPair) -> float:
    return scheme.m_H if bits.b0 else scheme.m_L


def case_tx_variance(scheme: SchemeParams, bits: BitPair) -> float:
    return variance(scheme.high if bits.b1 else scheme.low)


def modulate(scheme: SchemeParams, bits: BitPair, stream: RngStream) -> np.ndarray:
    """N samples of ``case_mean + v`` with ``v`` drawn from the class picked by b1."""
    out = np.empty(scheme.N)
    stream.fill_modulated(out, case_mean(scheme, bits), scheme.high if bits.b1 else scheme.low)
    return out


def thresholds(scheme: SchemeParams) -> Thresholds:
    # Midpoints of the transmit-side designs; for Laplace classes this is lam0**2 + lam1**2.
    return Thresholds(
        th_m=(scheme.m_L + scheme.m_H) / 2,
        th_v=(variance(scheme.low) + variance(scheme.high)) / 2,
    )


def statistics(received) -> SymbolStats:
    """Sample mean and raw (uncentred) second moment of one received symbol."""
    samples = np.ascontiguousarray(received, dtype=np.float64)
    if samples.ndim != 1 or samples.size == 0:
        raise ValueError("statistics needs a non-empty one-dimensional symbol")
    mean, m2 = _kernels.moments(samples)
    return SymbolStats(mean, m2)


def detect(
    stats: SymbolStats,
    th: Thresholds,
    mode: DetectorMode = DetectorMode.PAPER_THRESHOLD,
) -> BitPair:
    """Strict-greater decisions: a statistic equal to its threshold decodes as 0."""
    b0, b1 = _kernels.decide(
        stats.sample_mean, stats.raw_second_moment, th.th_m, th.th_v,
        mode is DetectorMode.MEAN_COMPENSATED,
    )
    return BitPair(b0, b1)
