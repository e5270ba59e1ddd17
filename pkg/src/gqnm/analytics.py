"""Closed-form moments, bit error probabilities, transmit power and power matching."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from gqnm.modem import ALL_BITS, BitPair, SchemeParams, case_mean, case_tx_variance, thresholds
from gqnm.noise import Fidelity, Gaussian, Mixture, fourth_moment, variance

_SQRT2 = math.sqrt(2.0)


class UnsupportedTheoryError(ValueError):
    """No closed-form BEP exists for the requested noise family."""


class InfeasiblePowerError(ValueError):
    def __init__(self, message: str, minimum: float):
        super().__init__(message)
        self.minimum = minimum


class TheoryMode(enum.Enum):
    """Mean-bit theory for mixtures.

    ``N_DIVIDED`` uses the sample-mean variance ``var_r / N``. ``PAPER_LITERAL``
    evaluates the published two-term expressions verbatim, which for mixtures
    omit the ``1/N`` factor.
    """

    N_DIVIDED = "n-divided"
    PAPER_LITERAL = "paper-literal"


def q(x):
    """Gaussian tail probability P(Z > x) via the complementary error function.

    Accepts scalars or arrays; non-finite input raises ``ValueError``.
    """
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("q() requires finite input")
    out = 0.5 * special.erfc(arr / _SQRT2)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CaseMoments:
    """Per-case received mean/variance and the mean/variance of the raw second moment."""

    m_r: float
    var_r: float
    m_sigma2: float
    var_sigma2: float


@dataclass(frozen=True)
class TheoryBep:
    p_b0: float
    p_b1: float
    p_b: float

    @classmethod
    def combine(cls, p_b0: float, p_b1: float) -> TheoryBep:
        return cls(p_b0, p_b1, (p_b0 + p_b1) / 2)


def case_moments(
    scheme: SchemeParams,
    sigma_w: float,
    bits: BitPair,
    N: int | None = None,
    fidelity: Fidelity = Fidelity.EXACT,
) -> CaseMoments:
    """Moments of ``r = m + v + w`` and of ``(1/N) sum r**2`` for one bit case.

    Valid for any zero-mean symmetric noise class, since only the second and
    fourth moments of the noise enter.
    """
    n = scheme.N if N is None else N
    model = scheme.high if bits.b1 else scheme.low
    m = case_mean(scheme, bits)
    ey2 = variance(model)
    ey4 = fourth_moment(model, fidelity)
    sw2 = sigma_w**2
    var_r = ey2 + sw2
    m_sigma2 = m * m + var_r
    ex2 = ey2 + m * m
    ex4 = ey4 + 6.0 * m * m * ey2 + m**4
    er4 = ex4 + 6.0 * ex2 * sw2 + 3.0 * sw2 * sw2
    return CaseMoments(m, var_r, m_sigma2, (er4 - m_sigma2 * m_sigma2) / n)


def gaussian_case_moments(scheme, sigma_w, bits, N=None) -> CaseMoments:
    if not (isinstance(scheme.low, Gaussian) and isinstance(scheme.high, Gaussian)):
        raise ValueError("gaussian_case_moments needs a Gaussian (GG) scheme")
    n = scheme.N if N is None else N
    m = case_mean(scheme, bits)
    var_r = sigma_w**2 + case_tx_variance(scheme, bits)
    return CaseMoments(m, var_r, m * m + var_r, (4 * m * m * var_r + 2 * var_r * var_r) / n)


def motg_case_moments(scheme, sigma_w, bits, N=None, fidelity=Fidelity.EXACT) -> CaseMoments:
    if not (isinstance(scheme.low, Mixture) and isinstance(scheme.high, Mixture)):
        raise ValueError("motg_case_moments needs a mixture (GMoTG) scheme")
    return case_moments(scheme, sigma_w, bits, N, fidelity)


def _theory_family(scheme: SchemeParams) -> str:
    fam = scheme.family
    if fam == "laplacian":
        raise UnsupportedTheoryError(
            "no closed-form BEP for Laplacian noise; use simulation"
        )
    if fam not in ("gaussian", "mixture"):
        raise UnsupportedTheoryError(f"no closed-form BEP for a {fam} scheme")
    return fam


def _moments(scheme, sigma_w, bits, N, fidelity):
    if scheme.family == "gaussian":
        return gaussian_case_moments(scheme, sigma_w, bits, N)
    return motg_case_moments(scheme, sigma_w, bits, N, fidelity)


def bep_b0(
    scheme: SchemeParams,
    sigma_w: float,
    N: int | None = None,
    theory: TheoryMode = TheoryMode.N_DIVIDED,
) -> float:
    """Mean-bit error probability with the sample mean treated as Gaussian."""
    fam = _theory_family(scheme)
    n = scheme.N if N is None else N
    th_m = thresholds(scheme).th_m
    if theory is TheoryMode.PAPER_LITERAL:
        scale = n if fam == "gaussian" else 1
        s_low = math.sqrt((sigma_w**2 + variance(scheme.low)) / scale)
        s_high = math.sqrt((sigma_w**2 + variance(scheme.high)) / scale)
        return 0.5 * (1.0 - q((scheme.m_L - th_m) / s_low) + q((scheme.m_H - th_m) / s_high))
    total = 0.0
    for bits in ALL_BITS:
        cm = _moments(scheme, sigma_w, bits, n, Fidelity.EXACT)
        z = (cm.m_r - th_m) / math.sqrt(cm.var_r / n)
        # b0 = 0 errs when the mean lands above th_m; b0 = 1 when below
        total += q(z) if bits.b0 else q(-z)
    return total / 4


def bep_b1(
    scheme: SchemeParams,
    sigma_w: float,
    N: int | None = None,
    fidelity: Fidelity = Fidelity.EXACT,
) -> float:
    """Variance-bit error probability with the raw second moment treated as Gaussian."""
    _theory_family(scheme)
    n = scheme.N if N is None else N
    th_v = thresholds(scheme).th_v
    total = 0.0
    for bits in ALL_BITS:
        cm = _moments(scheme, sigma_w, bits, n, fidelity)
        z = (cm.m_sigma2 - th_v) / math.sqrt(cm.var_sigma2)
        total += q(z) if bits.b1 else q(-z)
    return total / 4


def bep_total(
    scheme: SchemeParams,
    sigma_w: float,
    N: int | None = None,
    theory: TheoryMode = TheoryMode.N_DIVIDED,
    fidelity: Fidelity = Fidelity.EXACT,
) -> TheoryBep:
    return TheoryBep.combine(
        bep_b0(scheme, sigma_w, N, theory), bep_b1(scheme, sigma_w, N, fidelity)
    )


def transmit_power(scheme: SchemeParams, fidelity: Fidelity = Fidelity.EXACT) -> float:
    """Average E{x**2} over the four equiprobable bit cases."""
    means = (scheme.m_L**2 + scheme.m_H**2) / 2
    low, high = scheme.low, scheme.high
    if (
        fidelity is Fidelity.PAPER_LITERAL
        and isinstance(low, Mixture)
        and isinstance(high, Mixture)
    ):
        if low.p != high.p:
            raise ValueError("the literal mixture power formula needs a shared weight p")
        p = low.p
        return means + 0.5 * (
            p * (low.sigma0**2 + low.sigma1**2) + (1 - p) * (high.sigma0**2 + high.sigma1**2)
        )
    return means + (variance(low) + variance(high)) / 2


def _check_target(target: float, minimum: float, what: str) -> float:
    if not target > minimum:
        raise InfeasiblePowerError(
            f"target power {target:.9e} is not above the minimum achievable "
            f"{minimum:.9e} for {what}",
            minimum,
        )
    return target - minimum


def match_power_laplace(target_power: float, lambda0: float, m_L: float, m_H: float) -> float:
    """Scale ``lambda1`` giving a Laplacian scheme the requested transmit power."""
    minimum = (m_L**2 + m_H**2) / 2 + lambda0**2
    return math.sqrt(_check_target(target_power, minimum, "lambda1"))


def match_power_motg(
    target_power: float,
    p: float,
    sigma0L: float,
    sigma1L: float,
    sigma0H: float,
    m_L: float,
    m_H: float,
    fidelity: Fidelity = Fidelity.EXACT,
) -> float:
    """``sigma1H`` giving a mixture scheme the requested transmit power."""
    means = (m_L**2 + m_H**2) / 2
    if fidelity is Fidelity.PAPER_LITERAL:
        minimum = means + 0.5 * (p * (sigma0L**2 + sigma1L**2) + (1 - p) * sigma0H**2)
    else:
        minimum = means + 0.5 * (p * sigma0L**2 + (1 - p) * sigma1L**2 + p * sigma0H**2)
    excess = _check_target(target_power, minimum, "sigma1H")
    return math.sqrt(2.0 * excess / (1 - p))


def solve_mixture_weight(
    target_power: float,
    sigma0L: float,
    sigma1L: float,
    sigma0H: float,
    sigma1H: float,
    m_L: float,
    m_H: float,
    fidelity: Fidelity = Fidelity.EXACT,
) -> float:
    """Mixture weight ``p`` that meets ``target_power`` for fixed scales (diagnostic).

    Power is affine in ``p``; the result is not range-checked.
    """
    means = (m_L**2 + m_H**2) / 2
    if fidelity is Fidelity.PAPER_LITERAL:
        a = sigma0L**2 + sigma1L**2
        b = sigma0H**2 + sigma1H**2
    else:
        a = sigma0L**2 + sigma0H**2
        b = sigma1L**2 + sigma1H**2
    # 2 (P - means) = p a + (1 - p) b
    return (2 * (target_power - means) - b) / (a - b)

