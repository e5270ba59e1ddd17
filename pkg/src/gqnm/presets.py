"""Built-in "paper-sec4" profile: the three power-matched study schemes."""

from __future__ import annotations

from gqnm.analytics import match_power_laplace, match_power_motg, transmit_power
from gqnm.modem import SchemeParams
from gqnm.noise import Fidelity, Gaussian, Laplacian, Mixture

PROFILE_NAME = "paper-sec4"

PROFILE = {
    "m_L": 1e-3,
    "m_H": 1e-2,
    "sigma0": 1e-3,
    "sigma1": 20e-3,
    "sigma0L": 5e-4,
    "sigma1L": 1e-3,
    "sigma0H": 5e-3,
    "lambda0": 1e-4,
    "sigma_w": 2e-5,
    "N": 10,
    # Published rounded values of the power-matched parameters.
    "sigma1H_published": 21e-3,
    "lambda1_published": 14.2e-3,
}

SCHEME_NAMES = ("GG", "GMoTG", "GLAP")


def gg_scheme(N: int = 10, m_L=1e-3, m_H=1e-2, sigma0=1e-3, sigma1=20e-3) -> SchemeParams:
    return SchemeParams(m_L, m_H, Gaussian(sigma0), Gaussian(sigma1), N)


def gmotg_scheme(
    N: int = 10,
    p: float = 0.5,
    sigma1H: float | None = None,
    fidelity: Fidelity = Fidelity.EXACT,
    target_power: float | None = None,
) -> SchemeParams:
    """Mixture scheme; ``sigma1H`` defaults to the value matching the GG power."""
    c = PROFILE
    if sigma1H is None:
        target = transmit_power(gg_scheme()) if target_power is None else target_power
        sigma1H = match_power_motg(
            target, p, c["sigma0L"], c["sigma1L"], c["sigma0H"], c["m_L"], c["m_H"], fidelity
        )
    return SchemeParams(
        c["m_L"], c["m_H"],
        Mixture(p, c["sigma0L"], c["sigma1L"]),
        Mixture(p, c["sigma0H"], sigma1H),
        N,
    )


def glap_scheme(
    N: int = 10, lambda1: float | None = None, target_power: float | None = None
) -> SchemeParams:
    """Laplacian scheme; ``lambda1`` defaults to the value matching the GG power."""
    c = PROFILE
    if lambda1 is None:
        target = transmit_power(gg_scheme()) if target_power is None else target_power
        lambda1 = match_power_laplace(target, c["lambda0"], c["m_L"], c["m_H"])
    return SchemeParams(c["m_L"], c["m_H"], Laplacian(c["lambda0"]), Laplacian(lambda1), N)


def profile_schemes(N: int = 10, p: float = 0.5) -> dict[str, SchemeParams]:
    return {"GG": gg_scheme(N), "GMoTG": gmotg_scheme(N, p), "GLAP": glap_scheme(N)}
