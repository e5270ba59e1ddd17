"""Generalized quadratic noise modulation: modem, closed-form BEPs and Monte Carlo."""

from gqnm.analytics import (
    CaseMoments,
    InfeasiblePowerError,
    TheoryBep,
    TheoryMode,
    UnsupportedTheoryError,
    bep_b0,
    bep_b1,
    bep_total,
    case_moments,
    gaussian_case_moments,
    match_power_laplace,
    match_power_motg,
    motg_case_moments,
    q,
    solve_mixture_weight,
    transmit_power,
)
from gqnm.channel import awgn
from gqnm.modem import (
    BitPair,
    DetectorMode,
    SchemeParams,
    SymbolStats,
    Thresholds,
    case_mean,
    case_tx_variance,
    detect,
    modulate,
    statistics,
    thresholds,
)
from gqnm.montecarlo import BepEstimate, TrialPlan, run, wilson_ci
from gqnm.noise import (
    Fidelity,
    Gaussian,
    Laplacian,
    Mixture,
    RngStream,
    draw,
    fourth_moment,
    substream,
    variance,
)

__version__ = "0.1.0"
