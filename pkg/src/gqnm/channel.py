"""Real baseband AWGN channel."""

import math

import numpy as np

from gqnm.noise import RngStream


def awgn(tx, sigma_w: float, stream: RngStream) -> np.ndarray:
    """Return ``tx + w`` with ``w`` i.i.d. N(0, sigma_w**2); the input is not modified."""
    if not (math.isfinite(sigma_w) and sigma_w >= 0):
        raise ValueError(f"sigma_w must be finite and >= 0, got {sigma_w!r}")
    out = np.array(tx, dtype=np.float64, copy=True)
    stream.add_normal(out, sigma_w)
    return out
