"""Zero-mean noise families used as modulation alphabets, and their random streams."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from gqnm import _kernels

_U64 = 1 << 64


class Fidelity(enum.Enum):
    """How the mixture fourth moment (and mixture transmit power) is evaluated.

    ``EXACT`` uses the weighted mixture moments. ``PAPER_LITERAL`` drops the
    mixture weights from the fourth moment, ``3 (sigma0**4 + sigma1**4)``, and
    pairs the component variances across classes in the power formula.
    """

    EXACT = "exact"
    PAPER_LITERAL = "paper-literal"


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class Gaussian:
    sigma: float

    family = "gaussian"

    def __post_init__(self):
        _positive("sigma", self.sigma)

    def params(self) -> tuple[int, float, float, float]:
        return (_kernels.GAUSSIAN, self.sigma, 0.0, 0.0)

    def scaled(self, c: float) -> Gaussian:
        return Gaussian(self.sigma * c)


@dataclass(frozen=True)
class Mixture:
    """``p N(0, sigma0**2) + (1 - p) N(0, sigma1**2)`` with ``sigma0 < sigma1``."""

    p: float
    sigma0: float
    sigma1: float

    family = "mixture"

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"mixture weight p must lie in (0, 1), got {self.p!r}")
        _positive("sigma0", self.sigma0)
        _positive("sigma1", self.sigma1)
        if not self.sigma0 < self.sigma1:
            raise ValueError(
                f"mixture requires sigma0 < sigma1, got {self.sigma0!r} >= {self.sigma1!r}"
            )

    def params(self) -> tuple[int, float, float, float]:
        return (_kernels.MIXTURE, self.p, self.sigma0, self.sigma1)

    def scaled(self, c: float) -> Mixture:
        return Mixture(self.p, self.sigma0 * c, self.sigma1 * c)


@dataclass(frozen=True)
class Laplacian:
    """Laplace law with scale ``lam``: density ``exp(-|v| / lam) / (2 lam)``."""

    lam: float

    family = "laplacian"

    def __post_init__(self):
        _positive("lam", self.lam)

    def params(self) -> tuple[int, float, float, float]:
        return (_kernels.LAPLACIAN, self.lam, 0.0, 0.0)

    def scaled(self, c: float) -> Laplacian:
        return Laplacian(self.lam * c)


NoiseModel = Union[Gaussian, Mixture, Laplacian]


def variance(model: NoiseModel) -> float:
    if isinstance(model, Gaussian):
        return model.sigma**2
    if isinstance(model, Mixture):
        return model.p * model.sigma0**2 + (1.0 - model.p) * model.sigma1**2
    if isinstance(model, Laplacian):
        return 2.0 * model.lam**2
    raise TypeError(f"not a noise model: {model!r}")


def fourth_moment(model: NoiseModel, fidelity: Fidelity = Fidelity.EXACT) -> float:
    """E{v**4} of the zero-mean noise."""
    if isinstance(model, Gaussian):
        return 3.0 * model.sigma**4
    if isinstance(model, Mixture):
        if fidelity is Fidelity.PAPER_LITERAL:
            return 3.0 * (model.sigma0**4 + model.sigma1**4)
        return 3.0 * (model.p * model.sigma0**4 + (1.0 - model.p) * model.sigma1**4)
    if isinstance(model, Laplacian):
        return 24.0 * model.lam**4
    raise TypeError(f"not a noise model: {model!r}")


def _split_seed(seed: int) -> tuple[np.uint64, np.uint64]:
    seed %= _U64
    return np.uint64(seed & 0xFFFFFFFF), np.uint64(seed >> 32)


@dataclass(eq=False)
class RngStream:
    """Counter-based random stream keyed by ``(master_seed, stream_index)``.

    Position ``j`` always yields the same uniform, so a stream is a pure
    function of its key; each call advances the position. Single-owner.
    """

    master_seed: int
    stream_index: int
    position: int = 0

    def __post_init__(self):
        self.master_seed %= _U64
        self.stream_index %= _U64
        self._key = _split_seed(self.master_seed)
        self._idx = np.uint64(self.stream_index)

    def uniforms(self, n: int) -> np.ndarray:
        out = np.empty(n)
        _kernels.fill_uniforms(out, self._idx, self.position, *self._key)
        self.position += n
        return out

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])

    def normal(self) -> float:
        return _kernels.inv_norm(self.uniform())

    def fill_modulated(self, out: np.ndarray, mean: float, model: NoiseModel) -> None:
        family, a, b, c = model.params()
        u = self.uniforms(out.shape[0] * _kernels.draws_per_sample(family))
        _kernels.transform_draws(out, float(mean), family, a, b, c, u)

    def sample(self, model: NoiseModel, n: int) -> np.ndarray:
        out = np.empty(n)
        self.fill_modulated(out, 0.0, model)
        return out

    def add_normal(self, samples: np.ndarray, sigma: float) -> None:
        """In place: ``samples += sigma * z``; ``sigma == 0`` consumes nothing."""
        if sigma == 0:
            return
        _kernels.add_noise(samples, float(sigma), self.uniforms(samples.shape[0]))


def substream(master_seed: int, index: int) -> RngStream:
    return RngStream(master_seed, index)


def draw(model: NoiseModel, stream: RngStream) -> float:
    return float(stream.sample(model, 1)[0])
