"""JSON run configuration: schema, defaults from the built-in profile, scheme building."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema
from jsonschema.exceptions import best_match

from gqnm.analytics import (
    InfeasiblePowerError,
    TheoryMode,
    match_power_laplace,
    match_power_motg,
    transmit_power,
)
from gqnm.modem import DetectorMode, SchemeParams
from gqnm.noise import Fidelity, Gaussian, Laplacian, Mixture
from gqnm.presets import PROFILE, PROFILE_NAME

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Malformed or inconsistent configuration; the message names the field."""


_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_MATCH = {"oneOf": [_POS, {"const": "match"}]}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "profile": {"const": PROFILE_NAME},
        "N": {"type": "integer", "minimum": 1},
        "sigma_w": {"type": "number", "minimum": 0},
        "num_symbols": {"type": "integer", "minimum": 1},
        "master_seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "fidelity": {"enum": [f.value for f in Fidelity]},
        "theory_mode": {"enum": [t.value for t in TheoryMode]},
        "detector_mode": {"enum": [d.value for d in DetectorMode]},
        "schemes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "oneOf": [
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["name", "family"],
                        "properties": {
                            "name": {"type": "string", "minLength": 1},
                            "family": {"const": "gaussian"},
                            "m_L": _NUM, "m_H": _NUM, "sigma0": _POS, "sigma1": _POS,
                        },
                    },
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["name", "family"],
                        "properties": {
                            "name": {"type": "string", "minLength": 1},
                            "family": {"const": "mixture"},
                            "m_L": _NUM, "m_H": _NUM,
                            "p": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                            "sigma0L": _POS, "sigma1L": _POS, "sigma0H": _POS,
                            "sigma1H": _MATCH,
                        },
                    },
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["name", "family"],
                        "properties": {
                            "name": {"type": "string", "minLength": 1},
                            "family": {"const": "laplacian"},
                            "m_L": _NUM, "m_H": _NUM, "lambda0": _POS, "lambda1": _MATCH,
                        },
                    },
                ]
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "preset": {"enum": ["fig4", "fig5"]},
                "variable": {"enum": ["sigma_w", "N"]},
                "grid": {"type": "array", "minItems": 1, "items": _NUM},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"csv": {"type": "string"}, "svg": {"type": "string"}},
        },
    },
}

DEFAULTS = {
    "schema_version": SCHEMA_VERSION,
    "profile": PROFILE_NAME,
    "N": PROFILE["N"],
    "sigma_w": PROFILE["sigma_w"],
    "num_symbols": 100_000,
    "master_seed": 0,
    "fidelity": Fidelity.EXACT.value,
    "theory_mode": TheoryMode.N_DIVIDED.value,
    "detector_mode": DetectorMode.PAPER_THRESHOLD.value,
    "schemes": [
        {"name": "GG", "family": "gaussian"},
        {"name": "GMoTG", "family": "mixture"},
        {"name": "GLAP", "family": "laplacian"},
    ],
}

# Parameter defaults per family, from the built-in profile.
_FAMILY_DEFAULTS = {
    "gaussian": {"sigma0": PROFILE["sigma0"], "sigma1": PROFILE["sigma1"]},
    "mixture": {
        "p": 0.5,
        "sigma0L": PROFILE["sigma0L"],
        "sigma1L": PROFILE["sigma1L"],
        "sigma0H": PROFILE["sigma0H"],
        "sigma1H": "match",
    },
    "laplacian": {"lambda0": PROFILE["lambda0"], "lambda1": "match"},
}


def _describe(err: jsonschema.ValidationError) -> str:
    where = "/".join(str(p) for p in err.absolute_path) or "<root>"
    return f"config field {where!r}: {err.message}"


def validate(doc: dict) -> None:
    err = best_match(jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc))
    if err is not None:
        raise ConfigError(_describe(err))


def load(path: str | Path | None) -> dict:
    """Defaults overlaid with a validated JSON document (when given)."""
    doc = copy.deepcopy(DEFAULTS)
    if path is None:
        return doc
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        user = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigError("config document must be a JSON object")
    validate(user)
    doc.update(user)
    return doc


@dataclass(frozen=True)
class RunConfig:
    schemes: tuple[tuple[str, SchemeParams], ...]
    N: int
    sigma_w: float
    num_symbols: int
    master_seed: int
    fidelity: Fidelity
    theory_mode: TheoryMode
    detector_mode: DetectorMode
    sweep: dict | None
    output: dict


def _reference_power(m_L: float, m_H: float) -> float:
    return transmit_power(
        SchemeParams(m_L, m_H, Gaussian(PROFILE["sigma0"]), Gaussian(PROFILE["sigma1"]), 1)
    )


def build_scheme(entry: dict, N: int, fidelity: Fidelity) -> SchemeParams:
    """Scheme from one config entry; ``"match"`` solves for the GG power of the profile."""
    family = entry["family"]
    params = {**_FAMILY_DEFAULTS[family], **entry}
    m_L = params.get("m_L", PROFILE["m_L"])
    m_H = params.get("m_H", PROFILE["m_H"])
    name = params["name"]
    try:
        if family == "gaussian":
            low, high = Gaussian(params["sigma0"]), Gaussian(params["sigma1"])
        elif family == "mixture":
            s1h = params["sigma1H"]
            if s1h == "match":
                s1h = match_power_motg(
                    _reference_power(m_L, m_H), params["p"], params["sigma0L"],
                    params["sigma1L"], params["sigma0H"], m_L, m_H, fidelity,
                )
            low = Mixture(params["p"], params["sigma0L"], params["sigma1L"])
            high = Mixture(params["p"], params["sigma0H"], s1h)
        else:
            lam1 = params["lambda1"]
            if lam1 == "match":
                lam1 = match_power_laplace(_reference_power(m_L, m_H), params["lambda0"], m_L, m_H)
            low, high = Laplacian(params["lambda0"]), Laplacian(lam1)
        return SchemeParams(m_L, m_H, low, high, N)
    except InfeasiblePowerError:
        raise
    except ValueError as exc:
        raise ConfigError(f"scheme {name!r}: {exc}") from exc


def resolve(doc: dict) -> RunConfig:
    validate(doc)
    fidelity = Fidelity(doc["fidelity"])
    names = [s["name"] for s in doc["schemes"]]
    if len(set(names)) != len(names):
        raise ConfigError(f"config field 'schemes': duplicate names {names}")
    schemes = tuple(
        (s["name"], build_scheme(s, doc["N"], fidelity)) for s in doc["schemes"]
    )
    return RunConfig(
        schemes=schemes,
        N=doc["N"],
        sigma_w=float(doc["sigma_w"]),
        num_symbols=doc["num_symbols"],
        master_seed=doc["master_seed"],
        fidelity=fidelity,
        theory_mode=TheoryMode(doc["theory_mode"]),
        detector_mode=DetectorMode(doc["detector_mode"]),
        sweep=doc.get("sweep"),
        output=doc.get("output", {}),
    )
