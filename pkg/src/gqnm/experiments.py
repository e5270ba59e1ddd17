"""Parameter sweeps over sigma_w or N, with CSV and SVG export."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

import numpy as np

from gqnm import analytics
from gqnm.analytics import TheoryBep, TheoryMode, UnsupportedTheoryError
from gqnm.modem import DetectorMode, SchemeParams
from gqnm.montecarlo import BepEstimate, TrialPlan, run
from gqnm.noise import Fidelity
from gqnm.presets import PROFILE, profile_schemes

CSV_COLUMNS = (
    "variable_name", "variable_value", "scheme",
    "sim_pb0", "sim_pb1", "sim_pb", "se_pb0", "se_pb1",
    "theory_pb0", "theory_pb1", "theory_pb",
)
NA = "n/a"


class SweepVariable(enum.Enum):
    SIGMA_W = "sigma_w"
    SAMPLES_N = "N"


class SweepError(ValueError):
    """A sweep point could not be built; the message names the point."""


@dataclass(frozen=True)
class SweepSpec:
    variable: SweepVariable
    grid: tuple
    schemes: tuple[tuple[str, SchemeParams], ...]
    num_symbols: int
    master_seed: int = 0
    sigma_w: float = PROFILE["sigma_w"]
    theory_mode: TheoryMode = TheoryMode.N_DIVIDED
    fidelity: Fidelity = Fidelity.EXACT
    detector_mode: DetectorMode = DetectorMode.PAPER_THRESHOLD

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(self.grid))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if not self.grid:
            raise ValueError("sweep grid is empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if self.variable is SweepVariable.SIGMA_W:
            if self.grid[0] <= 0:
                raise ValueError("sigma_w grid values must be > 0")
        elif any(int(v) != v or v < 2 for v in self.grid):
            raise ValueError("N grid values must be integers >= 2")
        if not self.schemes:
            raise ValueError("sweep needs at least one scheme")
        names = [name for name, _ in self.schemes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate scheme names: {names}")
        if self.num_symbols < 1:
            raise ValueError("num_symbols must be >= 1")

    def point(self, scheme: SchemeParams, value) -> tuple[SchemeParams, float]:
        """Scheme and sigma_w in effect at one grid value."""
        if self.variable is SweepVariable.SIGMA_W:
            return scheme, float(value)
        return scheme.with_n(int(value)), self.sigma_w


@dataclass(frozen=True)
class SweepRow:
    variable: SweepVariable
    value: float
    scheme: str
    sim: BepEstimate
    theory: TheoryBep | None

    def numbers(self) -> dict[str, float | None]:
        th = self.theory
        return {
            "variable_value": float(self.value),
            "sim_pb0": self.sim.p_b0,
            "sim_pb1": self.sim.p_b1,
            "sim_pb": self.sim.p_b,
            "se_pb0": self.sim.se_b0,
            "se_pb1": self.sim.se_b1,
            "theory_pb0": th.p_b0 if th else None,
            "theory_pb1": th.p_b1 if th else None,
            "theory_pb": th.p_b if th else None,
        }


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    def sorted_rows(self) -> list[SweepRow]:
        return sorted(self.rows, key=lambda r: (r.scheme, r.value))

    def select(self, scheme: str) -> list[SweepRow]:
        return [r for r in self.sorted_rows() if r.scheme == scheme]


def point_seed(master_seed: int, scheme_index: int, grid_index: int) -> int:
    """Independent, reproducible seed for one (scheme, grid point) cell."""
    ss = np.random.SeedSequence(master_seed % (1 << 64), spawn_key=(scheme_index, grid_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def theory_for(scheme: SchemeParams, sigma_w: float, spec_theory=TheoryMode.N_DIVIDED,
               fidelity=Fidelity.EXACT) -> TheoryBep | None:
    try:
        return analytics.bep_total(scheme, sigma_w, scheme.N, spec_theory, fidelity)
    except UnsupportedTheoryError:
        return None


def sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    rows = []
    for i, (name, base) in enumerate(spec.schemes):
        for j, value in enumerate(spec.grid):
            try:
                scheme, sigma_w = spec.point(base, value)
                plan = TrialPlan(scheme, sigma_w, spec.num_symbols,
                                 point_seed(spec.master_seed, i, j), spec.detector_mode)
                theory = theory_for(scheme, sigma_w, spec.theory_mode, spec.fidelity)
            except ValueError as exc:
                raise SweepError(
                    f"scheme {name!r} at {spec.variable.value}={value!r}: {exc}"
                ) from exc
            rows.append(SweepRow(spec.variable, float(value), name, run(plan, workers), theory))
    return SweepResult(tuple(rows))


def fig4_grid(points: int = 12) -> tuple[float, ...]:
    return tuple(float(v) for v in np.logspace(-5.2, -4.0, points))


def fig4_spec(num_symbols: int = 100_000, master_seed: int = 0, p: float = 0.5,
              points: int = 12) -> SweepSpec:
    """sigma_w from 10**-5.2 to 1e-4, N = 10, the three power-matched schemes."""
    return SweepSpec(SweepVariable.SIGMA_W, fig4_grid(points),
                     tuple(profile_schemes(PROFILE["N"], p).items()), num_symbols, master_seed)


def fig5_spec(num_symbols: int = 100_000, master_seed: int = 0, p: float = 0.5) -> SweepSpec:
    """N from 5 to 40 in steps of 5 at sigma_w = 2e-5."""
    return SweepSpec(SweepVariable.SAMPLES_N, tuple(range(5, 41, 5)),
                     tuple(profile_schemes(PROFILE["N"], p).items()), num_symbols, master_seed)


def fmt(x: float | None) -> str:
    return NA if x is None else f"{x:.8e}"


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.sorted_rows():
        nums = row.numbers()
        writer.writerow(
            [row.variable.value, fmt(nums["variable_value"]), row.scheme]
            + [fmt(nums[c]) for c in CSV_COLUMNS[3:]]
        )
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    """Read a document written by ``to_csv``; ``n/a`` becomes ``None``."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
    out = []
    for rec in reader:
        parsed = {"variable_name": rec["variable_name"], "scheme": rec["scheme"]}
        for col in CSV_COLUMNS[3:] + ("variable_value",):
            parsed[col] = None if rec[col] == NA else float(rec[col])
        out.append(parsed)
    return out


_SERIES = (("pb0", "p_b0", "o"), ("pb1", "p_b1", "s"), ("pb", "p_b", "^"))


def to_svg(result: SweepResult) -> str:
    """BEP-versus-variable chart: markers for simulation, dashed lines for theory."""
    kinds = {r.variable for r in result.rows}
    if len(kinds) != 1:
        raise ValueError("to_svg needs rows that all share one sweep variable")
    (kind,) = kinds

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rc = {"svg.hashsalt": "gqnm", "svg.fonttype": "none", "path.simplify": False}
    with matplotlib.rc_context(rc):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        schemes = sorted({r.scheme for r in result.rows})
        colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
        for ci, name in enumerate(schemes):
            rows = result.select(name)
            x = np.array([r.value for r in rows])
            color = colors[ci % len(colors)]
            for key, label, marker in _SERIES:
                sim = np.array([r.numbers()["sim_" + key] for r in rows])
                keep = sim > 0
                ax.plot(x[keep], sim[keep], linestyle="none", marker=marker, color=color,
                        label=f"{name} {label} sim", gid=f"sim-{name}-{key}")
                th = [r.numbers()["theory_" + key] for r in rows]
                if all(t is not None and t > 0 for t in th):
                    ax.plot(x, th, linestyle="--", color=color, label=f"{name} {label} theory",
                            gid=f"theory-{name}-{key}")
        ax.set_yscale("log")
        if kind is SweepVariable.SIGMA_W:
            ax.set_xscale("log")
            ax.set_xlabel("channel noise std sigma_w (V)")
        else:
            ax.set_xlabel("samples per symbol N")
        ax.set_ylabel("bit error probability")
        ax.grid(True, which="both", linewidth=0.3)
        ax.legend(fontsize=6, ncol=2)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()

