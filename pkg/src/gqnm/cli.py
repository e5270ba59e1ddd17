"""Command-line frontend: ``gqnm theory|simulate|sweep|power-match|validate``."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import tempfile
from pathlib import Path

from gqnm import analytics, config, experiments
from gqnm.analytics import InfeasiblePowerError, UnsupportedTheoryError
from gqnm.experiments import SweepError, SweepSpec, SweepVariable, fmt
from gqnm.modem import DetectorMode
from gqnm.montecarlo import TrialPlan, run
from gqnm.noise import Fidelity
from gqnm.presets import PROFILE, gg_scheme

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2

_FAMILY_ALIASES = {
    "gaussian": "gaussian", "gg": "gaussian",
    "mixture": "mixture", "motg": "mixture", "gmotg": "mixture",
    "laplace": "laplacian", "laplacian": "laplacian", "glap": "laplacian",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise config.ConfigError(message)


def _common(p: argparse.ArgumentParser, simulate: bool) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--family", choices=sorted(_FAMILY_ALIASES), help="restrict to one family")
    p.add_argument("--scheme", action="append", help="restrict to named schemes")
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--sigma-w", type=float, dest="sigma_w")
    p.add_argument("--p", type=float, help="mixture weight for every mixture scheme")
    p.add_argument("--fidelity", choices=[f.value for f in Fidelity])
    p.add_argument("--theory-mode", choices=[t.value for t in analytics.TheoryMode])
    if simulate:
        p.add_argument("--symbols", type=int, dest="num_symbols")
        p.add_argument("--seed", type=int, dest="master_seed")
        p.add_argument("--detector", dest="detector_mode",
                       choices=[d.value for d in DetectorMode])
        p.add_argument("--workers", type=int, help="default: $GQNM_WORKERS, 0 = all CPUs")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gqnm", description="Generalized quadratic noise modulation lab")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("theory", help="closed-form BEPs at one operating point"), False)
    _common(sub.add_parser("simulate", help="Monte Carlo BEPs at one operating point"), True)

    sw = sub.add_parser("sweep", help="sigma_w or N sweeps (fig4 / fig5 presets)")
    _common(sw, True)
    sw.add_argument("--preset", choices=["fig4", "fig5"])
    sw.add_argument("--variable", choices=["sigma_w", "N"])
    sw.add_argument("--grid", help="comma-separated grid values")
    sw.add_argument("--out", help="CSV output path")
    sw.add_argument("--svg", help="SVG output path")

    pm = sub.add_parser("power-match", help="solve lambda1 or sigma1H for a target power")
    pm.add_argument("--family", required=True, choices=["laplace", "laplacian", "mixture", "motg"])
    pm.add_argument("--target", type=float, help="default: the GG transmit power")
    pm.add_argument("--mL", type=float, default=PROFILE["m_L"])
    pm.add_argument("--mH", type=float, default=PROFILE["m_H"])
    pm.add_argument("--lambda0", type=float, default=PROFILE["lambda0"])
    pm.add_argument("--p", type=float, default=0.5)
    pm.add_argument("--sigma0L", type=float, default=PROFILE["sigma0L"])
    pm.add_argument("--sigma1L", type=float, default=PROFILE["sigma1L"])
    pm.add_argument("--sigma0H", type=float, default=PROFILE["sigma0H"])
    pm.add_argument("--fidelity", choices=[f.value for f in Fidelity], default="exact")

    va = sub.add_parser("validate", help="run the invariant self-check")
    va.add_argument("--draws", type=int, default=200_000)
    va.add_argument("--symbols", type=int, default=20_000)
    va.add_argument("--seed", type=int, default=1)
    return parser


def _load(args) -> config.RunConfig:
    doc = config.load(args.config)
    for key in ("N", "sigma_w", "num_symbols", "master_seed", "fidelity", "theory_mode",
                "detector_mode"):
        value = getattr(args, key, None)
        if value is not None:
            doc[key] = value
    if args.p is not None:
        for entry in doc["schemes"]:
            if entry["family"] == "mixture":
                entry["p"] = args.p
    if getattr(args, "preset", None) or getattr(args, "variable", None):
        sweep = dict(doc.get("sweep") or {})
        if args.preset:
            sweep = {"preset": args.preset}
        if args.variable:
            sweep = {"variable": args.variable}
        if args.grid:
            try:
                sweep["grid"] = [float(v) for v in args.grid.split(",")]
            except ValueError:
                raise config.ConfigError(f"--grid: not a list of numbers: {args.grid!r}") from None
        doc["sweep"] = sweep
    for key, flag in (("csv", "out"), ("svg", "svg")):
        value = getattr(args, flag, None)
        if value:
            doc.setdefault("output", {})[key] = value
    cfg = config.resolve(doc)
    schemes = cfg.schemes
    if args.family:
        fam = _FAMILY_ALIASES[args.family]
        schemes = tuple((n, s) for n, s in schemes if s.family == fam)
    if args.scheme:
        unknown = set(args.scheme) - {n for n, _ in cfg.schemes}
        if unknown:
            raise config.ConfigError(f"unknown scheme name(s): {sorted(unknown)}")
        schemes = tuple((n, s) for n, s in schemes if n in args.scheme)
    if not schemes:
        raise config.ConfigError("no scheme matches the --family/--scheme selection")
    return dataclasses.replace(cfg, schemes=schemes)


def _theory(cfg: config.RunConfig, out) -> int:
    print("scheme,N,sigma_w,theory_pb0,theory_pb1,theory_pb", file=out)
    unsupported = []
    for name, scheme in cfg.schemes:
        th = experiments.theory_for(scheme, cfg.sigma_w, cfg.theory_mode, cfg.fidelity)
        if th is None:
            unsupported.append(name)
            print(f"{name},{scheme.N},{fmt(cfg.sigma_w)},n/a,n/a,n/a", file=out)
        else:
            print(f"{name},{scheme.N},{fmt(cfg.sigma_w)},{fmt(th.p_b0)},{fmt(th.p_b1)},"
                  f"{fmt(th.p_b)}", file=out)
    if len(unsupported) == len(cfg.schemes):
        raise UnsupportedTheoryError(
            f"no closed-form BEP for {', '.join(unsupported)} (Laplacian noise is simulation-only)"
        )
    return EXIT_OK


def _simulate(cfg: config.RunConfig, workers, out) -> int:
    print("scheme,N,sigma_w,symbols,sim_pb0,sim_pb1,sim_pb,se_pb0,se_pb1,"
          "theory_pb0,theory_pb1,theory_pb", file=out)
    for name, scheme in cfg.schemes:
        plan = TrialPlan(scheme, cfg.sigma_w, cfg.num_symbols, cfg.master_seed, cfg.detector_mode)
        est = run(plan, workers)
        th = experiments.theory_for(scheme, cfg.sigma_w, cfg.theory_mode, cfg.fidelity)
        theory = [th.p_b0, th.p_b1, th.p_b] if th else [None] * 3
        fields = [est.p_b0, est.p_b1, est.p_b, est.se_b0, est.se_b1] + theory
        print(f"{name},{scheme.N},{fmt(cfg.sigma_w)},{est.symbols},"
              + ",".join(fmt(v) for v in fields), file=out)
    return EXIT_OK


def sweep_spec(cfg: config.RunConfig) -> SweepSpec:
    sweep = cfg.sweep or {}
    preset = sweep.get("preset")
    if preset == "fig4" or (preset is None and sweep.get("variable") == "sigma_w"):
        variable = SweepVariable.SIGMA_W
        grid = sweep.get("grid") or experiments.fig4_grid()
    elif preset == "fig5" or sweep.get("variable") == "N":
        variable = SweepVariable.SAMPLES_N
        grid = sweep.get("grid") or list(range(5, 41, 5))
    else:
        raise config.ConfigError("config field 'sweep': give a preset or a variable")
    if variable is SweepVariable.SAMPLES_N:
        if any(float(v) != int(v) for v in grid):
            raise config.ConfigError("config field 'sweep/grid': N values must be integers")
        grid = [int(v) for v in grid]
    try:
        return SweepSpec(variable, tuple(grid), cfg.schemes, cfg.num_symbols, cfg.master_seed,
                         cfg.sigma_w, cfg.theory_mode, cfg.fidelity, cfg.detector_mode)
    except ValueError as exc:
        raise config.ConfigError(f"config field 'sweep': {exc}") from exc


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _sweep(cfg: config.RunConfig, workers, out) -> int:
    spec = sweep_spec(cfg)
    for key in ("csv", "svg"):
        path = cfg.output.get(key)
        if path and not Path(path).resolve().parent.is_dir():
            raise config.ConfigError(f"config field 'output/{key}': no directory for {path}")
    try:
        result = experiments.sweep(spec, workers)
    except SweepError as exc:
        raise config.ConfigError(str(exc)) from exc
    documents = {"csv": experiments.to_csv(result)}
    if cfg.output.get("svg"):
        documents["svg"] = experiments.to_svg(result)
    # everything is rendered before any file is touched
    for key, text in documents.items():
        if cfg.output.get(key):
            _write_atomic(cfg.output[key], text)
    if not cfg.output.get("csv"):
        out.write(documents["csv"])
    return EXIT_OK


def _power_match(args, out) -> int:
    target = args.target if args.target is not None else analytics.transmit_power(gg_scheme())
    if args.family in ("laplace", "laplacian"):
        lam1 = analytics.match_power_laplace(target, args.lambda0, args.mL, args.mH)
        print(f"lambda1={fmt(lam1)}", file=out)
    else:
        s1h = analytics.match_power_motg(target, args.p, args.sigma0L, args.sigma1L,
                                         args.sigma0H, args.mL, args.mH, Fidelity(args.fidelity))
        print(f"sigma1H={fmt(s1h)}", file=out)
    print(f"target_power={fmt(target)}", file=out)
    return EXIT_OK


def _validate(args, out) -> int:
    from gqnm.validation import run_checks

    checks = run_checks(args.draws, args.symbols, args.seed)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}", file=out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CONFIG


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.command == "power-match":
            return _power_match(args, out)
        if args.command == "validate":
            return _validate(args, out)
        cfg = _load(args)
        if args.command == "theory":
            return _theory(cfg, out)
        workers = getattr(args, "workers", None)
        if args.command == "simulate":
            return _simulate(cfg, workers, out)
        return _sweep(cfg, workers, out)
    except (InfeasiblePowerError, UnsupportedTheoryError) as exc:
        print(f"gqnm: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"gqnm: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
