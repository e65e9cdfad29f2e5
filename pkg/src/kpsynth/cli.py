"""Command-line driver: ``kpsynth {solve,project,geodesic,reachset,strata,verify}``.

Exit codes: 0 success, 1 failed verification, 2 bad input, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import liegroup as lg
from .exceptions import InvalidInputError, LiftError, NoEstimateError, NumericalFailure
from .geodesics import rows_to_csv, rows_to_json, sample
from .orbitspace import OrbitPoint, project, representative, strata_map
from .reachable import default_times, export_frontiers
from .synthesis import solve

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3

SUBCOMMANDS = ("solve", "project", "geodesic", "reachset", "strata", "verify")
_NEEDS_TARGET = ("solve", "project", "geodesic")
_MODES = {"half": "half_disc", "full": "full_disc"}


@dataclass
class CommandConfig:
    subcommand: str
    target_file: str | None = None
    orbit: tuple[float, float] | None = None
    out: str | None = None
    fmt: str = "json"
    mode: str = "half_disc"
    times: list[float] | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InvalidInputError("unknown subcommand %r" % self.subcommand)
        if self.target_file is not None and self.orbit is not None:
            raise InvalidInputError("give either --target or --orbit, not both")
        if self.subcommand in _NEEDS_TARGET and self.target_file is None and self.orbit is None:
            raise InvalidInputError("%s needs --target FILE or --orbit RHO THETA" % self.subcommand)
        if self.fmt not in ("json", "csv"):
            raise InvalidInputError("format must be json or csv")


def read_matrix(path) -> np.ndarray:
    """3x3 rotation from a JSON array or three lines of three numbers."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            data = [[float(v) for v in line.split()] for line in text.splitlines() if line.strip()]
        except ValueError as exc:
            raise InvalidInputError("cannot parse matrix file %s: %s" % (path, exc)) from exc
    m = np.asarray(data, dtype=float)
    if m.shape != (3, 3):
        raise InvalidInputError("matrix file %s must hold a 3x3 array, got shape %s" % (path, m.shape))
    return lg.check_rotation(m)


def _target(cfg: CommandConfig) -> np.ndarray:
    if cfg.target_file is not None:
        return read_matrix(cfg.target_file)
    rho, theta = cfg.orbit
    return representative(OrbitPoint(rho, theta))


def _flat_csv(d: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in d.items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                w.writerow(["%s.%s" % (k, kk), vv])
        elif isinstance(v, (list, tuple)):
            for i, vv in enumerate(v):
                w.writerow(["%s[%d]" % (k, i), vv])
        else:
            w.writerow([k, v])
    return buf.getvalue()


def _table_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _emit(cfg: CommandConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(cfg):
    d = solve(_target(cfg)).to_dict()
    _emit(cfg, json.dumps(d, indent=2) + "\n" if cfg.fmt == "json" else _flat_csv(d))


def _cmd_project(cfg):
    d = project(_target(cfg), cfg.mode).to_dict()
    _emit(cfg, json.dumps(d, indent=2) + "\n" if cfg.fmt == "json" else _flat_csv(d))


def _cmd_geodesic(cfg):
    res = solve(_target(cfg))
    if cfg.times:
        times = cfg.times
    elif res.T_min > 0.0:
        times = np.linspace(0.0, res.T_min, 101)
    else:
        times = [0.0]
    rows = sample(res.spec, times, cfg.mode)
    _emit(cfg, rows_to_json(rows) + "\n" if cfg.fmt == "json" else rows_to_csv(rows))


def _cmd_reachset(cfg):
    times = cfg.times or default_times()
    for T in times:
        if not (0.0 < T <= math.pi * math.sqrt(3.0) + 1e-12):
            raise InvalidInputError("times must lie in (0, pi*sqrt(3)], got %r" % T)
    names = export_frontiers(times, cfg.out or "frontiers", cfg.fmt)
    sys.stdout.write("\n".join(names) + "\n")


def _cmd_strata(cfg):
    rows = strata_map(mode=cfg.mode)
    _emit(cfg, json.dumps(rows) + "\n" if cfg.fmt == "json" else _table_csv(rows))


def _cmd_verify(cfg):
    from .acceptance import run_all

    results = run_all(cfg.seed, echo=lambda line: print(line, flush=True))
    if cfg.out:
        report = [{"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail,
                   **({"oracle": r.data["rows"]} if "rows" in r.data else {})} for r in results]
        Path(cfg.out).write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


_HANDLERS = {
    "solve": _cmd_solve,
    "project": _cmd_project,
    "geodesic": _cmd_geodesic,
    "reachset": _cmd_reachset,
    "strata": _cmd_strata,
    "verify": _cmd_verify,
}


def run(cfg: CommandConfig) -> int:
    try:
        code = _HANDLERS[cfg.subcommand](cfg)
    except (InvalidInputError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, LiftError, NoEstimateError) as exc:
        print("solver failure: %s" % exc, file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK if code is None else code


def _times(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected T1,T2,...") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--target", metavar="FILE", help="3x3 rotation (JSON array or 3 lines of 3 numbers)")
    src.add_argument("--orbit", nargs=2, type=float, metavar=("RHO", "THETA"), help="orbit coordinates")
    common.add_argument("--out", metavar="PATH", help="output file (directory for reachset)")
    common.add_argument("--format", choices=("json", "csv"), help="default: json for solve/project, csv otherwise")
    common.add_argument("--mode", choices=("half", "full"), default="half")
    common.add_argument("--times", type=_times, metavar="T1,T2,...")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="kpsynth", description="Time-optimal K-P synthesis on SO(3).")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "solve": "minimum time and optimal geodesic for a target",
        "project": "orbit-space coordinates of a target",
        "geodesic": "sample the optimal geodesic to a target",
        "reachset": "frontier curves of the reachable sets",
        "strata": "orbit-type map over a disc grid",
        "verify": "run the acceptance checks",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse(argv=None) -> CommandConfig:
    ns = build_parser().parse_args(argv)
    return CommandConfig(
        subcommand=ns.subcommand,
        target_file=ns.target,
        orbit=tuple(ns.orbit) if ns.orbit else None,
        out=ns.out,
        fmt=ns.format or ("json" if ns.subcommand in ("solve", "project", "verify") else "csv"),
        mode=_MODES[ns.mode],
        times=ns.times,
        seed=ns.seed,
    )


def main(argv=None) -> int:
    try:
        cfg = parse(argv)
    except InvalidInputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)
