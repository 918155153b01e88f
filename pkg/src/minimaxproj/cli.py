"""Command-line front end.

Every command writes one JSON document (to stdout, or to ``--out``).  The
``continuity`` command prints a plain table unless ``--json`` is given.
Exit status is 0 on success, 1 for invalid input or a failed precondition
and 2 when the Remez iteration does not converge.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .duality import MEMBERSHIP_TOL, make_duality_measure, support_check, verify_duality
from .errors import ConvergenceError, MinimaxError, PreconditionError, ValidationError
from .expr import ExprSyntaxError, parse_expr
from .funcspace import AtomicMeasure, GridSpec, Polynomial, sup_norm
from .projector import DEFAULT_MAXITER, DEFAULT_TOL, certify, maximizing_set, project_sequence, remez_project
from .vandermonde import coefficient_bounds, empirical_coefficient_ratio
from .varprobe import PROBE_TOL, exclusion_report, gateaux_at_poly, gateaux_poly_direction

COMMANDS = ("project", "certify", "maxset", "duality", "probe", "gateaux", "bounds", "continuity")
PROBE_PATHS = ("shift", "convex", "scaling")


@dataclass
class CommandConfig:
    command: str
    degree: int | None = None
    tol: float | None = None
    resolution: int = 4097
    out: str | None = None
    json: bool = False
    paths: tuple = PROBE_PATHS
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.tol is not None and not self.tol > 0:
            raise ValidationError(f"--tol must be positive, got {self.tol!r}")
        if self.degree is not None and self.degree < 0:
            raise ValidationError(f"--degree must be nonnegative, got {self.degree!r}")
        if self.resolution < 2:
            raise ValidationError(f"--grid must be at least 2, got {self.resolution!r}")
        bad = set(self.paths) - set(PROBE_PATHS)
        if bad:
            raise ValidationError(f"unknown probe paths {sorted(bad)}; choose from {', '.join(PROBE_PATHS)}")

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.resolution)

    def tol_or(self, default: float) -> float:
        return default if self.tol is None else self.tol


@dataclass(frozen=True)
class ContinuityRow:
    m: int
    perturbation_norm: float
    projection_shift: float

    def to_dict(self) -> dict:
        return {"m": self.m, "perturbation_norm": self.perturbation_norm,
                "projection_shift": self.projection_shift}


def dumps(doc) -> str:
    """Deterministic JSON: insertion-ordered keys, shortest round-trip floats."""
    try:
        return json.dumps(doc, indent=2, allow_nan=False)
    except ValueError as exc:
        raise ValidationError(f"result is not representable as JSON: {exc}") from exc


def load_json_arg(value: str, what: str):
    """Inline JSON, or the path of a file holding it."""
    text = value
    if os.path.isfile(value):
        with open(value, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what}: neither a JSON file nor inline JSON ({exc})") from exc


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ValidationError(f"{what}: expected a comma-separated list of numbers, got {text!r}") from exc


def _function(text: str):
    return parse_expr(text).as_function()


def _require(cfg: CommandConfig, key: str):
    value = cfg.options.get(key)
    if value is None:
        raise ValidationError(f"{cfg.command} needs --{key.replace('_', '-')}")
    return value


def _degree(cfg: CommandConfig) -> int:
    if cfg.degree is None:
        raise ValidationError(f"{cfg.command} needs --degree")
    return cfg.degree


def continuity_experiment(f_expr: str, perturb_expr: str, count: int, n: int,
                          tol: float = DEFAULT_TOL, grid: GridSpec | None = None) -> list[ContinuityRow]:
    """Rows (m, ||f_m - f||, ||p_m - p||) for f_m = f + perturbation(t, m), m = 1..count."""
    grid = grid or GridSpec()
    if int(count) != count or count < 1:
        raise ValidationError(f"count must be a positive integer, got {count!r}")
    f = _function(f_expr)
    family = parse_expr(perturb_expr, variables=("t", "m"))
    deltas = [family.as_function(m=m) for m in range(1, int(count) + 1)]
    rows = project_sequence(f, deltas, n, tol, grid)
    return [ContinuityRow(m, d, s) for m, (d, s) in enumerate(rows, start=1)]


def _cmd_project(cfg):
    fn = _require(cfg, "fn")
    maxiter = cfg.options.get("maxiter") or DEFAULT_MAXITER
    res = remez_project(_function(fn), _degree(cfg), cfg.tol_or(DEFAULT_TOL), maxiter, grid=cfg.grid)
    return {"fn": fn, "degree": cfg.degree, **res.to_dict()}


def _cmd_certify(cfg):
    fn = _require(cfg, "fn")
    f = _function(fn)
    p = Polynomial.from_dict(load_json_arg(_require(cfg, "poly"), "--poly"))
    if cfg.degree is not None:
        p = p.padded(cfg.degree)
    cert = certify(f, p, cfg.degree, cfg.tol_or(1e-6), cfg.grid)
    return {
        "fn": fn,
        "polynomial": p.to_dict(),
        "residual_norm": sup_norm(f - p, cfg.grid),
        "certified": cert is not None,
        "certificate": None if cert is None else cert.to_dict(),
    }


def _cmd_maxset(cfg):
    fn = _require(cfg, "fn")
    ms = maximizing_set(_function(fn), cfg.tol_or(1e-9), cfg.grid)
    return {"fn": fn, **ms.to_dict()}


def _cmd_duality(cfg):
    fn = _require(cfg, "fn")
    f = _function(fn)
    pts = _parse_floats(_require(cfg, "points"), "--points")
    ws = _parse_floats(_require(cfg, "weights"), "--weights")
    dm = make_duality_measure(f, pts, ws, cfg.tol_or(MEMBERSHIP_TOL), cfg.grid)
    return {
        "fn": fn,
        **dm.to_dict(),
        "verified": verify_duality(dm.underlying, f, grid=cfg.grid),
        "support_ok": support_check(dm.underlying, f, cfg.tol_or(MEMBERSHIP_TOL), cfg.grid),
    }


def _cmd_probe(cfg):
    fn = _require(cfg, "fn")
    mu = AtomicMeasure.from_dict(load_json_arg(_require(cfg, "mu"), "--mu"))
    gamma = AtomicMeasure.from_dict(load_json_arg(_require(cfg, "gamma"), "--gamma"))
    report = exclusion_report(_function(fn), _degree(cfg), mu, gamma, tol=cfg.tol_or(PROBE_TOL),
                              paths=cfg.paths, grid=cfg.grid)
    return {"fn": fn, "degree": cfg.degree, **report.to_dict()}


def _cmd_gateaux(cfg):
    """A JSON polynomial direction q differentiates at f along q.  Any other
    direction is read as an expression h, and the derivative is taken at the
    polynomial --fn along h."""
    fn = _require(cfg, "fn")
    n = _degree(cfg)
    direction = _require(cfg, "direction")
    tol = cfg.tol_or(DEFAULT_TOL)
    f = _function(fn)
    try:
        q = Polynomial.from_dict(load_json_arg(direction, "--direction"))
    except ValidationError:
        q = None
    if q is not None:
        out = gateaux_poly_direction(f, n, q, tol=tol, grid=cfg.grid)
        mode = "poly_direction"
    else:
        base = remez_project(f, n, tol, grid=cfg.grid)
        if base.A > 0.0:
            raise PreconditionError(f"--fn must be a polynomial of degree <= {n} when the direction is an expression")
        out = gateaux_at_poly(base.p, n, _function(direction), tol=tol, grid=cfg.grid)
        mode = "at_poly"
    return {"fn": fn, "direction": direction, "degree": n, "mode": mode, **out.to_dict()}


def _cmd_bounds(cfg):
    n = cfg.options.get("n")
    if n is None:
        raise ValidationError("bounds needs --n")
    doc = coefficient_bounds(n, _require(cfg, "sup")).to_dict()
    samples = cfg.options.get("samples")
    if samples:
        ratio = empirical_coefficient_ratio(n, samples, cfg.options.get("seed", 0), cfg.grid)
        doc["empirical_ratio"] = ratio
        doc["bound_ratio"] = doc["coef_bound"] / doc["sup_bound"] if doc["sup_bound"] else None
    return doc


def _cmd_continuity(cfg):
    fn = _require(cfg, "fn")
    perturb = _require(cfg, "perturb")
    rows = continuity_experiment(fn, perturb, _require(cfg, "count"), _degree(cfg),
                                 cfg.tol_or(DEFAULT_TOL), cfg.grid)
    fitted = max(r.m * r.projection_shift for r in rows)
    return {"fn": fn, "perturbation": perturb, "degree": cfg.degree,
            "rows": [r.to_dict() for r in rows], "fitted_C": fitted}


def format_table(doc: dict) -> str:
    lines = [f"f = {doc['fn']}, perturbation = {doc['perturbation']}, n = {doc['degree']}",
             f"{'m':>5}  {'||f_m - f||':>24}  {'||p_m - p||':>24}"]
    for r in doc["rows"]:
        lines.append(f"{r['m']:>5}  {r['perturbation_norm']:>24.17g}  {r['projection_shift']:>24.17g}")
    lines.append(f"max m*||p_m - p|| = {doc['fitted_C']:.17g}")
    return "\n".join(lines) + "\n"


_DISPATCH = {
    "project": _cmd_project,
    "certify": _cmd_certify,
    "maxset": _cmd_maxset,
    "duality": _cmd_duality,
    "probe": _cmd_probe,
    "gateaux": _cmd_gateaux,
    "bounds": _cmd_bounds,
    "continuity": _cmd_continuity,
}


def run(cfg: CommandConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        doc = _DISPATCH[cfg.command](cfg)
        if cfg.command == "continuity" and not cfg.json:
            text = format_table(doc)
        else:
            text = dumps(doc) + "\n"
    except ConvergenceError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except ExprSyntaxError as exc:
        print(f"error: cannot parse expression: {exc}", file=stderr)
        return 1
    except MinimaxError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with the
    # non-convergence status
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="tolerance (command specific default)")
    common.add_argument("--grid", type=int, default=argparse.SUPPRESS, help="scan grid resolution (default 4097)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output here instead of stdout")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit JSON for commands that otherwise print a table")

    parser = _Parser(prog="minimaxproj", description="Best uniform polynomial approximation on [0,1].",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = command("project", "minimax polynomial of degree <= n")
    p.add_argument("--fn", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--maxiter", type=int, default=DEFAULT_MAXITER)

    p = command("certify", "search for an alternating set of f - p")
    p.add_argument("--fn", required=True)
    p.add_argument("--poly", required=True, help="polynomial JSON (file or inline)")
    p.add_argument("--degree", type=int)

    p = command("maxset", "points where |f| attains its maximum")
    p.add_argument("--fn", required=True)

    p = command("duality", "build and verify an atomic member of J(f)")
    p.add_argument("--fn", required=True)
    p.add_argument("--points", required=True, help="comma-separated points of M(f)")
    p.add_argument("--weights", required=True, help="comma-separated positive weights summing to 1")

    p = command("probe", "coderivative exclusion probes")
    p.add_argument("--fn", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--mu", required=True, help="measure JSON (file or inline)")
    p.add_argument("--gamma", required=True, help="measure JSON (file or inline)")
    p.add_argument("--paths", default=",".join(PROBE_PATHS))

    p = command("gateaux", "directional difference quotients of the projection")
    p.add_argument("--fn", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--direction", required=True, help="polynomial JSON, or an expression in t")

    p = command("bounds", "coefficient bounds for polynomials with sup|p| <= b")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sup", type=float, required=True)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = command("continuity", "table of ||p_m - p|| along a perturbation family")
    p.add_argument("--fn", required=True)
    p.add_argument("--perturb", required=True, help="expression in t and m")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    return parser


def config_from_args(argv: Sequence[str]) -> CommandConfig:
    ns = vars(build_parser().parse_args(list(argv)))
    command = ns.pop("command")
    paths = tuple(s.strip() for s in ns.pop("paths", ",".join(PROBE_PATHS)).split(",") if s.strip())
    return CommandConfig(
        command=command,
        degree=ns.pop("degree", None),
        tol=ns.pop("tol", None),
        resolution=ns.pop("grid", 4097),
        out=ns.pop("out", None),
        json=ns.pop("json", False),
        paths=paths,
        options=ns,
    )


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except MinimaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
