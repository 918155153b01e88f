"""Best uniform approximation from P_n on [0,1].

:func:`remez_project` runs the Remez exchange and returns the minimax
polynomial together with an equioscillation certificate: n+2 ordered points
where the residual f - p takes the values eps*A*(-1)^i.  By Chebyshev's
alternation theorem such a certificate proves optimality, and the optimum is
unique, so the projection onto P_n is a well defined single-valued map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, ValidationError
from .funcspace import DEFAULT_GRID, GridSpec, Polynomial, local_extrema, sup_norm

__all__ = [
    "EquioscillationCertificate",
    "IdentityReport",
    "MaximizingSet",
    "ProjectionResult",
    "certify",
    "check_identities",
    "chebyshev_reference",
    "maximizing_set",
    "project_sequence",
    "remez_project",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAXITER = 50
# extra exchange steps after the stopping rule first holds
_POLISH_STEPS = 2


@dataclass(frozen=True)
class EquioscillationCertificate:
    points: tuple
    epsilon: int
    level: float
    max_residual_defect: float

    def residual_targets(self) -> np.ndarray:
        signs = (-1.0) ** np.arange(len(self.points))
        return self.epsilon * self.level * signs

    def validate(self, f, p: Polynomial, tol: float, grid: GridSpec = DEFAULT_GRID) -> bool:
        """Check the alternation and the level against a fresh residual scan."""
        pts = np.asarray(self.points)
        if len(pts) != p.degree_bound + 2 or np.any(np.diff(pts) <= 0):
            return False
        r = f(pts) - p(pts)
        norm = sup_norm(f - p, grid)
        if self.level == 0.0:
            return norm <= self.max_residual_defect + tol
        signs = np.sign(r)
        alternating = np.all(signs == self.epsilon * (-1.0) ** np.arange(len(pts)))
        return bool(alternating and np.all(np.abs(r) >= (1 - tol) * norm))

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "epsilon": self.epsilon,
            "level": self.level,
            "max_residual_defect": self.max_residual_defect,
        }

    @classmethod
    def from_dict(cls, data) -> "EquioscillationCertificate":
        try:
            return cls(tuple(float(x) for x in data["points"]), int(data["epsilon"]),
                       float(data["level"]), float(data["max_residual_defect"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"not a certificate document: {data!r}") from exc


@dataclass(frozen=True)
class ProjectionResult:
    p: Polynomial
    A: float
    certificate: EquioscillationCertificate
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "polynomial": self.p.to_dict(),
            "A": self.A,
            "certificate": self.certificate.to_dict(),
            "iterations": self.iterations,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, data) -> "ProjectionResult":
        try:
            return cls(Polynomial.from_dict(data["polynomial"]), float(data["A"]),
                       EquioscillationCertificate.from_dict(data["certificate"]),
                       int(data["iterations"]), bool(data["converged"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"not a projection document: {data!r}") from exc


@dataclass(frozen=True)
class MaximizingSet:
    points: tuple
    values: tuple
    plateau_flag: bool = False

    def to_dict(self) -> dict:
        return {"points": list(self.points), "values": list(self.values), "plateau_flag": self.plateau_flag}


def chebyshev_reference(n: int) -> np.ndarray:
    """The n+2 Chebyshev extreme points mapped to [0,1]."""
    i = np.arange(n + 2)
    ref = (1.0 - np.cos(i * np.pi / (n + 1))) / 2.0
    ref[0], ref[-1] = 0.0, 1.0
    return ref


def _fallback_references(n: int):
    """Interior-node references, tried when f - p vanishes on the reference.

    If the residual interpolates zero at n+2 nodes that include both ends of
    [0,1] it may only have n+1 lobes, too few to exchange into.
    """
    i = np.arange(n + 2)
    yield (1.0 - np.cos((2 * i + 1) * np.pi / (2 * (n + 2)))) / 2.0
    yield (i + 0.5) / (n + 2)


def _solve_reference(f, ref: np.ndarray, n: int):
    """p in P_n and level h with f(t_i) - p(t_i) = (-1)^i h on the reference."""
    M = np.empty((n + 2, n + 2))
    M[:, : n + 1] = np.vander(ref, n + 1, increasing=True)
    M[:, n + 1] = (-1.0) ** np.arange(n + 2)
    sol = np.linalg.solve(M, f(ref))
    return Polynomial(tuple(sol[: n + 1])), float(sol[n + 1])


def _alternating_chain(ts: np.ndarray, rs: np.ndarray):
    """Collapse runs of equal sign to their largest |r| (ties: smallest t)."""
    order = np.argsort(ts, kind="stable")
    out_t: list[float] = []
    out_r: list[float] = []
    for t, r in zip(ts[order], rs[order]):
        if r == 0.0:
            continue
        if out_r and math.copysign(1.0, r) == math.copysign(1.0, out_r[-1]):
            if abs(r) > abs(out_r[-1]):
                out_t[-1], out_r[-1] = t, r
            continue
        out_t.append(float(t))
        out_r.append(float(r))
    return out_t, out_r


def _exchange(ref, ref_r, ext_t, ext_r, n, level):
    # extrema below the current level would let the level drop
    big = np.abs(ext_r) >= level
    ext_t, ext_r = ext_t[big], ext_r[big]
    ts = np.concatenate([ref, ext_t])
    rs = np.concatenate([ref_r, ext_r])
    chain_t, chain_r = _alternating_chain(ts, rs)
    # trim from whichever end is smaller; this never drops the global maximum
    while len(chain_t) > n + 2:
        if abs(chain_r[0]) < abs(chain_r[-1]):
            chain_t.pop(0)
            chain_r.pop(0)
        else:
            chain_t.pop()
            chain_r.pop()
    return np.array(chain_t), np.array(chain_r)


def _certificate(ref_t, ref_r, norm) -> EquioscillationCertificate:
    eps = 1 if ref_r[0] > 0 else -1
    level = float(np.min(np.abs(ref_r)))
    targets = eps * level * (-1.0) ** np.arange(len(ref_r))
    defect = max(float(np.max(np.abs(ref_r - targets))), norm - level)
    return EquioscillationCertificate(tuple(float(t) for t in ref_t), eps, level, defect)


def remez_project(f, n: int, tol: float = DEFAULT_TOL, maxiter: int = DEFAULT_MAXITER,
                  grid: GridSpec = DEFAULT_GRID) -> ProjectionResult:
    """Best uniform approximation of f by polynomials of degree <= n on [0,1].

    Stops once (||f-p|| - |h|) / max(|h|, tol) <= tol, where h is the
    leveled error on the current reference (differences below the rounding
    level of evaluating f - p count as zero), then takes up to two more
    exchange steps while they keep reducing that gap.  If the residual is
    below ``tol * max(1, max|f|)`` the function is treated as a member of P_n:
    A is reported as 0 and the certificate is the initial reference.

    Raises ConvergenceError (carrying the last iterate) after ``maxiter``
    iterations without meeting the stopping rule.
    """
    if int(n) != n or n < 0:
        raise ValidationError(f"degree must be a nonnegative integer, got {n!r}")
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol!r}")
    if int(maxiter) != maxiter or maxiter < 1:
        raise ValidationError(f"maxiter must be a positive integer, got {maxiter!r}")
    n = int(n)

    ref = chebyshev_reference(n)
    fallbacks = _fallback_references(n)
    accepted = None
    polish = 0
    last = None
    for it in range(1, int(maxiter) + 1):
        p, h = _solve_reference(f, ref, n)
        r = f - p
        ext_t, ext_r = local_extrema(r, grid)
        norm = float(np.max(np.abs(ext_r))) if len(ext_r) else 0.0
        scale = max(1.0, float(np.max(np.abs(f(ref)))))
        if norm <= tol * scale:
            cert = EquioscillationCertificate(tuple(float(t) for t in chebyshev_reference(n)), 1, 0.0, norm)
            return ProjectionResult(p, 0.0, cert, it, True)

        # rounding in evaluating f - p puts a floor under the attainable gap
        noise = 64 * np.finfo(float).eps * (scale + float(np.sum(np.abs(p.array))))
        gap = max(norm - abs(h) - noise, 0.0) / max(abs(h), tol)
        new_ref, new_r = _exchange(ref, r(ref), ext_t, ext_r, n, abs(h))
        if len(new_ref) < n + 2:
            ref = next(fallbacks, None)
            if ref is None:
                raise ConvergenceError("Remez exchange found no alternating reference", result=None)
            continue
        state = (gap, p, norm, new_ref, new_r, it)
        last = state
        if accepted is not None:
            if gap <= accepted[0]:
                accepted = state
            else:
                break
            polish += 1
            if polish >= _POLISH_STEPS:
                break
        elif gap <= tol:
            accepted = state
        ref = new_ref

    if accepted is None:
        if last is None:
            raise ConvergenceError(f"Remez exchange found no usable reference in {maxiter} iterations")
        gap, p, norm, new_ref, new_r, it = last
        result = ProjectionResult(p, norm, _certificate(new_ref, new_r, norm), it, False)
        raise ConvergenceError(
            f"Remez exchange did not converge in {maxiter} iterations (relative gap {gap:.3e})",
            result=result,
        )
    gap, p, norm, new_ref, new_r, _ = accepted
    return ProjectionResult(p, norm, _certificate(new_ref, new_r, norm), it, True)


def certify(f, p: Polynomial, n: int | None = None, tol: float = 1e-6,
            grid: GridSpec = DEFAULT_GRID) -> EquioscillationCertificate | None:
    """Look for n+2 alternating points where |f - p| >= (1 - tol) ||f - p||.

    Returns None when no such chain exists at this grid resolution, which
    does not prove that p is suboptimal.
    """
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol!r}")
    if n is None:
        n = p.degree_bound
    r = f - p
    ext_t, ext_r = local_extrema(r, grid)
    norm = float(np.max(np.abs(ext_r))) if len(ext_r) else 0.0
    scale = max(1.0, sup_norm(f, grid))
    if norm <= 64 * np.finfo(float).eps * scale:
        return EquioscillationCertificate(tuple(float(t) for t in chebyshev_reference(n)), 1, 0.0, norm)
    keep = np.abs(ext_r) >= (1 - tol) * norm
    chain_t, chain_r = _alternating_chain(ext_t[keep], ext_r[keep])
    if len(chain_t) < n + 2:
        return None
    return _certificate(np.array(chain_t[: n + 2]), np.array(chain_r[: n + 2]), norm)


def maximizing_set(f, tol: float = 1e-9, grid: GridSpec = DEFAULT_GRID) -> MaximizingSet:
    """Points where |f| comes within a relative ``tol`` of ||f||.

    If |f| stays that close to ||f|| over three or more consecutive grid
    points, ``plateau_flag`` is set and the ends of each such run are
    reported as representatives.  For f = 0 the whole interval is a plateau.
    """
    norm = sup_norm(f, grid)
    if norm == 0.0:
        return MaximizingSet((0.0, 1.0), (0.0, 0.0), True)
    level = norm * (1 - tol)
    ts, vs = local_extrema(f, grid, floor=level)
    keep = np.abs(vs) >= level
    cand = sorted(zip(ts[keep].tolist(), vs[keep].tolist()))

    gts = grid.points
    gvals = f(gts)
    hit = np.abs(gvals) >= level
    plateau = False
    padded = np.concatenate(([False], hit, [False])).astype(int)
    starts = np.flatnonzero(np.diff(padded) == 1)
    stops = np.flatnonzero(np.diff(padded) == -1) - 1
    for a, b in zip(starts, stops):
        if b - a >= 2:
            plateau = True
            cand.append((float(gts[a]), float(gvals[a])))
            cand.append((float(gts[b]), float(gvals[b])))
    cand.sort()

    merged: list[tuple[float, float]] = []
    gap = grid.spacing / 2
    for t, v in cand:
        if merged and t - merged[-1][0] < gap:
            if abs(v) > abs(merged[-1][1]):
                merged[-1] = (t, v)
            continue
        merged.append((t, v))
    return MaximizingSet(tuple(t for t, _ in merged), tuple(v for _, v in merged), plateau)


@dataclass(frozen=True)
class IdentityReport:
    scaling: float
    translation: float
    convex: float | None
    notice: str = ""

    def to_dict(self) -> dict:
        return {"scaling": self.scaling, "translation": self.translation,
                "convex": self.convex, "notice": self.notice}


def _poly_distance(p: Polynomial, q: Polynomial, grid: GridSpec) -> float:
    m = max(p.degree_bound, q.degree_bound)
    return sup_norm(p.padded(m) - q.padded(m), grid)


def check_identities(f, n: int, beta: float, q: Polynomial, alpha: float,
                     tol: float = DEFAULT_TOL, grid: GridSpec = DEFAULT_GRID) -> IdentityReport:
    """Sup-norm residuals of the three projection identities, with p = P(f):

    scaling      P(beta f) = beta p
    translation  P(f + q) = p + q            (q of degree <= n)
    convex       P(alpha f + (1-alpha) p) = p  (f outside P_n, 0 < alpha < 1)
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0,1), got {alpha!r}")
    q = q.padded(n)
    base = remez_project(f, n, tol, grid=grid)
    p = base.p
    scaling = _poly_distance(remez_project(beta * f, n, tol, grid=grid).p, beta * p, grid)
    translation = _poly_distance(remez_project(f + q, n, tol, grid=grid).p, p + q, grid)
    if base.A == 0.0:
        return IdentityReport(scaling, translation, None,
                              "f lies in P_n to within tolerance; the convex identity does not apply")
    mixed = alpha * f + (1 - alpha) * p
    convex = _poly_distance(remez_project(mixed, n, tol, grid=grid).p, p, grid)
    return IdentityReport(scaling, translation, convex)


def project_sequence(f, perturbations: Sequence, n: int, tol: float = DEFAULT_TOL,
                     grid: GridSpec = DEFAULT_GRID) -> list[tuple[float, float]]:
    """Rows (||f_m - f||, ||P(f_m) - P(f)||) for f_m = f + perturbation_m, in order."""
    p = remez_project(f, n, tol, grid=grid).p
    rows = []
    for delta in perturbations:
        pm = remez_project(f + delta, n, tol, grid=grid).p
        rows.append((sup_norm(delta, grid), _poly_distance(pm, p, grid)))
    return rows
