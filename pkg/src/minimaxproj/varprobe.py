"""Directional probes of the regular coderivative of the projection onto P_n.

gamma belongs to D*P(f)(mu) only if

    limsup  (<gamma, g - f> - <mu, P(g) - P(f)>) / (||g - f|| + ||P(g) - P(f)||)  <= 0
    g -> f

so a single path g -> f along which the quotient tends to a positive number
shows that gamma is *not* in the coderivative.  Along the three paths used
here the projection of g is known in closed form, which makes the quotient
constant in the step:

    shift    g = f +- lam        P(g) = p +- lam
    convex   g = (1-a) f + a p   P(g) = p
    scaling  g = (1+lam) f       P(g) = (1+lam) p

Membership itself is never decided; only exclusions are certified.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import DomainError, PreconditionError, ValidationError
from .funcspace import (DEFAULT_GRID, AtomicMeasure, ContinuousFn, GridSpec, Polynomial, pair,
                        sup_norm, total_mass)
from .projector import DEFAULT_TOL, ProjectionResult, remez_project

PROBE_TOL = 1e-6
ORTHOGONAL_TOL = 1e-10
DEFAULT_STEPS = tuple(2.0**-k for k in range(1, 21))

CERTIFIED = "exclusion_certified"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProbeOutcome:
    path_name: str
    step_values: tuple
    quotients: tuple
    estimated_limit: float
    closed_form: float
    verdict: str
    converged: bool
    # which exclusion a certified verdict proves, e.g. "gamma not in D*P(f)(mu)"
    claim: str = ""

    @property
    def spread(self) -> float:
        return float(np.ptp(self.quotients)) if self.quotients else 0.0

    def to_dict(self) -> dict:
        return {
            "path_name": self.path_name,
            "step_values": list(self.step_values),
            "quotients": list(self.quotients),
            "estimated_limit": self.estimated_limit,
            "closed_form": self.closed_form,
            "verdict": self.verdict,
            "converged": self.converged,
            "claim": self.claim,
        }


@dataclass(frozen=True)
class GateauxOutcome:
    steps: tuple
    quotient_functions: tuple
    limit: Polynomial
    max_defect: float

    def to_dict(self) -> dict:
        return {
            "steps": list(self.steps),
            "quotient_functions": [q.to_dict() for q in self.quotient_functions],
            "limit": self.limit.to_dict(),
            "max_defect": self.max_defect,
        }


def _increment_quotient(gamma, mu, dg, dq: Polynomial, grid: GridSpec) -> float:
    den = sup_norm(dg, grid) + sup_norm(dq, grid)
    if den == 0.0:
        raise DomainError("g = f and q = p: the quotient is undefined")
    return (pair(gamma, dg) - pair(mu, dq)) / den


def coderivative_quotient(gamma: AtomicMeasure, mu: AtomicMeasure, f, p: Polynomial, g,
                          q: Polynomial, grid: GridSpec = DEFAULT_GRID) -> float:
    """(<gamma, g-f> - <mu, q-p>) / (||g-f|| + ||q-p||)."""
    m = max(p.degree_bound, q.degree_bound)
    return _increment_quotient(gamma, mu, g - f, q.padded(m) - p.padded(m), grid)


def _check_steps(steps):
    steps = tuple(float(s) for s in steps)
    if not steps or any(not s > 0 for s in steps):
        raise ValidationError("steps must be positive")
    if any(b >= a for a, b in zip(steps, steps[1:])):
        raise ValidationError("steps must be strictly decreasing")
    return steps


def _outcome(path, steps, quotients, closed_form, tol, claim) -> ProbeOutcome:
    limit = quotients[-1]
    certified = closed_form > 0 and limit > tol
    return ProbeOutcome(
        path_name=path,
        step_values=steps,
        quotients=tuple(quotients),
        estimated_limit=limit,
        closed_form=closed_form,
        verdict=CERTIFIED if certified else INCONCLUSIVE,
        converged=abs(limit - closed_form) <= tol,
        claim=claim,
    )


def probe_shift(f, n: int, gamma: AtomicMeasure, mu: AtomicMeasure, sign: int = 1,
                steps: Sequence[float] = DEFAULT_STEPS, tol: float = PROBE_TOL,
                grid: GridSpec = DEFAULT_GRID) -> ProbeOutcome:
    """Path g = f + sign*lam with P(g) = p + sign*lam.

    The quotient is sign*(gamma([0,1]) - mu([0,1]))/2 for every lam; it does
    not involve f or p at all.
    """
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    steps = _check_steps(steps)
    quotients = []
    for lam in steps:
        d = sign * lam
        quotients.append(_increment_quotient(gamma, mu, ContinuousFn.constant(d), Polynomial((d,)), grid))
    closed = sign * (total_mass(gamma) - total_mass(mu)) / 2
    name = "shift_plus" if sign == 1 else "shift_minus"
    return _outcome(name, steps, quotients, closed, tol, "gamma not in D*P(f)(mu)")


def probe_convex(f, n: int, gamma: AtomicMeasure, mu: AtomicMeasure,
                 steps: Sequence[float] = DEFAULT_STEPS, tol: float = PROBE_TOL,
                 projection: ProjectionResult | None = None, remez_tol: float = DEFAULT_TOL,
                 grid: GridSpec = DEFAULT_GRID) -> ProbeOutcome:
    """Path g = (1-a) f + a p with P(g) = p, so the quotient is
    -<gamma, f-p>/||f-p|| whatever mu is."""
    steps = _check_steps(steps)
    if steps[0] >= 1.0:
        raise ValidationError("convex steps must lie in (0,1)")
    proj = projection or remez_project(f, n, remez_tol, grid=grid)
    if proj.A == 0.0:
        raise PreconditionError("f lies in P_n; the convex path is constant")
    p = proj.p
    residual = f - p
    zero = Polynomial.zero(n)
    quotients = [_increment_quotient(gamma, mu, (-a) * residual, zero, grid) for a in steps]
    closed = -pair(gamma, residual) / sup_norm(residual, grid)
    return _outcome("convex", steps, quotients, closed, tol, "gamma not in D*P(f)(mu)")


def orthogonal_check(mu: AtomicMeasure, n: int, tol: float = ORTHOGONAL_TOL) -> bool:
    """mu annihilates P_n, tested on the monomials 1, t, ..., t^n."""
    if mu.is_zero():
        return True
    for k in range(n + 1):
        if abs(pair(mu, lambda t, k=k: t**k)) > tol:
            return False
    return True


def annihilating_measure(points: Sequence[float], n: int, scale: float = 1.0) -> AtomicMeasure:
    """An atomic measure on n+2 distinct points that annihilates P_n.

    Its weights span the (one-dimensional) null space of the moment
    matrix [t_j^k], normalized to total variation ``scale``.
    """
    pts = np.asarray(sorted(float(t) for t in points))
    if len(pts) != n + 2 or len(set(pts.tolist())) != n + 2:
        raise ValidationError(f"need exactly {n + 2} distinct points")
    moments = np.vander(pts, n + 1, increasing=True).T
    w = null_space(moments)[:, 0]
    w = w / np.sum(np.abs(w)) * scale
    # fix the sign so the first atom is positive
    if w[0] < 0:
        w = -w
    return AtomicMeasure(tuple(zip(pts.tolist(), w.tolist())))


def probe_scaling(f, n: int, mu: AtomicMeasure, gamma: AtomicMeasure,
                  steps: Sequence[float] = DEFAULT_STEPS, tol: float = PROBE_TOL,
                  projection: ProjectionResult | None = None, remez_tol: float = DEFAULT_TOL,
                  orth_tol: float = ORTHOGONAL_TOL, grid: GridSpec = DEFAULT_GRID) -> ProbeOutcome:
    """Path g = (1+lam) f with P(g) = (1+lam) p, testing mu against gamma.

    For gamma annihilating P_n the quotient is <mu, f>/(||f|| + ||p||);
    a positive value shows mu is not in D*P(f)(gamma).
    """
    steps = _check_steps(steps)
    if not orthogonal_check(gamma, n, orth_tol):
        raise PreconditionError("gamma does not annihilate P_n")
    norm_f = sup_norm(f, grid)
    if norm_f == 0.0:
        raise PreconditionError("f is identically zero")
    proj = projection or remez_project(f, n, remez_tol, grid=grid)
    p = proj.p
    # roles swap relative to the shift and convex paths: mu tests g - f
    quotients = [_increment_quotient(mu, gamma, lam * f, lam * p, grid) for lam in steps]
    closed = pair(mu, f) / (norm_f + sup_norm(p, grid))
    return _outcome("scaling", steps, quotients, closed, tol, "mu not in D*P(f)(gamma)")


@dataclass(frozen=True)
class ExclusionReport:
    outcomes: tuple
    conclusions: tuple

    def to_dict(self) -> dict:
        return {"outcomes": [o.to_dict() for o in self.outcomes], "conclusions": list(self.conclusions)}


def _label(m: AtomicMeasure, name: str) -> str:
    return "theta*" if m.is_zero() else name


def exclusion_report(f, n: int, mu: AtomicMeasure, gamma: AtomicMeasure,
                     steps: Sequence[float] = DEFAULT_STEPS, tol: float = PROBE_TOL,
                     paths: Sequence[str] = ("shift", "convex", "scaling"),
                     remez_tol: float = DEFAULT_TOL, grid: GridSpec = DEFAULT_GRID) -> ExclusionReport:
    """Run every applicable probe and collect what the certified ones prove.

    Shift paths are run in both directions and with the roles of mu and
    gamma exchanged.  The convex path needs f outside P_n, the scaling path
    needs gamma to annihilate P_n.
    """
    unknown = set(paths) - {"shift", "convex", "scaling"}
    if unknown:
        raise ValidationError(f"unknown probe paths: {sorted(unknown)}")
    mu_name, gamma_name = _label(mu, "mu"), _label(gamma, "gamma")
    outcomes = []
    conclusions = []
    proj = None
    if "convex" in paths or "scaling" in paths:
        proj = remez_project(f, n, remez_tol, grid=grid)

    if "shift" in paths:
        for sign in (1, -1):
            o = probe_shift(f, n, gamma, mu, sign, steps, tol, grid)
            outcomes.append(o)
            if o.verdict == CERTIFIED:
                conclusions.append(f"{gamma_name} not in D*P(f)({mu_name}) via {o.path_name}")
        for sign in (1, -1):
            o = probe_shift(f, n, mu, gamma, sign, steps, tol, grid)
            o = replace(o, path_name=o.path_name + "_swapped", claim="mu not in D*P(f)(gamma)")
            outcomes.append(o)
            if o.verdict == CERTIFIED:
                conclusions.append(f"{mu_name} not in D*P(f)({gamma_name}) via {o.path_name}")
    if "convex" in paths and proj.A > 0.0:
        o = probe_convex(f, n, gamma, mu, steps=tuple(s for s in steps if s < 1.0), tol=tol,
                         projection=proj, grid=grid)
        outcomes.append(o)
        if o.verdict == CERTIFIED:
            conclusions.append(f"{gamma_name} not in D*P(f)({mu_name}) via convex")
    if "scaling" in paths and orthogonal_check(gamma, n) and sup_norm(f, grid) > 0:
        o = probe_scaling(f, n, mu, gamma, steps, tol, projection=proj, grid=grid)
        outcomes.append(o)
        if o.verdict == CERTIFIED:
            conclusions.append(f"{mu_name} not in D*P(f)({gamma_name}) via scaling")
            if mu == gamma:
                conclusions.append(f"{mu_name} is not a fixed point of D*P(f)")
    return ExclusionReport(tuple(outcomes), tuple(conclusions))


def _quotients(base: Polynomial, shifted: Sequence[Polynomial], steps, n):
    return [Polynomial((s.padded(n).array - base.padded(n).array) / t) for s, t in zip(shifted, steps)]


def gateaux_poly_direction(f, n: int, q: Polynomial, steps: Sequence[float] = DEFAULT_STEPS[:12],
                           tol: float = DEFAULT_TOL, grid: GridSpec = DEFAULT_GRID) -> GateauxOutcome:
    """(P(f + t q) - P(f)) / t for a polynomial direction q; the limit is q."""
    steps = _check_steps(steps)
    q = q.padded(n)
    if not np.any(q.array):
        raise ValidationError("direction q must be nonzero")
    base = remez_project(f, n, tol, grid=grid).p
    shifted = [remez_project(f + t * q, n, tol, grid=grid).p for t in steps]
    quots = _quotients(base, shifted, steps, n)
    defect = max(sup_norm(Q - q, grid) for Q in quots)
    return GateauxOutcome(steps, tuple(quots), q, defect)


def gateaux_at_poly(q: Polynomial, n: int, f, steps: Sequence[float] = DEFAULT_STEPS[:12],
                    tol: float = DEFAULT_TOL, grid: GridSpec = DEFAULT_GRID) -> GateauxOutcome:
    """(P(q + t f) - q) / t at a polynomial base point q; the limit is P(f)."""
    steps = _check_steps(steps)
    q = q.padded(n)
    if sup_norm(f, grid) == 0.0:
        raise ValidationError("direction f must be nonzero")
    limit = remez_project(f, n, tol, grid=grid).p
    shifted = [remez_project(q + t * f, n, tol, grid=grid).p for t in steps]
    quots = _quotients(q, shifted, steps, n)
    defect = max(sup_norm(Q - limit, grid) for Q in quots)
    return GateauxOutcome(steps, tuple(quots), limit, defect)
