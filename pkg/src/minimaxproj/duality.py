"""Atomic members of the normalized duality mapping J(f).

For f with ||f|| > 0, put weight alpha_j f(t_j) at points t_j where |f| is
maximal, with alpha_j > 0 summing to 1.  The resulting measure mu pairs with
f to ||f||^2 and has total variation ||f||, so mu lies in J(f).  Different
weight vectors give different members, which is why J(f) is infinite as soon
as |f| peaks at two or more points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CardinalityError, MembershipError, PreconditionError, ValidationError
from .funcspace import DEFAULT_GRID, AtomicMeasure, GridSpec, pair, sup_norm, total_variation
from .projector import maximizing_set

MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class DualityMeasure:
    underlying: AtomicMeasure
    source_points: tuple
    weights: tuple

    def to_dict(self) -> dict:
        return {
            "measure": self.underlying.to_dict(),
            "source_points": list(self.source_points),
            "weights": list(self.weights),
        }


def in_maximizing_set(f, t: float, norm: float, tol: float = MEMBERSHIP_TOL) -> bool:
    return abs(f(float(t))) >= norm * (1 - tol)


def make_duality_measure(f, points: Sequence[float], weights: Sequence[float],
                         tol: float = MEMBERSHIP_TOL, grid: GridSpec = DEFAULT_GRID) -> DualityMeasure:
    pts = [float(t) for t in points]
    ws = [float(a) for a in weights]
    if len(pts) != len(ws) or not pts:
        raise ValidationError("need one positive weight per point")
    if len(set(pts)) != len(pts):
        raise ValidationError("points must be distinct")
    if any(not a > 0 for a in ws) or abs(sum(ws) - 1.0) > 1e-12:
        raise ValidationError(f"weights must be positive and sum to 1, got {ws}")
    if any(not 0.0 <= t <= 1.0 for t in pts):
        raise ValidationError("points must lie in [0,1]")
    norm = sup_norm(f, grid)
    if norm == 0.0:
        raise PreconditionError("f is identically zero; J(f) is built only for ||f|| > 0")
    for t in pts:
        if not in_maximizing_set(f, t, norm, tol):
            raise MembershipError(f"|f({t!r})| = {abs(f(t))!r} is below ||f|| = {norm!r}")
    mu = AtomicMeasure(tuple((t, a * f(t)) for t, a in zip(pts, ws)))
    return DualityMeasure(mu, tuple(pts), tuple(ws))


def verify_duality(mu: AtomicMeasure, f, tol: float = 1e-10, grid: GridSpec = DEFAULT_GRID) -> bool:
    """<mu, f> = ||f||^2 and ||mu|| = ||f||, each up to tol relative to max(1, value)."""
    norm = sup_norm(f, grid)
    ok_pair = abs(pair(mu, f) - norm**2) <= tol * max(1.0, norm**2)
    ok_norm = abs(total_variation(mu) - norm) <= tol * max(1.0, norm)
    return bool(ok_pair and ok_norm)


def support_check(mu: AtomicMeasure, f, tol: float = MEMBERSHIP_TOL, grid: GridSpec = DEFAULT_GRID) -> bool:
    """Every atom of mu sits where |f| is maximal (mu vanishes off M(f))."""
    if mu.is_zero():
        return True
    norm = sup_norm(f, grid)
    return all(in_maximizing_set(f, t, norm, tol) for t in mu.locations)


def enumerate_duality_members(f, k: int, tol: float = MEMBERSHIP_TOL,
                              grid: GridSpec = DEFAULT_GRID) -> list[DualityMeasure]:
    """k distinct members of J(f) on the first two points of M(f),
    with weights (j/(k+1), 1 - j/(k+1)) for j = 1..k."""
    if int(k) != k or k < 2:
        raise ValidationError(f"k must be an integer >= 2, got {k!r}")
    ms = maximizing_set(f, tol, grid)
    if len(ms.points) < 2:
        raise CardinalityError(f"M(f) = {{{ms.points[0]!r}}} is a singleton; J(f) has a single atomic member")
    t0, t1 = ms.points[0], ms.points[1]
    out = []
    for j in range(1, k + 1):
        a = j / (k + 1)
        out.append(make_duality_measure(f, (t0, t1), (a, 1.0 - a), tol, grid))
    return out
