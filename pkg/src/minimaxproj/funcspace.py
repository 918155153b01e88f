"""Value types for C[0,1], the polynomial subspace P_n and atomic measures.

Functions are represented by vectorized evaluators, polynomials by their
monomial coefficients, and elements of the dual space by finitely many
weighted atoms.  Everything here is immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, EvaluationError, ValidationError

__all__ = [
    "AtomicMeasure",
    "ContinuousFn",
    "DEFAULT_GRID",
    "GridSpec",
    "Polynomial",
    "ZERO_MEASURE",
    "eval_poly",
    "local_extrema",
    "pair",
    "sup_norm",
    "total_mass",
    "total_variation",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    """Equispaced scan resolution and the bracket width for refinement."""

    resolution: int = 4097
    tol: float = 1e-12

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 2:
            raise ValidationError(f"grid resolution must be an integer >= 2, got {self.resolution}")
        if not self.tol > 0:
            raise ValidationError(f"refinement tolerance must be positive, got {self.tol}")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, int(self.resolution))

    @property
    def spacing(self) -> float:
        return 1.0 / (self.resolution - 1)


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True, eq=False)
class ContinuousFn:
    """A real function on [0,1] given by a vectorized evaluator.

    The evaluator receives a float ndarray and must return values of the
    same shape (a scalar result is broadcast, so ``lambda t: 5.0`` works).
    Calling the object checks that every value is finite.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str = "f"

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            out = self.evaluator(arr)
        out = np.broadcast_to(np.asarray(out, dtype=float), arr.shape)
        if not np.all(np.isfinite(out)):
            bad = arr[~np.isfinite(out)] if arr.ndim else arr
            raise EvaluationError(f"{self.label} is not finite at t={float(np.ravel(bad)[0])!r}")
        if arr.ndim == 0:
            return float(out)
        return np.array(out, dtype=float)

    @classmethod
    def constant(cls, c: float) -> "ContinuousFn":
        c = float(c)
        return cls(lambda t: np.full_like(t, c), label=repr(c))

    @classmethod
    def from_scalar(cls, func: Callable[[float], float], label: str = "f") -> "ContinuousFn":
        """Wrap a function that only accepts Python floats.

        Arithmetic exceptions raised by ``func`` (division by zero, math
        domain errors) are reported as non-finite values.
        """
        def guarded(t):
            try:
                return func(t)
            except (ArithmeticError, ValueError):
                return math.nan

        return cls(np.vectorize(guarded, otypes=[float]), label=label)

    def __add__(self, other):
        g = _as_fn(other)
        return ContinuousFn(lambda t: self.evaluator(t) + g.evaluator(t), f"({self.label}) + ({g.label})")

    __radd__ = __add__

    def __sub__(self, other):
        g = _as_fn(other)
        return ContinuousFn(lambda t: self.evaluator(t) - g.evaluator(t), f"({self.label}) - ({g.label})")

    def __rsub__(self, other):
        return _as_fn(other) - self

    def __mul__(self, beta):
        if not isinstance(beta, (int, float, np.floating, np.integer)):
            return NotImplemented
        beta = float(beta)
        return ContinuousFn(lambda t: beta * self.evaluator(t), f"{beta!r}*({self.label})")

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __repr__(self):
        return f"ContinuousFn({self.label!r})"


def _as_fn(obj) -> ContinuousFn:
    if isinstance(obj, ContinuousFn):
        return obj
    if isinstance(obj, Polynomial):
        return obj.as_function()
    if isinstance(obj, (int, float, np.floating, np.integer)):
        return ContinuousFn.constant(obj)
    raise TypeError(f"cannot combine ContinuousFn with {type(obj).__name__}")


@dataclass(frozen=True)
class Polynomial:
    """p(t) = a_0 + a_1 t + ... + a_n t^n with ``coeffs = (a_0, ..., a_n)``."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(a) for a in np.ravel(np.asarray(self.coeffs, dtype=float)))
        if not c:
            raise ValidationError("a polynomial needs at least one coefficient")
        if not all(math.isfinite(a) for a in c):
            raise ValidationError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n: int = 0) -> "Polynomial":
        return cls((0.0,) * (n + 1))

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def __call__(self, t):
        # Horner; no domain check, see eval_poly for the checked version
        arr = np.asarray(t, dtype=float)
        out = np.zeros_like(arr)
        for a in reversed(self.coeffs):
            out = out * arr + a
        return float(out) if arr.ndim == 0 else out

    def padded(self, n: int) -> "Polynomial":
        if n + 1 < len(self.coeffs):
            if any(self.coeffs[n + 1:]):
                raise ValidationError(f"polynomial has degree above {n}")
            return Polynomial(self.coeffs[: n + 1])
        return Polynomial(self.coeffs + (0.0,) * (n + 1 - len(self.coeffs)))

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial((0.0,))
        return Polynomial(tuple(k * a for k, a in enumerate(self.coeffs) if k > 0))

    def as_function(self) -> ContinuousFn:
        return ContinuousFn(self.__call__, label=self.describe())

    def describe(self) -> str:
        terms = []
        for k, a in enumerate(self.coeffs):
            if a == 0.0:
                continue
            terms.append(f"{a!r}" if k == 0 else f"{a!r}*t" if k == 1 else f"{a!r}*t^{k}")
        return " + ".join(terms) if terms else "0"

    def _binary(self, other, op):
        if isinstance(other, (int, float, np.floating, np.integer)):
            other = Polynomial((float(other),))
        if not isinstance(other, Polynomial):
            return NotImplemented
        m = max(len(self.coeffs), len(other.coeffs)) - 1
        return Polynomial(op(self.padded(m).array, other.padded(m).array))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, beta):
        if not isinstance(beta, (int, float, np.floating, np.integer)):
            return NotImplemented
        return Polynomial(float(beta) * self.array)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def to_dict(self) -> dict:
        return {"coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, data) -> "Polynomial":
        if isinstance(data, list):
            return cls(tuple(data))
        try:
            return cls(tuple(data["coeffs"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"not a polynomial document: {data!r}") from exc


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite signed measure sum_j w_j delta_{t_j} on [0,1].

    Atoms are sorted on construction, coincident locations merged and
    zero weights dropped.  No atoms at all is the zero functional.
    """

    atoms: tuple = ()

    def __post_init__(self):
        merged: dict[float, float] = {}
        for item in self.atoms:
            try:
                t, w = item
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"atom must be a (t, w) pair, got {item!r}") from exc
            t, w = float(t), float(w)
            if not (math.isfinite(t) and math.isfinite(w)):
                raise ValidationError("atom locations and weights must be finite")
            if not 0.0 <= t <= 1.0:
                raise ValidationError(f"atom location {t!r} is outside [0,1]")
            merged[t] = merged.get(t, 0.0) + w
        canon = tuple((t, merged[t]) for t in sorted(merged) if merged[t] != 0.0)
        object.__setattr__(self, "atoms", canon)

    @property
    def locations(self) -> np.ndarray:
        return np.array([t for t, _ in self.atoms], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)

    def __len__(self):
        return len(self.atoms)

    def is_zero(self) -> bool:
        return not self.atoms

    def scaled(self, beta: float) -> "AtomicMeasure":
        return AtomicMeasure(tuple((t, beta * w) for t, w in self.atoms))

    def to_dict(self) -> dict:
        return {"atoms": [{"t": t, "w": w} for t, w in self.atoms]}

    @classmethod
    def from_dict(cls, data) -> "AtomicMeasure":
        try:
            return cls(tuple((a["t"], a["w"]) for a in data["atoms"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"not a measure document: {data!r}") from exc


ZERO_MEASURE = AtomicMeasure()


def eval_poly(p: Polynomial, t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t={t!r} is outside [0,1]")
    return p(float(t))


def _golden_max(h, a, b, tol):
    """Maximize h on every bracket [a_i, b_i] at once by golden-section search.

    Ties go to the left point so results are reproducible.
    """
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    hc, hd = h(c), h(d)
    for _ in range(200):
        if np.all(b - a <= tol):
            break
        left = hc >= hd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        probe = np.where(left, c_next, d_next)
        hp = h(probe)
        hc_next = np.where(left, hp, hd)
        hd_next = np.where(left, hc, hp)
        c, d, hc, hd = c_next, d_next, hc_next, hd_next
    pick = hc >= hd
    return np.where(pick, c, d), np.where(pick, hc, hd)


def local_extrema(f, grid: GridSpec = DEFAULT_GRID, floor: float | None = None):
    """Refined local maximizers of |f|, as ``(ts, values)`` with signed values.

    A grid scan marks the left edge of every local maximum of |f|; each
    mark is refined on the bracket formed by its two grid neighbours.  With
    ``floor`` set, marks whose refined value cannot reach ``floor`` are
    skipped (the bound uses the largest jump between grid neighbours).
    """
    ts = grid.points
    vals = f(ts)
    mag = np.abs(vals)
    padded = np.concatenate(([-np.inf], mag, [-np.inf]))
    is_max = (padded[1:-1] > padded[:-2]) & (padded[1:-1] >= padded[2:])
    idx = np.flatnonzero(is_max)
    if floor is not None and len(idx):
        jump = float(np.max(np.abs(np.diff(mag)))) if len(mag) > 1 else 0.0
        idx = idx[mag[idx] + jump >= floor]
    if len(idx) == 0:
        return np.empty(0), np.empty(0)
    lo = ts[np.maximum(idx - 1, 0)]
    hi = ts[np.minimum(idx + 1, len(ts) - 1)]
    x, _ = _golden_max(lambda s: np.abs(f(s)), lo, hi, grid.tol)
    fx = f(x)
    better = np.abs(fx) > mag[idx]
    out_t = np.where(better, x, ts[idx])
    out_v = np.where(better, fx, vals[idx])
    return out_t, out_v


def sup_norm(f, grid: GridSpec = DEFAULT_GRID) -> float:
    """max |f| on [0,1] by grid scan plus refinement of the leading peaks."""
    ts = grid.points
    mag = np.abs(f(ts))
    best = float(np.max(mag))
    if best == 0.0:
        return 0.0
    _, v = local_extrema(f, grid, floor=best)
    if len(v):
        best = max(best, float(np.max(np.abs(v))))
    return best


def pair(mu: AtomicMeasure, f) -> float:
    """<mu, f> = sum_j w_j f(t_j)."""
    if mu.is_zero():
        return 0.0
    # fsum keeps total_mass(mu) == pair(mu, 1) bit for bit
    return math.fsum(mu.weights * f(mu.locations))


def total_variation(mu: AtomicMeasure) -> float:
    return math.fsum(np.abs(mu.weights)) if mu.atoms else 0.0


def total_mass(mu: AtomicMeasure) -> float:
    """mu([0,1]), which is also the pairing with the constant function 1."""
    return math.fsum(mu.weights) if mu.atoms else 0.0
