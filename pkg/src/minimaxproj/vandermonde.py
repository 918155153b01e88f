"""Determinants A_n(t) = det[t^(i*j)], coefficient recovery and the
resulting explicit coefficient bounds for bounded sets of polynomials.

The matrix [t^(i*j)] is a Vandermonde matrix in the nodes 1, t, ..., t^n, so
its determinant is the product of node differences.  That is how it is
evaluated here; the explicit determinant only appears in the tests.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, NumericalError, PreconditionError, ValidationError
from .funcspace import DEFAULT_GRID, GridSpec, Polynomial, sup_norm

MAX_DEGREE = 12


def _check_args(n, t):
    if int(n) != n or not 1 <= n <= MAX_DEGREE:
        raise DomainError(f"n must be an integer in [1, {MAX_DEGREE}], got {n!r}")
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0,1), got {t!r}")


def _pow_minus_one(t: float, k: int) -> float:
    """t^k - 1 without cancellation for t close to 1."""
    return math.expm1(k * math.log(t))


def eval_An(n: int, t: float) -> float:
    """det of the (n+1)x(n+1) matrix with entries t^(i*j), i, j = 0..n."""
    _check_args(n, t)
    det = 1.0
    for j in range(1, n + 1):
        for i in range(j):
            # t^j - t^i = t^i (t^(j-i) - 1)
            det *= t**i * _pow_minus_one(t, j - i)
    return det


def recursion_factor(n: int, t: float) -> float:
    """(t-1)(t^2-1)...(t^n-1) * t t^2 ... t^(n-1), so A_n = factor * A_(n-1)."""
    out = 1.0
    for k in range(1, n + 1):
        out *= _pow_minus_one(t, k)
    for k in range(1, n):
        out *= t**k
    return out


def check_recursion(n: int, t: float) -> float:
    """Absolute residual of A_n(t) = factor(n, t) * A_(n-1)(t), with A_1(t) = t - 1."""
    if int(n) != n or n < 2:
        raise DomainError(f"the recursion needs n >= 2, got {n!r}")
    _check_args(n, t)
    prev = t - 1.0 if n == 2 else eval_An(n - 1, t)
    return abs(eval_An(n, t) - recursion_factor(n, t) * prev)


def dyadic_nodes(n: int) -> np.ndarray:
    """1, 1/2, 1/4, ..., 2^-n."""
    return np.ldexp(1.0, -np.arange(n + 1))


def _bjorck_pereyra(x: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve sum_j a_j x_i^j = b_i in O(n^2): Newton divided differences,
    then expansion of the Newton form into monomials."""
    n = len(x) - 1
    a = np.array(b, dtype=float)
    for k in range(n):
        for j in range(n, k, -1):
            a[j] = (a[j] - a[j - 1]) / (x[j] - x[j - k - 1])
    for k in range(n - 1, -1, -1):
        for j in range(k, n):
            a[j] -= x[k] * a[j + 1]
    return a


def recover_coefficients(samples) -> Polynomial:
    """The polynomial p of degree <= n with p(2^-k) = samples[k], k = 0..n.

    The dyadic Vandermonde system is badly conditioned (about 2e6 at n = 6,
    2e10 at n = 8), so the recovered coefficients carry an error of roughly
    that factor times the rounding error already present in the samples.
    """
    b = np.asarray(samples, dtype=float).ravel()
    if b.size == 0:
        raise ValidationError("need at least one sample")
    if not np.all(np.isfinite(b)):
        raise ValidationError("samples must be finite")
    n = b.size - 1
    if n > MAX_DEGREE:
        raise DomainError(f"at most {MAX_DEGREE + 1} samples are supported, got {n + 1}")
    a = _bjorck_pereyra(dyadic_nodes(n), b)
    if not np.all(np.isfinite(a)):
        raise NumericalError(f"dyadic Vandermonde solve of size {n + 1} broke down")
    return Polynomial(tuple(a))


@dataclass(frozen=True)
class CoefficientBoundReport:
    n: int
    sup_bound: float
    coef_bound: float
    deriv_coef_bound: float
    deriv_sup_bound: float

    def to_dict(self) -> dict:
        return asdict(self)


def coefficient_bounds(n: int, b: float) -> CoefficientBoundReport:
    """Bounds implied by sup|p| <= b on [0,1] for p of degree <= n.

    coef_bound = n! b / |A_n(1/2)| bounds every |a_k|; multiplying by n gives
    a bound on the coefficients of p', and by n^2 a bound on sup|p'|.
    """
    if not b >= 0:
        raise DomainError(f"sup bound must be nonnegative, got {b!r}")
    base = math.factorial(n) * b / abs(eval_An(n, 0.5))
    return CoefficientBoundReport(
        n=n,
        sup_bound=float(b),
        coef_bound=base,
        deriv_coef_bound=n * base,
        deriv_sup_bound=n * n * base,
    )


def verify_coefficient_bound(p: Polynomial, n: int, b: float, grid: GridSpec = DEFAULT_GRID) -> bool:
    """True iff every coefficient of p is within coefficient_bounds(n, b).coef_bound.

    Raises PreconditionError when p is not actually bounded by b, or has
    degree above n; that is not a failure of the bound.
    """
    try:
        p = p.padded(n)
    except ValidationError as exc:
        raise PreconditionError(str(exc)) from exc
    s = sup_norm(p, grid)
    if s > b * (1 + 1e-12) + 1e-15:
        raise PreconditionError(f"sup|p| = {s!r} exceeds the stated bound {b!r}")
    bound = coefficient_bounds(n, b).coef_bound
    return bool(np.all(np.abs(p.array) <= bound))


def empirical_coefficient_ratio(n: int, samples: int, seed: int = 0, grid: GridSpec = DEFAULT_GRID) -> float:
    """Largest max_k |a_k| / sup|p| seen over random polynomials of degree <= n.

    Compared against coef_bound / b this shows how loose the explicit bound
    is; it is an observation, not a bound.
    """
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(samples):
        p = Polynomial(tuple(rng.uniform(-1.0, 1.0, n + 1)))
        s = sup_norm(p, grid)
        if s > 0:
            best = max(best, float(np.max(np.abs(p.array))) / s)
    return best
