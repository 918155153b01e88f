"""Independent oracles shared by the test modules."""

from fractions import Fraction

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from minimaxproj import parse_expr

# expressions whose minimax approximations are exercised throughout the suite
CORPUS = (
    "sin(4*pi*t)",
    "exp(t)",
    "abs(t - 0.3)",
    "sqrt(t)",
    "cos(3*t)",
    "t^5 - 2*t^2",
    "1/(1 + 10*t^2)",
    "sin(4*pi*t) + sin(20*pi*t)",
)


def fn(text):
    return parse_expr(text).as_function()


def lp_minimax(f, n, points=10_001):
    """min_a max_i |f(t_i) - sum_k a_k t_i^k| over a uniform grid, by linear programming.

    Returns (coefficients, optimal level).
    """
    return _lp_on(f, n, np.linspace(0.0, 1.0, points))


def _lp_on(f, n, t):
    points = len(t)
    ft = f(t)
    # Chebyshev basis keeps the LP well conditioned; convert back at the end
    x = 2.0 * t - 1.0
    V = np.polynomial.chebyshev.chebvander(x, n)
    ones = np.ones((points, 1))
    A_ub = np.vstack([np.hstack([V, -ones]), np.hstack([-V, -ones])])
    b_ub = np.concatenate([ft, -ft])
    c = np.zeros(n + 2)
    c[-1] = 1.0
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * (n + 1) + [(0, None)], method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    assert res.status == 0, res.message
    cheb = res.x[: n + 1]
    # p(t) = sum c_k T_k(2t - 1); expand into powers of t
    power = np.polynomial.chebyshev.cheb2poly(cheb)
    poly_x = np.polynomial.Polynomial(power)
    poly_t = poly_x(np.polynomial.Polynomial([-1.0, 2.0]))
    coeffs = np.zeros(n + 1)
    coeffs[: len(poly_t.coef)] = poly_t.coef
    return coeffs, float(res.x[-1])


def _residual_peaks(f, coeffs, fine=100_001):
    """Local maxima of |f - p| on [0,1], refined with a bounded scalar search."""
    t = np.linspace(0.0, 1.0, fine)
    r = np.abs(f(t) - np.polynomial.polynomial.polyval(t, coeffs))
    pad = np.concatenate(([-1.0], r, [-1.0]))
    idx = np.flatnonzero((pad[1:-1] >= pad[:-2]) & (pad[1:-1] >= pad[2:]))
    h = 1.0 / (fine - 1)
    out = []
    for i in idx:
        lo, hi = max(0.0, t[i] - h), min(1.0, t[i] + h)
        res = minimize_scalar(lambda x: -abs(float(f(x)) - np.polynomial.polynomial.polyval(x, coeffs)),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        out.append(res.x if -res.fun > r[i] else t[i])
        out.append(t[i])
    return np.array(out)


def lp_minimax_refined(f, n, rounds=8):
    """Cutting-plane LP: grow the point set by the residual peaks until the level settles.

    Returns (coefficients, lower, upper) where lower is the LP level on the
    final point set and upper is the true sup of the LP residual; the exact
    minimax error lies between them.
    """
    pts = np.linspace(0.0, 1.0, 2001)
    for _ in range(rounds):
        coeffs, lower = _lp_on(f, n, pts)
        peaks = _residual_peaks(f, coeffs)
        r = np.abs(f(peaks) - np.polynomial.polynomial.polyval(peaks, coeffs))
        upper = float(r.max())
        if upper - lower <= 1e-12 * max(1.0, upper):
            break
        pts = np.unique(np.concatenate([pts, peaks]))
    return coeffs, lower, upper


def exact_vandermonde_det(n, t):
    """det[t^(i*j)], i, j = 0..n, by exact rational Gaussian elimination on the explicit matrix."""
    T = Fraction(t)
    M = [[T ** (i * j) for j in range(n + 1)] for i in range(n + 1)]
    det = Fraction(1)
    size = n + 1
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, size):
            factor = M[r][c] / M[c][c]
            if factor:
                M[r] = [a - factor * b for a, b in zip(M[r], M[c])]
    return det
