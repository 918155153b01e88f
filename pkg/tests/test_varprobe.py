import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minimaxproj import (ZERO_MEASURE, AtomicMeasure, ContinuousFn, DomainError, Polynomial,
                         PreconditionError, ValidationError, annihilating_measure, coderivative_quotient,
                         exclusion_report, gateaux_at_poly, gateaux_poly_direction, orthogonal_check, pair,
                         probe_convex, probe_scaling, probe_shift, remez_project, sup_norm)
from minimaxproj.varprobe import CERTIFIED, DEFAULT_STEPS, INCONCLUSIVE

from helpers import fn

SIN4 = fn("sin(4*pi*t)")
TSQ = fn("t^2")
EXP = fn("exp(t)")

ONE_AT = lambda t, w=1.0: AtomicMeasure(((t, w),))  # noqa: E731


# -- the raw quotient -------------------------------------------------------

def test_quotient_vanishes_for_equal_measures():
    mu = AtomicMeasure(((0.2, 1.0), (0.7, -0.4)))
    p = remez_project(EXP, 2).p
    lam = 0.25
    q = coderivative_quotient(mu, mu, EXP, p, EXP + lam, p + Polynomial((lam,)))
    assert q == pytest.approx(0.0, abs=1e-15)


def test_quotient_half_for_unit_mass_difference():
    p = remez_project(EXP, 1).p
    for lam in (1.0, 0.1, 1e-5):
        q = coderivative_quotient(ONE_AT(0.4), ZERO_MEASURE, EXP, p, EXP + lam, p + Polynomial((lam,)))
        # g - f is formed by subtraction here, which costs about eps * ||f|| / lam
        assert q == pytest.approx(0.5, abs=1e-15 * np.e / lam + 1e-15)


def test_quotient_undefined_at_base_point():
    p = remez_project(EXP, 1).p
    with pytest.raises(DomainError):
        coderivative_quotient(ONE_AT(0.4), ZERO_MEASURE, EXP, p, EXP, p)


# -- shift -------------------------------------------------------------------

def test_shift_examples():
    o = probe_shift(EXP, 1, ONE_AT(0.3), ZERO_MEASURE, +1)
    assert o.estimated_limit == pytest.approx(0.5, abs=1e-12) and o.verdict == CERTIFIED
    o = probe_shift(EXP, 1, ZERO_MEASURE, ONE_AT(0.3), -1)
    assert o.estimated_limit == pytest.approx(0.5, abs=1e-12) and o.verdict == CERTIFIED
    mu = AtomicMeasure(((0.1, 2.0), (0.9, -1.0)))
    o = probe_shift(EXP, 1, mu, mu, +1)
    assert o.estimated_limit == 0.0 and o.verdict == INCONCLUSIVE


def test_shift_steps_validated():
    with pytest.raises(ValidationError):
        probe_shift(EXP, 1, ZERO_MEASURE, ZERO_MEASURE, 1, steps=(0.5, 0.5))
    with pytest.raises(ValidationError):
        probe_shift(EXP, 1, ZERO_MEASURE, ZERO_MEASURE, 1, steps=(0.5, -0.1))
    with pytest.raises(ValidationError):
        probe_shift(EXP, 1, ZERO_MEASURE, ZERO_MEASURE, 2)


# -- convex ------------------------------------------------------------------

@pytest.mark.parametrize("gamma, closed, verdict", [
    (ONE_AT(3 / 8), 1.0, CERTIFIED),
    (ONE_AT(1 / 8), -1.0, INCONCLUSIVE),
    (ZERO_MEASURE, 0.0, INCONCLUSIVE),
])
def test_convex_examples(gamma, closed, verdict):
    o = probe_convex(SIN4, 1, gamma, ONE_AT(0.5, 7.0))
    assert o.closed_form == pytest.approx(closed, abs=1e-12)
    assert o.estimated_limit == pytest.approx(closed, abs=1e-12)
    assert o.verdict == verdict


def test_convex_needs_f_outside_Pn():
    with pytest.raises(PreconditionError):
        probe_convex(fn("1 + t"), 1, ONE_AT(0.2), ZERO_MEASURE)


# -- scaling -----------------------------------------------------------------

@pytest.mark.parametrize("mu, closed, verdict", [
    (ONE_AT(1 / 8), 1.0, CERTIFIED),
    (ONE_AT(1 / 8, -1.0), -1.0, INCONCLUSIVE),
    (AtomicMeasure(((1 / 8, 1.0), (5 / 8, -1.0))), 0.0, INCONCLUSIVE),
])
def test_scaling_examples(mu, closed, verdict):
    o = probe_scaling(SIN4, 1, mu, ZERO_MEASURE)
    assert o.closed_form == pytest.approx(closed, abs=1e-12)
    assert o.estimated_limit == pytest.approx(closed, abs=1e-12)
    assert o.verdict == verdict


def test_scaling_requires_annihilator():
    with pytest.raises(PreconditionError):
        probe_scaling(SIN4, 1, ONE_AT(0.2), ONE_AT(0.3))
    with pytest.raises(PreconditionError):
        probe_scaling(fn("0"), 1, ONE_AT(0.2), ZERO_MEASURE)


# -- orthogonality ------------------------------------------------------------

def test_orthogonal_examples():
    assert orthogonal_check(ZERO_MEASURE, 5)
    mu = AtomicMeasure(((0.0, 1.0), (1.0, -1.0)))
    assert orthogonal_check(mu, 0)
    assert not orthogonal_check(mu, 1)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 5), seed=st.integers(0, 2**32 - 1))
def test_annihilating_measures_kill_polynomials(n, seed):
    r = np.random.default_rng(seed)
    pts = np.sort(r.choice(np.linspace(0, 1, 1001), n + 2, replace=False))
    gamma = annihilating_measure(pts, n, scale=r.uniform(0.5, 3))
    assert orthogonal_check(gamma, n)
    tol = 1e-10
    for _ in range(5):
        a = r.uniform(-1, 1, n + 1)
        assert abs(pair(gamma, Polynomial(tuple(a)))) <= (n + 1) * tol * np.max(np.abs(a))


def test_annihilating_measure_validation():
    with pytest.raises(ValidationError):
        annihilating_measure([0.1, 0.2], 1)


# -- path exactness against the Remez engine ----------------------------------

@pytest.mark.parametrize("f", [SIN4, TSQ, EXP, fn("abs(t - 0.3)")])
def test_closed_form_paths_match_remez(f):
    n = 2
    tol = 1e-10
    p = remez_project(f, n, tol).p
    for lam in (0.5, 2.0**-6, 2.0**-12):
        shifted = remez_project(f + lam, n, tol).p
        assert sup_norm(shifted - (p + Polynomial((lam,)))) <= 10 * tol * max(1.0, sup_norm(f))
        scaled = remez_project((1 + lam) * f, n, tol).p
        assert sup_norm(scaled - (1 + lam) * p) <= 10 * tol * max(1.0, sup_norm(f))
        mixed = remez_project((1 - lam) * f + lam * p, n, tol).p
        assert sup_norm(mixed - p) <= 10 * tol * max(1.0, sup_norm(f))


# -- random probes ---------------------------------------------------------------

def _random_measure(r, k_max=4, scale=2.0):
    k = int(r.integers(1, k_max + 1))
    return AtomicMeasure(tuple(zip(r.uniform(0, 1, k).tolist(), r.uniform(-scale, scale, k).tolist())))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), which=st.sampled_from(["sin(4*pi*t)", "t^2", "exp(t)"]),
       n=st.integers(0, 3))
def test_probe_limits_and_verdicts(seed, which, n):
    r = np.random.default_rng(seed)
    f = fn(which)
    mu = _random_measure(r)
    gamma = _random_measure(r)
    annihilator = annihilating_measure(np.sort(r.choice(np.linspace(0.01, 0.99, 99), n + 2, replace=False)), n)
    for g in (gamma, annihilator):
        rep = exclusion_report(f, n, mu, g)
        for o in rep.outcomes:
            assert abs(o.estimated_limit - o.closed_form) <= 1e-6
            if o.path_name.startswith(("shift", "scaling")):
                assert o.spread <= 1e-12
            assert (o.verdict == CERTIFIED) == (o.closed_form > 0 and o.estimated_limit > 1e-6)
            if o.verdict == CERTIFIED:
                assert o.closed_form > 0


# -- exclusion reports ------------------------------------------------------------

def test_theta_star_excluded_by_shift():
    rep = exclusion_report(EXP, 1, ONE_AT(0.4, 2.0), ZERO_MEASURE, paths=("shift",))
    assert any(c.startswith("theta* not in D*P(f)(mu)") for c in rep.conclusions)


def test_fixed_point_excluded_by_scaling():
    # mu annihilates P_1 but pairs positively with sin(4 pi t)
    mu = AtomicMeasure(((1 / 8, 1.0), (3 / 8, -2.0), (5 / 8, 1.0)))
    assert orthogonal_check(mu, 1) and pair(mu, SIN4) > 0
    rep = exclusion_report(SIN4, 1, mu, mu)
    assert "mu is not a fixed point of D*P(f)" in rep.conclusions
    scaling = [o for o in rep.outcomes if o.path_name == "scaling"]
    assert scaling and scaling[0].verdict == CERTIFIED


def test_no_witness_for_polynomial_f():
    mu = AtomicMeasure(((0.2, 1.0), (0.6, 0.5)))
    rep = exclusion_report(fn("1 + 2*t"), 1, mu, mu)
    assert rep.conclusions == ()
    assert all(o.verdict == INCONCLUSIVE for o in rep.outcomes)
    assert not any(o.path_name == "convex" for o in rep.outcomes)


def test_unknown_path_rejected():
    with pytest.raises(ValidationError):
        exclusion_report(EXP, 1, ZERO_MEASURE, ZERO_MEASURE, paths=("diagonal",))


def test_default_schedule():
    assert DEFAULT_STEPS[0] == 0.5 and DEFAULT_STEPS[-1] == 2.0**-20 and len(DEFAULT_STEPS) == 20


# -- Gateaux quotients ---------------------------------------------------------------

def test_gateaux_poly_direction_examples():
    out = gateaux_poly_direction(SIN4, 1, Polynomial((0.0, 1.0)))
    assert out.max_defect <= 1e-9
    out = gateaux_poly_direction(TSQ, 1, Polynomial((1.0,)))
    assert out.max_defect <= 1e-9
    assert out.limit == Polynomial((1.0, 0.0))
    q = Polynomial((0.3, -1.0, 2.0))
    out = gateaux_poly_direction(fn("1 - t^2"), 2, q)
    assert out.max_defect <= 1e-12


def test_gateaux_at_poly_examples():
    out = gateaux_at_poly(Polynomial((3.0, 2.0)), 1, TSQ)
    np.testing.assert_allclose(out.limit.coeffs, (-1 / 8, 1.0), atol=1e-12)
    assert out.max_defect <= 1e-9
    out = gateaux_at_poly(Polynomial.zero(1), 1, SIN4)
    assert sup_norm(out.limit) <= 1e-10 and out.max_defect <= 1e-9
    q = Polynomial((0.5, -1.0, 0.25))
    out = gateaux_at_poly(q, 2, (2 * q).as_function())
    assert out.max_defect <= 1e-9
    np.testing.assert_allclose(out.limit.coeffs, (2 * q).coeffs, atol=1e-12)


def test_gateaux_rejects_zero_directions():
    with pytest.raises(ValidationError):
        gateaux_poly_direction(SIN4, 1, Polynomial.zero(1))
    with pytest.raises(ValidationError):
        gateaux_at_poly(Polynomial((1.0,)), 1, ContinuousFn.constant(0.0))


def test_gateaux_quotients_are_polynomials_of_degree_n():
    out = gateaux_poly_direction(EXP, 3, Polynomial((1.0, 1.0)))
    assert all(q.degree_bound == 3 for q in out.quotient_functions)
    assert len(out.quotient_functions) == len(out.steps) == 12
