"""Catalog construction, exact integrals, zero sets, structural probes."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from farfield.errors import InputError
from farfield.nonlinearity import (antiderivative_F, cantor_prefractal,
                                   check_hypotheses, compute_Zf, eval_capped,
                                   eval_f, from_table, integral_between, make,
                                   reflect, zero_set)

CATALOG = ("logistic", "abs-sin", "linear-decay", "cantor:3")


# ---------------------------------------------------------------------------
# construction and the evaluation window

def test_make_catalog():
    for spec in CATALOG:
        nl = make(spec)
        assert nl.kind.startswith(spec.split(":")[0])
        assert nl.s_max > 0
        assert nl.lipschitz_estimate > 0


def test_make_rejects_unknown():
    with pytest.raises(InputError):
        make("cubic")
    with pytest.raises(InputError):
        make(3.0)
    with pytest.raises(InputError):
        make("cantor:x")


def test_window_override():
    nl = make("linear-decay", s_max=0.5)
    assert nl.s_max == 0.5
    # the slope estimate is re-derived on the new window, not inherited
    assert abs(nl.lipschitz_estimate - 1.1) < 1e-6
    with pytest.raises(InputError):
        make("logistic", s_max=-1.0)
    with pytest.raises(InputError):
        make("logistic", s_max=math.inf)


def test_eval_window_enforced():
    nl = make("logistic")
    assert eval_f(nl, 0.5) == pytest.approx(0.25)
    with pytest.raises(InputError):
        eval_f(nl, 2.5)
    with pytest.raises(InputError):
        eval_f(nl, -0.1)
    # the capped entry point clips instead of raising
    assert eval_capped(nl, np.array([2.5]))[0] == pytest.approx(-2.0)


# ---------------------------------------------------------------------------
# antiderivative and the cancellation-free integral

def test_antiderivative_closed_forms():
    nl = make("logistic")
    zs = np.linspace(0.0, 2.0, 41)
    np.testing.assert_allclose(antiderivative_F(nl, zs),
                               zs**2 / 2 - zs**3 / 3, atol=1e-14)
    nl = make("abs-sin")
    assert antiderivative_F(nl, math.pi) == pytest.approx(2.0, abs=1e-12)
    assert antiderivative_F(nl, 2 * math.pi) == pytest.approx(4.0, abs=1e-12)
    nl = make("linear-decay")
    assert antiderivative_F(nl, 3.0) == pytest.approx(3.0 - 4.5, abs=1e-14)


@pytest.mark.parametrize("spec", CATALOG)
@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_integral_between_against_quadrature(spec):
    """integral_between must agree with independent adaptive quadrature."""
    nl = make(spec)
    rng = np.random.default_rng(7)
    f = lambda x: float(nl.fn(np.asarray(x, dtype=float)))
    for _ in range(25):
        lo, hi = np.sort(rng.uniform(0.0, nl.s_max, size=2))
        if hi - lo < 1e-12:
            continue
        want, err = quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=400)
        got = integral_between(nl, float(lo), float(hi))
        assert abs(got - want) < 1e-9 + 10 * err


def test_integral_between_tiny_slab_relative_accuracy():
    # just below the kink of |sin| the slab integral is ~5e-15; the closed
    # form keeps relative accuracy where the antiderivative difference
    # cancels catastrophically
    nl = make("abs-sin")
    d = 1e-7
    exact = 2.0 * math.sin(0.5 * d) ** 2
    got = integral_between(nl, math.pi - d, math.pi)
    assert abs(got - exact) / exact < 1e-6
    via_F = float(antiderivative_F(nl, math.pi) - antiderivative_F(nl, math.pi - d))
    assert abs(got - exact) * 100.0 < abs(via_F - exact)


def test_integral_between_orientation():
    nl = make("logistic")
    fwd = integral_between(nl, 0.2, 0.8)
    assert integral_between(nl, 0.8, 0.2) == -fwd
    assert integral_between(nl, 0.4, 0.4) == 0.0


# ---------------------------------------------------------------------------
# prefractal catalog member

def test_prefractal_intervals():
    iv = cantor_prefractal(1)
    assert iv == [(0.0, 1 / 3), (2 / 3, 1.0)]
    iv3 = cantor_prefractal(3)
    assert len(iv3) == 8
    lefts = [a for a, _ in iv3]
    want = [0.0, 2 / 27, 2 / 9, 8 / 27, 2 / 3, 20 / 27, 8 / 9, 26 / 27]
    np.testing.assert_allclose(lefts, want, atol=1e-15)
    with pytest.raises(InputError):
        cantor_prefractal(0)
    with pytest.raises(InputError):
        cantor_prefractal(17)


def test_cantor_tent_geometry():
    nl = make("cantor:3")
    # zero exactly on the kept intervals
    for a, b in cantor_prefractal(3):
        for s in np.linspace(a, b, 5):
            assert float(nl.fn(np.float64(s))) == 0.0
    # the first removed third peaks at height 1/6 in its middle
    assert float(nl.fn(np.float64(0.5))) == pytest.approx(1 / 6, abs=1e-15)


# ---------------------------------------------------------------------------
# zero sets and reachable levels

def test_zero_set_catalog():
    assert [round(p, 9) for p in zero_set(make("logistic")).points] == [0.0, 1.0]
    pts = zero_set(make("abs-sin")).points
    np.testing.assert_allclose(pts, [0.0, math.pi, 2 * math.pi, 3 * math.pi],
                               atol=1e-9)
    assert [round(p, 9) for p in zero_set(make("linear-decay")).points] == [1.0]
    E = zero_set(make("cantor:3"))
    assert not E.points
    assert len(E.intervals) == 8


def test_flat_interval_edges_stay_sub_tolerance():
    # reported edges must be usable as profile targets: |f(edge)| <= tol_f
    nl = make("cantor:3")
    E = zero_set(nl)
    for a, b in E.intervals:
        assert abs(float(nl.fn(np.float64(a)))) <= E.tol_f
        assert abs(float(nl.fn(np.float64(b)))) <= E.tol_f


def test_reachable_levels_catalog():
    np.testing.assert_allclose(compute_Zf(make("logistic")).points, [0.0, 1.0],
                               atol=1e-9)
    np.testing.assert_allclose(compute_Zf(make("abs-sin")).points,
                               [0.0, math.pi, 2 * math.pi, 3 * math.pi],
                               atol=1e-8)
    np.testing.assert_allclose(compute_Zf(make("linear-decay")).points, [1.0],
                               atol=1e-9)


def test_reachable_levels_sit_in_zero_set():
    for spec in CATALOG:
        nl = make(spec)
        E = zero_set(nl)
        members = list(E.points) + [e for iv in E.intervals for e in iv]
        for z in compute_Zf(nl).points:
            near_pt = any(abs(z - p) < 1e-6 for p in E.points)
            near_iv = any(a - 1e-6 <= z <= b + 1e-6 for a, b in E.intervals)
            assert near_pt or near_iv, (spec, z, members)


# ---------------------------------------------------------------------------
# structural hypotheses

def test_hypotheses_logistic():
    r = check_hypotheses(make("logistic"))
    assert r.h1 is True
    assert r.mu == pytest.approx(1.0, abs=1e-6)
    assert r.mu_prime == pytest.approx(0.5, abs=1e-3)
    assert r.h2 is False          # f goes negative past the hump
    assert r.h3 is True


def test_hypotheses_abs_sin():
    r = check_hypotheses(make("abs-sin"))
    assert r.h1 is False          # no nonpositive tail inside the window
    assert r.h2 is True
    assert r.h3 is None
    ratios = dict((round(z, 6), v) for z, v in r.h2_ratios)
    for z in (0.0, round(math.pi, 6), round(2 * math.pi, 6)):
        assert ratios[z] == pytest.approx(1.0, abs=1e-2)


def test_hypotheses_linear_decay():
    r = check_hypotheses(make("linear-decay"))
    assert r.h1 is True
    assert r.origin_ratio == math.inf    # f(0) > 0
    assert r.mu == pytest.approx(1.0, abs=1e-6)


def test_hypotheses_cantor():
    r = check_hypotheses(make("cantor:3"))
    assert r.h1 is False
    assert r.h2 is False          # flat zero stretches
    assert r.h3 is None
    assert any("flat zero stretch" in n for n in r.notes)


# ---------------------------------------------------------------------------
# reflection and tables

def test_reflect_involution():
    nl = make("abs-sin")
    g = reflect(reflect(nl, 7.0, 0.0), 7.0, 0.0)
    xs = np.linspace(0.0, 7.0, 1001)
    assert float(np.max(np.abs(g.fn(xs) - nl.fn(xs)))) < 1e-13


def test_reflect_validates_window():
    nl = make("cantor:3")          # window [0, 1] cannot reach M'+1 = 2
    with pytest.raises(InputError):
        reflect(nl, 1.0, 0.0)


def test_from_table_validation():
    with pytest.raises(InputError):
        from_table([0.0, 1.0], [1.0])
    with pytest.raises(InputError):
        from_table([0.5, 1.0], [1.0, 0.0])     # first sample off the origin
    nl = from_table([0.0, 1.0, 2.0], [1.0, 0.0, -1.0])
    assert float(nl.fn(np.float64(0.5))) == pytest.approx(0.5)
    assert nl.s_max == 2.0
