"""Partial-wave two-disc oracle: frozen certified energies, truncation
stability, scaling-law and symmetry properties."""

import math

import numpy as np
import pytest

from casimir import ClosedCurve, Configuration, GeometryError
from casimir.oracle_pw import TwoDiscSpec, energy_pw, xi_pw

# frozen certified values (dual-route: high-order partial waves cross-checked
# against an independent n=128 boundary discretization to ~1e-14 relative)
E_EQUAL = -0.03418594399501938        # r = 0.5, 0.5, centers 2.0 apart
E_UNEQUAL = -0.028993552949179973     # r = 0.5, 0.35, centers 1.9235384061671343
E_MASSIVE = -0.006011543759047514     # r = 0.5, 0.5, d = 2.0, m = 1

SPEC_EQUAL = TwoDiscSpec(0.5, 0.5, 2.0)
SPEC_UNEQUAL = TwoDiscSpec(0.5, 0.35, 1.9235384061671343)
SPEC_MASSIVE = TwoDiscSpec(0.5, 0.5, 2.0, mass=1.0)


def test_frozen_energies():
    e, est = energy_pw(SPEC_EQUAL, n_orders=60, tol=1e-10)
    assert e == pytest.approx(E_EQUAL, rel=1e-12)
    assert abs(e - E_EQUAL) <= max(est, 1e-13)
    e, _ = energy_pw(SPEC_UNEQUAL, n_orders=60, tol=1e-10)
    assert e == pytest.approx(E_UNEQUAL, rel=1e-12)
    e, _ = energy_pw(SPEC_MASSIVE, n_orders=60, tol=1e-10)
    assert e == pytest.approx(E_MASSIVE, rel=1e-12)


def test_truncation_stability():
    for kappa in (0.3, 1.0, 4.0):
        a = xi_pw(SPEC_EQUAL, kappa, n_orders=40)
        b = xi_pw(SPEC_EQUAL, kappa, n_orders=64)
        assert a == pytest.approx(b, abs=1e-13), kappa


def test_xi_pw_negative_and_decaying():
    vals = [xi_pw(SPEC_EQUAL, k) for k in (0.5, 1.0, 2.0, 4.0, 8.0)]
    assert all(v < 0 for v in vals)
    assert all(abs(b) < abs(a) for a, b in zip(vals, vals[1:]))
    # decay rate ~ e^{-2 kappa gap}: gap=1, so each doubling of kappa
    # squares the magnitude (roughly)
    assert abs(vals[3]) < abs(vals[2]) ** 2 * 10


def test_xi_pw_underflow_zero():
    # kappa * gap > 50: every partial-wave channel is below 1e-43
    assert xi_pw(SPEC_EQUAL, 51.0) == 0.0


def test_small_kappa_finite():
    # deep infrared: scaled Bessel ratios must stay finite (the raw
    # kve overflows here); value is moderate and negative
    v = xi_pw(SPEC_EQUAL, 8e-4, n_orders=40)
    assert np.isfinite(v)
    assert -2.0 < v < 0.0


def test_scaling_invariance():
    # Xi is scale invariant: (r1, r2, d; kappa) ~ (s r1, s r2, s d; kappa/s)
    s = 3.0
    big = TwoDiscSpec(0.5 * s, 0.5 * s, 2.0 * s)
    for kappa in (0.7, 2.0):
        assert xi_pw(SPEC_EQUAL, kappa) == pytest.approx(
            xi_pw(big, kappa / s), rel=1e-11), kappa


def test_energy_scaling():
    # massless energy scales like 1/length; the residual comes from the
    # fixed infrared cut u_min = 1e-8, which does not scale with geometry
    s = 2.0
    big = TwoDiscSpec(0.5 * s, 0.5 * s, 2.0 * s)
    e_big, _ = energy_pw(big, tol=1e-10)
    assert e_big == pytest.approx(E_EQUAL / s, rel=1e-6)


def test_from_configuration():
    cfg = Configuration(2, 0.0, [
        ClosedCurve.circle((0.0, 0.0), 0.5),
        ClosedCurve.circle((2.0, 0.0), 0.5),
    ])
    spec = TwoDiscSpec.from_configuration(cfg)
    assert spec.r1 == 0.5 and spec.r2 == 0.5
    assert spec.distance == pytest.approx(2.0, rel=1e-14)
    assert spec.gap == pytest.approx(1.0, rel=1e-13)
    bad = Configuration(2, 0.0, [
        ClosedCurve.ellipse((0.0, 0.0), (0.5, 0.3)),
        ClosedCurve.circle((2.0, 0.0), 0.5),
    ])
    with pytest.raises(GeometryError):
        TwoDiscSpec.from_configuration(bad)


def test_overlap_rejected():
    with pytest.raises(GeometryError):
        TwoDiscSpec(1.0, 1.0, 1.5)
    with pytest.raises(GeometryError):
        TwoDiscSpec(-0.5, 1.0, 3.0)
