"""Closed forms for two Dirichlet intervals on the line.

Everything here is expressed in cancellation-free all-exponential form so the
large-kappa regime stays accurate; the sinh/cosh textbook forms lose all
digits once kappa * gap passes ~350.

Geometry convention: intervals [a1, b1] and [a2, b2] with b1 < a2, gap
g = a2 - b1.  For a gap point x, u = x - b1 and v = a2 - x (both in (0, g),
u + v = g).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from .geometry import Configuration, Interval


def _gap_of(config: Configuration):
    obs = sorted(config.obstacles, key=lambda o: o.a)
    if len(obs) != 2 or config.dimension != 1:
        raise ValueError("exact 1d forms need exactly two intervals")
    if config.mass != 0.0:
        raise ValueError("exact 1d forms are massless")
    return obs[0], obs[1], obs[1].a - obs[0].b


def xi_exact_1d(config: Configuration, kappa) -> np.ndarray:
    """Xi(i kappa) = log(1 - e^{-2 kappa g})."""
    _, _, g = _gap_of(config)
    return np.log1p(-np.exp(-2.0 * np.asarray(kappa, dtype=float) * g))


def energy_exact_1d(config: Configuration) -> float:
    """E_rel = -pi / (24 g)."""
    _, _, g = _gap_of(config)
    return -math.pi / (24.0 * g)


def force_exact_1d(config: Configuration) -> float:
    """Signed force on the right interval along +x: attraction means the
    force points toward the left interval, so the value is -pi/(24 g^2)."""
    _, _, g = _gap_of(config)
    return -math.pi / (24.0 * g**2)


def green_free_1d(kappa, x, y):
    """e^{-kappa |x-y|} / (2 kappa)."""
    return np.exp(-kappa * np.abs(np.asarray(x) - np.asarray(y))) / (2.0 * kappa)


def green_rel_diag_1d(config: Configuration, kappa: float, x) -> np.ndarray:
    """Diagonal of the interaction Green's function: the full two-interval
    Green's function minus every single-interval background (free parts
    cancel).  The single-wall image terms therefore do not appear; the field
    is finite up to the walls.

    Gap points (u = x - b1, v = a2 - x):
        e^{-2 kappa g} (2 - e^{-2 kappa u} - e^{-2 kappa v})
           / (2 kappa (1 - e^{-2 kappa g}))
    Elsewhere (including inside the obstacles, by continuation):
        e^{-2 kappa D} / (2 kappa),   D = distance to the far gap face,
    because the near obstacle screens the far one exactly in one dimension.
    """
    lo, hi, g = _gap_of(config)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    eg = math.exp(-2.0 * kappa * g)
    for i, xi_ in np.ndenumerate(x):
        if lo.b < xi_ < hi.a:
            eu = math.exp(-2.0 * kappa * (xi_ - lo.b))
            ev = math.exp(-2.0 * kappa * (hi.a - xi_))
            out[i] = eg * (2.0 - eu - ev) / (2.0 * kappa * (1.0 - eg))
        else:
            d = (hi.a - xi_) if xi_ <= lo.b else (xi_ - lo.b)
            out[i] = math.exp(-2.0 * kappa * d) / (2.0 * kappa)
    return out


def green_rel_mixed_diag_1d(config: Configuration, kappa: float, x) -> np.ndarray:
    """Diagonal of d_x d_y applied to the interaction Green's function.

    Gap points:  -(kappa/2) e^{-2 kappa g} (2 + e^{-2 kappa u} + e^{-2 kappa v})
                 / (1 - e^{-2 kappa g});
    elsewhere:  +(kappa/2) e^{-2 kappa D}  with D as in green_rel_diag_1d.
    """
    lo, hi, g = _gap_of(config)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    eg = math.exp(-2.0 * kappa * g)
    for i, xi_ in np.ndenumerate(x):
        if lo.b < xi_ < hi.a:
            eu = math.exp(-2.0 * kappa * (xi_ - lo.b))
            ev = math.exp(-2.0 * kappa * (hi.a - xi_))
            out[i] = -(kappa / 2.0) * eg * (2.0 + eu + ev) / (1.0 - eg)
        else:
            d = (hi.a - xi_) if xi_ <= lo.b else (xi_ - lo.b)
            out[i] = (kappa / 2.0) * math.exp(-2.0 * kappa * d)
    return out


def h_rel_profile_1d(config: Configuration, x) -> np.ndarray:
    """Massless interaction Hamiltonian-jet diagonal
    -(2/pi) int_0^inf kappa^2 G_rel(x,x; kappa) d kappa in closed form
    (verified against 50-digit quadrature):

    gap points (u = x - b1, v = a2 - x):
        -pi/(12 g^2) + [psi'(1 + u/g) + psi'(1 + v/g)] / (4 pi g^2),
    elsewhere: -1/(4 pi D^2) with D the distance to the far gap face.

    Finite at the walls; half the value at the gap midpoint for g = 1 is
    pi/12 - 1/pi = -0.056510498384641235.
    """
    lo, hi, g = _gap_of(config)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i, xi_ in np.ndenumerate(x):
        if lo.b < xi_ < hi.a:
            u = xi_ - lo.b
            v = hi.a - xi_
            out[i] = (-math.pi / (12.0 * g**2)
                      + (sp.polygamma(1, 1.0 + u / g) + sp.polygamma(1, 1.0 + v / g))
                      / (4.0 * math.pi * g**2))
        else:
            d = (hi.a - xi_) if xi_ <= lo.b else (xi_ - lo.b)
            out[i] = -1.0 / (4.0 * math.pi * d**2)
    return out


def t00_exact_1d(config: Configuration, x) -> np.ndarray:
    """Massless renormalized energy density: -pi/(24 g^2) at every gap point
    and exactly 0 everywhere else (the per-frequency integrand cancels
    pointwise outside the gap)."""
    lo, hi, g = _gap_of(config)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    gap = (x > lo.b) & (x < hi.a)
    out[gap] = -math.pi / (24.0 * g**2)
    return out


def boundary_kernel_exact_1d(config: Configuration, kappa: float, v: float) -> float:
    """Hadamard boundary kernel integrand at distance v inside the gap from
    the right interval's inner face, at frequency kappa:

        -(kappa/2) [2 E_g + E_u + E_v E_g] / (1 - E_g),   E_s = e^{-2 kappa s}

    with u = g - v.  Its kappa-integral (times 2/pi ... conventions in
    stressforce) has the v->0 limit -pi/(6 g^2)."""
    _, _, g = _gap_of(config)
    u = g - v
    eg = math.exp(-2.0 * kappa * g)
    eu = math.exp(-2.0 * kappa * u)
    ev = math.exp(-2.0 * kappa * v)
    return -(kappa / 2.0) * (2.0 * eg + eu + ev * eg) / (1.0 - eg)


def two_intervals(g: float, w1: float = 1.0, w2: float = 1.0, left: float = 0.0) -> Configuration:
    """Convenience: [left - w1, left] and [left + g, left + g + w2], massless."""
    return Configuration(
        1, 0.0, (Interval(left - w1, left), Interval(left + g, left + g + w2))
    )
