"""Independent cross-check for two discs: partial-wave (multipole) route.

For discs of radii R1, R2 with center distance d, the relative spectral
function has the classical scattering form

    Xi(i kappa) = log det(I - D1 U D2 U^T),
    (D_a)_nn = I_n(kappa R_a) / K_n(kappa R_a),   U_nm = K_{n-m}(kappa d),

with integer orders n, m in [-N, N].  Rearranged as det(I - A A^T) with
A = D1^{1/2} U D2^{1/2}, every entry of A is computed as the exponential of a
log-sum of scaled Bessel values, so the product never overflows: the exponent
is bounded by -kappa (d - R1 - R2) = -kappa * gap.

This module shares no assembly code with the boundary-integral route; it is
the certification oracle for the d=2 solver.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import GeometryError, NumericalError
from .geometry import Configuration

# kappa * gap beyond which every entry of A is below e^{-50} and Xi ~ -e^{-100}
_PW_UNDERFLOW = 50.0


@dataclass(frozen=True)
class TwoDiscSpec:
    r1: float
    r2: float
    distance: float
    mass: float = 0.0

    def __post_init__(self):
        if min(self.r1, self.r2) <= 0:
            raise GeometryError("disc radii must be positive")
        if self.distance <= self.r1 + self.r2:
            raise GeometryError(
                f"disc centers at distance {self.distance} overlap "
                f"(radii {self.r1}, {self.r2})"
            )

    @property
    def gap(self) -> float:
        return self.distance - self.r1 - self.r2

    @classmethod
    def from_configuration(cls, config: Configuration) -> "TwoDiscSpec":
        if config.dimension != 2 or len(config.obstacles) != 2:
            raise GeometryError("partial-wave oracle needs exactly two 2d obstacles")
        c1, c2 = config.obstacles
        if not (c1.is_circle and c2.is_circle):
            raise GeometryError("partial-wave oracle is only defined for circles")
        d = math.hypot(c1.centroid()[0] - c2.centroid()[0],
                       c1.centroid()[1] - c2.centroid()[1])
        return cls(c1.circle_radius, c2.circle_radius, d, config.mass)


def _log_ratio_ik(orders: np.ndarray, x: float) -> np.ndarray:
    """log[I_n(x)/K_n(x)] - 2x, entirely from scaled functions."""
    n = np.abs(orders)
    ive = sp.ive(n, x)
    kve = sp.kve(n, x)
    if np.any(ive == 0.0):
        # order so high the scaled I underflows; ratio is effectively -inf
        out = np.full(n.shape, -np.inf)
        ok = ive > 0.0
        out[ok] = np.log(ive[ok]) - np.log(kve[ok])
        return out
    return np.log(ive) - np.log(kve)


def xi_pw(spec: TwoDiscSpec, kappa: float, n_orders: int = 40) -> float:
    """Xi(i kappa) from the multipole determinant with orders |n| <= n_orders."""
    if not np.isfinite(kappa) or kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if kappa * spec.gap > _PW_UNDERFLOW:
        return 0.0
    orders = np.arange(-n_orders, n_orders + 1)
    half1 = 0.5 * (_log_ratio_ik(orders, kappa * spec.r1) + 2.0 * kappa * spec.r1)
    half2 = 0.5 * (_log_ratio_ik(orders, kappa * spec.r2) + 2.0 * kappa * spec.r2)
    diffs = np.abs(orders[:, None] - orders[None, :])
    xd = kappa * spec.distance
    p = np.arange(2 * n_orders + 1)
    kv = sp.kve(p, xd)
    logu = np.empty(len(p))
    ok = np.isfinite(kv)
    logu[ok] = np.log(kv[ok]) - xd
    if not ok.all():
        # kve overflows for large order at small argument; K_p(x) ~
        # Gamma(p)/2 * (2/x)^p there, relative error O(x^2/p)
        big = p[~ok].astype(float)
        logu[~ok] = sp.gammaln(big) - math.log(2.0) + big * math.log(2.0 / xd)
    log_a = half1[:, None] + logu[diffs] + half2[None, :]
    # exponent bound: -kappa*gap + truncation slack; all entries positive
    a = np.exp(log_a)
    tail = np.exp(half1[-1] + half2[-1] + logu[0])
    if tail > 1e-14:
        warnings.warn(
            f"partial-wave truncation at n_orders={n_orders} leaves edge "
            f"weight {tail:.1e} at kappa={kappa:g}; increase n_orders",
            stacklevel=2,
        )
    core = np.eye(len(orders)) - a @ a.T
    sign, logdet = np.linalg.slogdet(core)
    if sign <= 0:
        raise NumericalError(
            f"partial-wave determinant nonpositive at kappa={kappa:g}; "
            "n_orders likely too small for this geometry"
        )
    return float(logdet)


def energy_pw(spec: TwoDiscSpec, n_orders: int = 40, tol: float = 1e-10):
    """Relative energy from the partial-wave route, same frequency grid as
    the boundary-integral solver.  Returns (energy, error_estimate)."""
    from .energy import build_frequency_grid
    from .geometry import ClosedCurve

    c1 = ClosedCurve.circle((0.0, 0.0), spec.r1)
    c2 = ClosedCurve.circle((spec.distance, 0.0), spec.r2)
    config = Configuration(2, spec.mass, (c1, c2))
    grid = build_frequency_grid(config, tol)
    fine = np.array([xi_pw(spec, k, n_orders) for k in grid.kappas()])
    coarse = np.array([xi_pw(spec, k, n_orders) for k in grid.kappas(grid.coarse_nodes)])
    e_fine = float(np.sum(grid.weights * fine)) / (2.0 * math.pi)
    e_coarse = float(np.sum(grid.coarse_weights * coarse)) / (2.0 * math.pi)
    head = abs(grid.u_min * fine[0]) / (2.0 * math.pi) if grid.u_min else 0.0
    return e_fine, abs(e_fine - e_coarse) + grid.tail_bound + head
