"""The relative spectral function Xi(i kappa) = log det(Q Qtilde^{-1}).

Computed as log det(I + Qtilde^{-1} T) through an LU slogdet after blockwise
Cholesky solves against Qtilde; both factorizations double as positivity
checks on the discretized layer operators.  A symmetric variant
log det(I + Qtilde^{-1/2} T Qtilde^{-1/2}) is kept for debugging: it is
mathematically identical and numerically close, so disagreement beyond
roundoff flags an assembly defect.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .errors import NumericalError
from .geometry import BoundaryDiscretization, Configuration, discretize, min_gap
from .layerop import assemble_Q, split_blocks

# kappa * min_gap beyond which |Xi| < e^{-1000} and is reported as exactly 0
UNDERFLOW_CUTOFF = 500.0


@dataclass
class XiCurve:
    """Xi sampled on a kappa grid."""

    kappas: np.ndarray
    values: np.ndarray
    n_per_obstacle: int


def _cholesky_blocks(qtilde, block_ranges, kappa):
    factors = []
    for lo, hi in block_ranges:
        try:
            factors.append(sla.cho_factor(qtilde[lo:hi, lo:hi], lower=True))
        except sla.LinAlgError as exc:
            raise NumericalError(
                f"self-block [{lo}:{hi}] not positive definite at kappa={kappa:g}; "
                "the discretization is too coarse for this frequency"
            ) from exc
    return factors


def xi_from_discretization(disc: BoundaryDiscretization, kappa: float, gap: float) -> float:
    """Xi(i kappa) for an assembled boundary discretization."""
    if gap > 0 and kappa * gap > UNDERFLOW_CUTOFF:
        return 0.0
    Q = assemble_Q(disc, kappa)
    qtilde, t = split_blocks(Q)
    factors = _cholesky_blocks(qtilde.entries, Q.block_ranges, kappa)
    a = np.empty_like(t.entries)
    for (lo, hi), fac in zip(Q.block_ranges, factors):
        a[lo:hi] = sla.cho_solve(fac, t.entries[lo:hi])
    np.fill_diagonal(a, a.diagonal() + 1.0)
    sign, logdet = np.linalg.slogdet(a)
    if sign <= 0:
        raise NumericalError(
            f"det(I + Qtilde^-1 T) has sign {sign:g} at kappa={kappa:g}; "
            "obstacles may be under-resolved or nearly touching"
        )
    return float(logdet)


def xi(config: Configuration, kappa: float, n_per_obstacle: int = 64) -> float:
    """Relative spectral function Xi(i kappa) = log det(Q Qtilde^{-1}).

    Nonpositive, increasing toward 0 in kappa, and exactly 0 for a single
    obstacle (T vanishes identically).
    """
    if not np.isfinite(kappa) or kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if len(config.obstacles) < 2:
        return 0.0
    disc = discretize(config, n_per_obstacle)
    return xi_from_discretization(disc, kappa, min_gap(config))


def xi_curve(config: Configuration, kappas, n_per_obstacle: int = 64,
             threads: int = 1) -> XiCurve:
    """Xi on a grid of kappa values, optionally thread-parallel.

    Results are written into preallocated slots, so the output ordering (and
    any later reduction over it) is independent of thread scheduling.
    """
    kappas = np.asarray(kappas, dtype=float)
    values = np.empty_like(kappas)
    if len(config.obstacles) < 2:
        values[:] = 0.0
        return XiCurve(kappas, values, n_per_obstacle)
    disc = discretize(config, n_per_obstacle)
    gap = min_gap(config)

    def work(i):
        values[i] = xi_from_discretization(disc, kappas[i], gap)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(len(kappas))))
    else:
        for i in range(len(kappas)):
            work(i)
    return XiCurve(kappas, values, n_per_obstacle)


def xi_symmetric(config: Configuration, kappa: float, n_per_obstacle: int = 64) -> float:
    """Debug route: log det(I + Qtilde^{-1/2} T Qtilde^{-1/2}) via a full
    (not blockwise) eigendecomposition.  Slower; same value as xi() up to
    roundoff."""
    if len(config.obstacles) < 2:
        return 0.0
    disc = discretize(config, n_per_obstacle)
    gap = min_gap(config)
    if gap > 0 and kappa * gap > UNDERFLOW_CUTOFF:
        return 0.0
    Q = assemble_Q(disc, kappa)
    qtilde, t = split_blocks(Q)
    w, v = np.linalg.eigh(qtilde.entries)
    if w.min() <= 0:
        raise NumericalError(
            f"Qtilde has nonpositive eigenvalue {w.min():g} at kappa={kappa:g}"
        )
    root_inv = v / np.sqrt(w)
    core = root_inv.T @ t.entries @ root_inv
    core = 0.5 * (core + core.T)
    ev = np.linalg.eigvalsh(core)
    if ev.min() <= -1.0:
        raise NumericalError(
            f"symmetrized coupling has eigenvalue {ev.min():g} <= -1 at kappa={kappa:g}"
        )
    return float(np.sum(np.log1p(ev)))
