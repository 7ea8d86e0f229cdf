"""Single-layer boundary matrices Q(i kappa) and their block split Q = Qtilde + T.

The d=2 self-blocks use the classical spectral quadrature for periodic
logarithmic singularities: split (1/2pi) K_0(kappa r) into a log part
-(1/4pi) I_0(kappa r) * log(4 sin^2((t-s)/2)) handled by the trigonometric
weights R_k, plus a smooth remainder integrated by the trapezoid rule.  The
split multiplies I_0, which grows like e^{kappa r}; beyond kappa*diam ~ 30 the
cancellation costs all float64 digits, so large-kappa self-blocks switch to an
exact Fourier circulant (circles) or a diagonally dominant surrogate
(other curves; only exercised where |Xi| <= e^{-2 kappa gap} is negligible).

All matrices are symmetrically weighted: entry_{ij} = sqrt(w_i w_j) k(z_i, z_j)
(with the singular correction on self-blocks), which keeps Nystrom eigenvalues
and makes off-boundary bilinear forms read -(sqrt(w) g_x)^T Q^{-1} (sqrt(w) g_y).

Scheme selection per self-block, measured on circles against the exact
circulant: the log-split's aliasing garbage grows like exp(0.95 kappa diam)
and shrinks only algebraically (about n^-3) with the node count, while staying
confined to Fourier modes near the grid Nyquist.  Plain Kress is used while
the garbage estimate exp(0.95 kd - (3 ln n + 1.7)) stays below 1e-4 (keeps the
matrix positive definite with margin).  Beyond that, circles switch to the
circulant and other curves to Kress assembled on an oversampled grid and
projected onto the coarse grid's resolvable modes, which removes the aliasing
and leaves pure cancellation roundoff I0(kd) * eps, usable to kd about 32.
Past that, a diagonally dominant surrogate keeps factorizations alive in a
regime where the cross coupling, hence Xi, is already below e^{-2 kd gap/diam}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .geometry import BoundaryDiscretization
from . import specfun

# largest kappa*diam for the oversample-and-project scheme: roundoff in the
# log-split grows like I0(kappa*diam)*eps and passes 1e-4 near 32
PROJECTED_KRESS_LIMIT = 32.0

_EULER_GAMMA = 0.5772156649015328606


def plain_kress_limit(n: int) -> float:
    """Largest kappa*diam for which the n-point log-split block is clean
    (aliasing estimate exp(0.95 kd - (3 ln n + 1.7)) below 1e-4)."""
    return (3.0 * np.log(n) + 1.7 + np.log(1e-4)) / 0.95


@dataclass
class LayerMatrix:
    """Dense symmetric boundary matrix at imaginary frequency i*kappa."""

    kappa: float
    entries: np.ndarray
    block_ranges: tuple
    kind: str  # "Q", "Qtilde", or "T"


def free_kernel(dimension: int, kappa: float, r):
    """Free Green's function at imaginary frequency: e^{-kappa r}/(2 kappa) in
    d=1, (1/2pi) K_0(kappa r) in d=2 (r > 0 there)."""
    if dimension not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {dimension}")
    if not np.isfinite(kappa) or kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("r must be nonnegative")
    if dimension == 1:
        out = np.exp(-kappa * r_arr) / (2.0 * kappa)
    else:
        if np.any(r_arr == 0.0):
            raise ValueError("free_kernel is logarithmically singular at r=0 in d=2")
        out = specfun.k0_safe(kappa * r_arr) / (2.0 * np.pi)
    return out if out.ndim else float(out)


def kress_weights(n: int) -> np.ndarray:
    """Quadrature weights R_k for the periodic log kernel:
    int_0^{2pi} log(4 sin^2((t - s)/2)) f(s) ds  ~=  sum_j R_{|i-j|} f(t_j)
    on the n-point equispaced grid (n even)."""
    if n % 2 != 0:
        raise ValueError("kress_weights needs an even number of nodes")
    k = np.arange(n)
    t = 2.0 * np.pi * k / n
    m = np.arange(1, n // 2)
    # R_k = -(4pi/n) sum_m cos(m t_k)/m - (4pi/n^2) cos(n t_k / 2)
    if len(m):
        s = np.cos(np.outer(t, m)) @ (1.0 / m)
    else:
        s = np.zeros(n)
    return -(4.0 * np.pi / n) * s - (4.0 * np.pi / n**2) * np.cos(0.5 * n * t)


def _kress_self_block(curve, t, speed, kappa, weights) -> np.ndarray:
    """Spectrally accurate weighted self-block via the log-split."""
    n = len(t)
    pts = curve.point(t)
    dx = pts[:, 0][:, None] - pts[:, 0][None, :]
    dy = pts[:, 1][:, None] - pts[:, 1][None, :]
    rho = np.hypot(dx, dy)
    np.fill_diagonal(rho, 1.0)  # placeholder, diagonal set separately
    ka = kappa * rho
    half = 0.5 * (t[:, None] - t[None, :])
    sin2 = 4.0 * np.sin(half) ** 2
    np.fill_diagonal(sin2, 1.0)
    logsin = np.log(sin2)
    i0 = sp.i0(ka)
    m1 = -i0 / (4.0 * np.pi)
    np.fill_diagonal(m1, -1.0 / (4.0 * np.pi))  # I0(0) = 1
    m2 = specfun.k0_safe(ka) / (2.0 * np.pi) + i0 * logsin / (4.0 * np.pi)
    diag = (np.log(2.0) - _EULER_GAMMA - np.log(kappa * speed)) / (2.0 * np.pi)
    np.fill_diagonal(m2, diag)
    r = kress_weights(n)
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    rmat = r[idx]  # R is (n-k)-symmetric, plain |i-j| lookup suffices
    block = (n / (2.0 * np.pi)) * rmat * m1 + m2
    sw = np.sqrt(weights)
    return sw[:, None] * block * sw[None, :]


def _circle_block(radius, kappa, n) -> np.ndarray:
    """Exact Fourier circulant for a circle: the weighted matrix with
    eigenvalues R I_m(kappa R) K_m(kappa R), built from scaled Bessel products
    so arbitrarily large kappa is safe.  Positive definite by construction."""
    m = np.arange(n // 2 + 1)
    x = kappa * radius
    lam = radius * sp.ive(m, x) * sp.kve(m, x)
    first_row = np.fft.irfft(lam, n)  # circulant row whose DFT spectrum is lam
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    return first_row[np.minimum(idx, n - idx)]


def _resample_matrix(n: int, N: int) -> np.ndarray:
    """N x n trigonometric interpolation matrix between equispaced periodic
    grids (N >= n, both even): bandlimited to modes |m| <= n/2."""
    spec = np.fft.rfft(np.eye(n), axis=0)  # (n//2+1, n)
    spec[n // 2] *= 0.5  # Nyquist mode appears twice in the finer spectrum
    padded = np.zeros((N // 2 + 1, n), dtype=complex)
    padded[: n // 2 + 1] = spec
    return np.fft.irfft(padded, N, axis=0) * (N / n)


def _projected_kress_block(curve, kappa, n, weights) -> np.ndarray:
    """Kress block assembled on an oversampled grid, then compressed onto the
    n-grid through bandlimited density interpolation.  Removes the high-mode
    aliasing garbage of the plain scheme at large kappa*diam."""
    kd = kappa * curve.diameter()
    N = max(2 * n, int(np.ceil(4.0 * kd / 2.0)) * 2)
    t_f = 2.0 * np.pi * np.arange(N) / N
    speed_f = curve.speed(t_f)
    w_f = speed_f * (2.0 * np.pi / N)
    big = _kress_self_block(curve, t_f, speed_f, kappa, w_f)
    # P maps sqrt(w)-weighted n-grid densities to the fine grid
    p = np.sqrt(w_f)[:, None] * _resample_matrix(n, N) / np.sqrt(weights)[None, :]
    block = p.T @ big @ p
    return 0.5 * (block + block.T)


def _dominant_fallback_block(curve, t, kappa, weights) -> np.ndarray:
    """PD-safe surrogate for non-circle self-blocks at large kappa: plain
    trapezoid off-diagonal plus a strictly dominant positive diagonal.  Used
    only where cross-obstacle coupling is exponentially negligible."""
    pts = curve.point(t)
    dx = pts[:, 0][:, None] - pts[:, 0][None, :]
    dy = pts[:, 1][:, None] - pts[:, 1][None, :]
    rho = np.hypot(dx, dy)
    np.fill_diagonal(rho, 1.0)
    off = specfun.k0_safe(kappa * rho) / (2.0 * np.pi)
    np.fill_diagonal(off, 0.0)
    sw = np.sqrt(weights)
    off = sw[:, None] * off * sw[None, :]
    diag = np.sum(np.abs(off), axis=1) + weights / (2.0 * kappa)
    np.fill_diagonal(off, diag)
    return off


def _cross_block(nodes_p, nodes_q, w_p, w_q, dimension, kappa) -> np.ndarray:
    if dimension == 1:
        r = np.abs(nodes_p[:, 0][:, None] - nodes_q[:, 0][None, :])
        ker = np.exp(-kappa * r) / (2.0 * kappa)
    else:
        dx = nodes_p[:, 0][:, None] - nodes_q[:, 0][None, :]
        dy = nodes_p[:, 1][:, None] - nodes_q[:, 1][None, :]
        ker = specfun.k0_safe(kappa * np.hypot(dx, dy)) / (2.0 * np.pi)
    return np.sqrt(w_p)[:, None] * ker * np.sqrt(w_q)[None, :]


def assemble_Q(disc: BoundaryDiscretization, kappa: float, mass_shift: float = 0.0) -> LayerMatrix:
    """Assemble the weighted single-layer matrix at frequency i*kappa.

    mass_shift is retained for interface symmetry and must be zero: the mass
    enters the energy only through the frequency argument, never the kernel.
    """
    if mass_shift != 0.0:
        raise ValueError("mass_shift must be 0; mass enters through the frequency argument")
    if not np.isfinite(kappa) or kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    ntot = disc.size
    q = np.zeros((ntot, ntot))
    dim = disc.nodes.shape[1]
    nblocks = len(disc.block_ranges)
    for p in range(nblocks):
        sp_ = disc.block_slice(p)
        if dim == 1:
            x = disc.nodes[sp_, 0]
            r = np.abs(x[:, None] - x[None, :])
            q[sp_, sp_] = np.exp(-kappa * r) / (2.0 * kappa)
        else:
            curve = disc.params["curves"][p]
            t = disc.params["t"]
            speed = disc.params["speeds"][p]
            w = disc.weights[sp_]
            kd = kappa * curve.diameter()
            if kd <= plain_kress_limit(len(t)):
                q[sp_, sp_] = _kress_self_block(curve, t, speed, kappa, w)
            elif curve.is_circle:
                q[sp_, sp_] = _circle_block(curve.circle_radius, kappa, len(t))
            elif kd <= PROJECTED_KRESS_LIMIT:
                q[sp_, sp_] = _projected_kress_block(curve, kappa, len(t), w)
            else:
                q[sp_, sp_] = _dominant_fallback_block(curve, t, kappa, w)
        for r_ in range(p + 1, nblocks):
            sq = disc.block_slice(r_)
            blk = _cross_block(
                disc.nodes[sp_], disc.nodes[sq], disc.weights[sp_], disc.weights[sq], dim, kappa
            )
            q[sp_, sq] = blk
            q[sq, sp_] = blk.T
    q = 0.5 * (q + q.T)
    return LayerMatrix(kappa=float(kappa), entries=q, block_ranges=disc.block_ranges, kind="Q")


def split_blocks(Q: LayerMatrix) -> tuple[LayerMatrix, LayerMatrix]:
    """Same-obstacle blocks (Qtilde) and cross-obstacle complement (T);
    Qtilde + T = Q entrywise exactly."""
    if Q.kind != "Q":
        raise ValueError(f"split_blocks expects a full Q matrix, got kind {Q.kind!r}")
    qt = np.zeros_like(Q.entries)
    for lo, hi in Q.block_ranges:
        qt[lo:hi, lo:hi] = Q.entries[lo:hi, lo:hi]
    t = Q.entries - qt
    for lo, hi in Q.block_ranges:
        t[lo:hi, lo:hi] = 0.0
    return (
        LayerMatrix(Q.kappa, qt, Q.block_ranges, "Qtilde"),
        LayerMatrix(Q.kappa, t, Q.block_ranges, "T"),
    )


def source_vectors(disc: BoundaryDiscretization, kappa: float, points: np.ndarray,
                   derivatives: int = 0):
    """Weighted kernel columns sqrt(w_i) G_free(x, z_i) for off-boundary x,
    optionally with first and second derivatives in x.

    Returns (g, grad, hess): g has shape (npts, nnodes); grad (npts, d, nnodes);
    hess (npts, d, d, nnodes).  grad/hess are None unless requested.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dim = disc.nodes.shape[1]
    sw = np.sqrt(disc.weights)
    if dim == 1:
        diff = pts[:, 0][:, None] - disc.nodes[:, 0][None, :]
        r = np.abs(diff)
        e = np.exp(-kappa * r)
        g = e / (2.0 * kappa) * sw
        if derivatives == 0:
            return g, None, None
        sgn = np.sign(diff)
        grad = (-(sgn * e) / 2.0 * sw)[:, None, :]
        if derivatives == 1:
            return g, grad, None
        hess = (kappa * e / 2.0 * sw)[:, None, None, :]
        return g, grad, hess
    dx = pts[:, 0][:, None] - disc.nodes[:, 0][None, :]
    dy = pts[:, 1][:, None] - disc.nodes[:, 1][None, :]
    r = np.hypot(dx, dy)
    x = kappa * r
    k0 = specfun.k0_safe(x)
    g = k0 / (2.0 * np.pi) * sw
    if derivatives == 0:
        return g, None, None
    k1 = specfun.k1_safe(x)
    # f(r) = K0(kappa r)/2pi: f' = -kappa K1/2pi, f'' = kappa^2 (K0 + K1/x)/2pi
    fp_over_r = -kappa * k1 / (2.0 * np.pi * r)
    grad = np.stack([dx * fp_over_r, dy * fp_over_r], axis=1) * sw
    if derivatives == 1:
        return g, grad, None
    fpp = kappa**2 * (k0 + k1 / x) / (2.0 * np.pi)
    rx, ry = dx / r, dy / r
    aniso = fpp - fp_over_r  # f'' - f'/r, the rank-one radial part
    hxx = aniso * rx * rx + fp_over_r
    hyy = aniso * ry * ry + fp_over_r
    hxy = aniso * rx * ry
    hess = np.stack(
        [np.stack([hxx, hxy], axis=1), np.stack([hxy, hyy], axis=1)], axis=1
    ) * sw
    return g, grad, hess
