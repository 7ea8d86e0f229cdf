"""Stress tensor fields and the three force routes.

All field quantities come from the interaction kernel M = Q^{-1} - Qtilde^{-1}
(computed as -Q^{-1} T Qtilde^{-1}, which is exact for a single obstacle and
better conditioned than the explicit difference): bilinear forms of source
vectors against M give the interaction Green's function and its derivatives
relative to every single-obstacle background.

Frequency jets, with u the auxiliary variable and kappa = sqrt(m^2 + u^2):

    k0(x)      =  (2/pi) int G(x,x) du
    kxx_ij(x)  =  (2/pi) int d_{x_i} d_{x_j} G(x,y)|_{y=x} du
    kxy_ij(x)  =  (2/pi) int d_{x_i} d_{y_j} G(x,y)|_{y=x} du
    h_rel(x)   = -(2/pi) int u^2 G(x,x) du

    T00  = h_rel/2 + Delta k0 / 8,    Delta k0 = 2 tr kxx + 2 tr kxy
    T_ij = kxy_ij/2 - delta_ij Delta k0 / 8

Every term of a tensor sample is accumulated per frequency node on one shared
grid, so the exact pointwise cancellations (massless T00 and T11 outside a 1d
gap, for instance) survive in floating point.

Force routes, all reported as the force vector on one obstacle (force = -grad
of the energy with respect to rigid translation):

  fd        central difference of the energy with one Richardson level,
            reusing the base configuration's frequency grid so quadrature
            bias cancels between displaced configurations;
  surface   -oint_Sigma T . n dsigma over a closed contour enclosing only the
            chosen obstacle (n outward);
  hadamard  -(1/4) oint_{dO_j} [d_nu d_nu' (Hinv_O - Hinv_Oj)](z,z) n dsigma,
            the boundary form of the same variation, evaluated from the
            domain side with quadratic-in-offset extrapolation.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla
from numpy.polynomial.legendre import leggauss

from .errors import GeometryError, NumericalError, ProximityError
from .geometry import (Configuration, RigidMotion, apply_motion, config_digest,
                       discretize, min_gap)
from .layerop import assemble_Q, source_vectors, split_blocks
from .energy import build_frequency_grid, relative_energy, _panel_nodes
from .spectral import UNDERFLOW_CUTOFF

_M_CACHE_SIZE = 512
_m_cache: OrderedDict = OrderedDict()
_m_cache_lock = threading.Lock()


@dataclass
class TensorField:
    """Stress tensor samples at off-boundary points."""

    points: np.ndarray        # (m, d)
    t00: np.ndarray           # (m,)
    tij: np.ndarray           # (m, d, d)
    h_rel: np.ndarray         # (m,)
    k0: np.ndarray            # (m,)
    params: dict = field(default_factory=dict)


@dataclass
class ForceResult:
    force: np.ndarray         # (d,) force on the chosen obstacle
    route: str
    obstacle_index: int
    error_estimate: float
    params: dict = field(default_factory=dict)


def rel_kernel_matrix(disc, kappa: float, digest: str | None = None) -> np.ndarray:
    """M = Q^{-1} - Qtilde^{-1} = -Q^{-1} T Qtilde^{-1}, optionally cached."""
    key = (digest, float(kappa)) if digest is not None else None
    if key is not None:
        with _m_cache_lock:
            hit = _m_cache.get(key)
            if hit is not None:
                _m_cache.move_to_end(key)
                return hit
    Q = assemble_Q(disc, kappa)
    qtilde, t = split_blocks(Q)
    if not np.any(t.entries):
        m = np.zeros_like(Q.entries)
    else:
        try:
            fq = sla.cho_factor(Q.entries, lower=True)
        except sla.LinAlgError as exc:
            raise NumericalError(
                f"full layer matrix not positive definite at kappa={kappa:g}"
            ) from exc
        x = sla.cho_solve(fq, t.entries)
        y = np.empty_like(x)
        for lo, hi in Q.block_ranges:
            fb = sla.cho_factor(qtilde.entries[lo:hi, lo:hi], lower=True)
            y[:, lo:hi] = sla.cho_solve(fb, x[:, lo:hi].T).T
        m = -0.5 * (y + y.T)
    if key is not None:
        with _m_cache_lock:
            _m_cache[key] = m
            while len(_m_cache) > _M_CACHE_SIZE:
                _m_cache.popitem(last=False)
    return m


def _field_grid(config: Configuration, decay: float, tol: float,
                quadratic_weight: bool):
    """Frequency grid for pointwise fields whose integrand decays like
    e^{-decay * u}, optionally with a u^2 envelope folded into the cutoff."""
    r = decay
    u_max = -1.15 * math.log(math.pi * r * tol) / r
    if quadratic_weight:
        for _ in range(4):
            u_max = 1.05 * math.log(
                max(u_max**2 / r + 2 * u_max / r**2 + 2 / r**3, 1.0)
                / (math.pi * tol)) / r
    tail = math.exp(-r * u_max) * (
        (u_max**2 / r + 2 * u_max / r**2 + 2 / r**3) if quadratic_weight
        else 1.0 / r) / (2.0 * math.pi)
    if config.mass * min_gap(config) >= 0.05:
        u_min = 0.0
    else:
        u_min = 1e-12 if config.dimension == 1 else 1e-8
    panels = []
    lo = u_min
    if u_min > 0.0:
        cap = min(1.0, u_max)
        while lo < cap:
            hi = lo * 10.0
            # absorb what would be a runt final panel (see build_frequency_grid)
            if hi >= cap / 3.0:
                hi = cap
            panels.append((lo, hi))
            lo = hi
    if lo < u_max:
        count = max(1, math.ceil((u_max - lo) * r / 6.0))
        edges = np.linspace(lo, u_max, count + 1)
        panels.extend(zip(edges[:-1], edges[1:]))
    nodes, weights = _panel_nodes(tuple(panels), 16)
    return nodes, weights, tail


def _check_points_clear(config: Configuration, disc, points: np.ndarray):
    """Field points must keep a resolution-level distance from all boundaries."""
    if config.dimension == 1:
        for ob in config.obstacles:
            inside = (points[:, 0] >= ob.a) & (points[:, 0] <= ob.b)
            near = np.minimum(np.abs(points[:, 0] - ob.a),
                              np.abs(points[:, 0] - ob.b)) < 1e-9
            if np.any(inside) or np.any(near):
                raise ProximityError(
                    f"field point inside or on interval [{ob.a}, {ob.b}]"
                )
        return
    # 2d: compare against the sampled boundary with a spacing-based floor
    for p, curve in enumerate(disc.params["curves"]):
        sl = disc.block_slice(p)
        bd = disc.nodes[sl]
        spacing = 2.0 * math.pi * np.max(disc.params["speeds"][p]) / (sl.stop - sl.start)
        d2 = np.min(
            (points[:, 0][:, None] - bd[:, 0][None, :]) ** 2
            + (points[:, 1][:, None] - bd[:, 1][None, :]) ** 2, axis=1)
        if np.any(np.sqrt(d2) < 2.0 * spacing):
            raise ProximityError(
                f"field point closer than two node spacings to obstacle {p}; "
                "increase n_per_obstacle or move the point"
            )


def t_rel(config: Configuration, points, n_per_obstacle: int = 64,
          tol: float = 1e-8) -> TensorField:
    """Renormalized interaction stress tensor at the given points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    d = config.dimension
    if points.shape[1] != d:
        raise ValueError(f"points must have shape (m, {d})")
    disc = discretize(config, n_per_obstacle)
    _check_points_clear(config, disc, points)
    gap = min_gap(config)
    if not np.isfinite(gap):
        gap = _single_obstacle_scale(config)
    nodes, weights, tail = _field_grid(config, decay=gap, tol=tol,
                                       quadratic_weight=True)
    digest = config_digest(config, {"n": n_per_obstacle})
    mpts = len(points)
    k0 = np.zeros(mpts)
    h_rel = np.zeros(mpts)
    kxx = np.zeros((mpts, d, d))
    kxy = np.zeros((mpts, d, d))
    single = len(config.obstacles) < 2
    for u, w in zip(nodes, weights):
        kappa = math.hypot(config.mass, u) if config.mass else u
        if single or kappa * gap > UNDERFLOW_CUTOFF:
            continue
        m = rel_kernel_matrix(disc, kappa, digest)
        g, gr, he = source_vectors(disc, kappa, points, derivatives=2)
        mg = g @ m                     # (mpts, nodes)
        gdiag = -np.einsum("xi,xi->x", mg, g)
        c = w * (2.0 / math.pi)
        k0 += c * gdiag
        h_rel -= c * u * u * gdiag
        kxx += -c * np.einsum("xabi,xi->xab", he, mg)
        kxy += -c * np.einsum("xai,xbi->xab", gr @ m, gr)
    lap = 2.0 * np.einsum("xaa->x", kxx) + 2.0 * np.einsum("xaa->x", kxy)
    t00 = 0.5 * h_rel + lap / 8.0
    tij = 0.5 * kxy - (lap / 8.0)[:, None, None] * np.eye(d)[None, :, :]
    return TensorField(points=points, t00=t00, tij=tij, h_rel=h_rel, k0=k0,
                       params={"tail_bound": tail, "n_nodes": len(nodes)})


def _single_obstacle_scale(config: Configuration) -> float:
    if config.dimension == 1:
        return config.obstacles[0].width
    return config.obstacles[0].diameter()


def h_rel_diag(config: Configuration, points, n_per_obstacle: int = 64,
               tol: float = 1e-8) -> np.ndarray:
    """Convenience: only the h_rel field."""
    return t_rel(config, points, n_per_obstacle, tol).h_rel


def force_fd(config: Configuration, obstacle_index: int, direction=None,
             n_per_obstacle: int = 64, tol: float = 1e-10,
             step: float | None = None) -> ForceResult:
    """Force via central differences of the energy, one Richardson level.

    All four displaced energies use the base configuration's frequency grid,
    so the quadrature bias is common mode and cancels in the differences.
    """
    d = config.dimension
    if direction is None:
        dirs = np.eye(d)
    else:
        v = np.asarray(direction, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0:
            raise ValueError("direction must be nonzero")
        dirs = [v / nv]
    gap = min_gap(config)
    if not np.isfinite(gap):
        return ForceResult(np.zeros(d), "fd", obstacle_index, 0.0,
                           params={"single_obstacle": True})
    h = step if step is not None else 0.02 * gap
    grid = build_frequency_grid(config, tol)

    def energy_at(vec, s):
        moved = apply_motion(config, RigidMotion(obstacle_index, tuple(s * vec)))
        return relative_energy(moved, n_per_obstacle, tol, grid=grid).energy

    force = np.zeros(d)
    est = 0.0
    for k, vec in enumerate(dirs):
        d1 = (energy_at(vec, h) - energy_at(vec, -h)) / (2.0 * h)
        d2 = (energy_at(vec, 0.5 * h) - energy_at(vec, -0.5 * h)) / h
        rich = (4.0 * d2 - d1) / 3.0
        comp = -rich
        est = max(est, abs(d2 - d1) / 3.0)
        if direction is None:
            force[k] = comp
        else:
            force = comp * vec
    return ForceResult(force, "fd", obstacle_index, est,
                       params={"step": h, "grid_nodes": len(grid.nodes)})


@dataclass(frozen=True)
class SurfaceContour:
    """Closed integration contour for the surface route.

    In d=2 a circle (center, radius); in d=1 a pair of bracketing points
    (left, right) around the obstacle.
    """
    center: tuple
    radius: float
    n_nodes: int = 64

    def points_normals(self):
        t = 2.0 * math.pi * np.arange(self.n_nodes) / self.n_nodes
        nx, ny = np.cos(t), np.sin(t)
        pts = np.stack([self.center[0] + self.radius * nx,
                        self.center[1] + self.radius * ny], axis=1)
        normals = np.stack([nx, ny], axis=1)
        weights = np.full(self.n_nodes, 2.0 * math.pi * self.radius / self.n_nodes)
        return pts, normals, weights


def default_contour(config: Configuration, obstacle_index: int,
                    n_nodes: int = 64) -> SurfaceContour:
    """Circle centered on the obstacle, radius halfway to the nearest other
    boundary."""
    if config.dimension != 2:
        raise GeometryError("contours are a d=2 construction")
    curves = config.obstacles
    me = curves[obstacle_index]
    cx, cy = me.centroid()
    t = 2.0 * math.pi * np.arange(256) / 256
    own = np.max(np.hypot(*(me.point(t) - [cx, cy]).T))
    dist = math.inf
    for j, other in enumerate(curves):
        if j == obstacle_index:
            continue
        pts = other.point(t)
        dist = min(dist, float(np.min(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy))))
    radius = 0.5 * (own + dist)
    return SurfaceContour((cx, cy), radius, n_nodes)


def _validate_contour(config: Configuration, obstacle_index: int,
                      contour: SurfaceContour):
    t = 2.0 * math.pi * np.arange(512) / 512
    cx, cy = contour.center
    for j, curve in enumerate(config.obstacles):
        pts = curve.point(t)
        r = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
        if j == obstacle_index:
            if np.any(r >= contour.radius):
                raise GeometryError(
                    f"contour does not enclose obstacle {obstacle_index}"
                )
        else:
            if np.any(r <= contour.radius):
                raise GeometryError(
                    f"contour crosses or encloses obstacle {j}"
                )


def force_surface(config: Configuration, obstacle_index: int,
                  contour: SurfaceContour | None = None,
                  n_per_obstacle: int = 64, tol: float = 1e-8) -> ForceResult:
    """Force as the flux of the relative stress tensor through a surrounding
    contour: F = -oint T.n dsigma."""
    d = config.dimension
    if len(config.obstacles) < 2:
        return ForceResult(np.zeros(d), "surface", obstacle_index, 0.0,
                           params={"single_obstacle": True})
    if d == 1:
        return _force_surface_1d(config, obstacle_index, n_per_obstacle, tol)
    if contour is None:
        contour = default_contour(config, obstacle_index)
    _validate_contour(config, obstacle_index, contour)
    pts, normals, weights = contour.points_normals()
    fld = t_rel(config, pts, n_per_obstacle, tol)
    flux = np.einsum("m,mij,mj->i", weights, fld.tij, normals)
    # nested half-rule estimate: every other node, double weight
    flux_half = np.einsum("m,mij,mj->i", 2.0 * weights[::2], fld.tij[::2],
                          normals[::2])
    est = float(np.max(np.abs(flux - flux_half))) + fld.params["tail_bound"]
    return ForceResult(-flux, "surface", obstacle_index, est,
                       params={"contour_center": contour.center,
                               "contour_radius": contour.radius,
                               "n_contour_nodes": contour.n_nodes})


def _force_surface_1d(config, obstacle_index, n_per_obstacle, tol):
    obs = config.obstacles
    order = sorted(range(len(obs)), key=lambda i: obs[i].a)
    pos = order.index(obstacle_index)
    me = obs[obstacle_index]
    if pos > 0:
        left_gap = me.a - obs[order[pos - 1]].b
        x_left = me.a - 0.5 * left_gap
    else:
        x_left = me.a - 0.5 * min_gap(config)
    if pos < len(order) - 1:
        right_gap = obs[order[pos + 1]].a - me.b
        x_right = me.b + 0.5 * right_gap
    else:
        x_right = me.b + 0.5 * min_gap(config)
    fld = t_rel(config, [[x_left], [x_right]], n_per_obstacle, tol)
    t11 = fld.tij[:, 0, 0]
    force = -(t11[1] - t11[0])
    return ForceResult(np.array([force]), "surface", obstacle_index,
                       fld.params["tail_bound"],
                       params={"bracket": (x_left, x_right)})


def _neville_limit(eps: np.ndarray, vals: np.ndarray):
    """Neville extrapolation of a boundary approach to eps -> 0.

    Plain powers of eps: in d=2 the kernel's expansion carries odd curvature
    terms, so an even-powers-only basis stalls at O(eps) error.

    Returns (limit, stride_estimates); raises if the table diverges."""
    tbl = [vals.astype(float)]
    m = len(vals)
    for k in range(1, m):
        prev = tbl[-1]
        cur = np.empty(m - k)
        for i in range(m - k):
            cur[i] = prev[i + 1] + (prev[i + 1] - prev[i]) * eps[i + k] / (
                eps[i] - eps[i + k])
        tbl.append(cur)
    corrections = [abs(tbl[k][-1] - tbl[k - 1][-1]) for k in range(1, m)]
    # A growing last correction only signals real divergence when it is
    # above the noise floor of the per-offset kernels; converged tables
    # wiggle at relative 1e-8..1e-7 without meaning anything.
    if len(corrections) >= 2 and corrections[-1] > 4.0 * corrections[-2] \
            and corrections[-1] > 1e-6 * max(1.0, abs(tbl[-1][-1])):
        raise NumericalError(
            "boundary-kernel extrapolation diverges; offsets too small for "
            "this resolution (Neville corrections "
            + ", ".join(f"{c:.2e}" for c in corrections) + ")"
        )
    return float(tbl[-1][-1]), corrections


_N_FINE = 2048


def _upsample_columns(cols: np.ndarray, n_fine: int) -> np.ndarray:
    """Trigonometric upsampling of periodic samples along axis 0."""
    n = cols.shape[0]
    spec = np.fft.rfft(cols, axis=0)
    spec[n // 2] *= 0.5
    padded = np.zeros((n_fine // 2 + 1, cols.shape[1]), dtype=complex)
    padded[: n // 2 + 1] = spec
    return np.fft.irfft(padded, n_fine, axis=0) * (n_fine / n)


def boundary_kernel(config: Configuration, obstacle_index: int, kappa: float,
                    offsets: np.ndarray, n_per_obstacle: int = 64):
    """Per-frequency Hadamard boundary kernel at offset evaluation points.

    Returns (values, eval_geometry) where values[o, i] is
    [d_nu d_nu' (G_O - G_Oj)](x,x) at x = z_i + offsets[o] * n(z_i), and
    eval_geometry carries the boundary nodes, outward normals and weights of
    obstacle j used for the final contour sum.
    """
    disc = discretize(config, n_per_obstacle)
    d = config.dimension
    sl = disc.block_slice(obstacle_index)
    z = disc.nodes[sl]
    nrm = disc.normals[sl]
    wj = disc.weights[sl]
    nj = sl.stop - sl.start
    Q = assemble_Q(disc, kappa)
    comp = np.ones(disc.size, dtype=bool)
    comp[sl] = False
    qjj = Q.entries[sl, sl]
    b = Q.entries[np.ix_(np.arange(sl.start, sl.stop), np.where(comp)[0])]
    c = Q.entries[np.ix_(np.where(comp)[0], np.where(comp)[0])]
    try:
        fjj = sla.cho_factor(qjj, lower=True)
    except sla.LinAlgError as exc:
        raise NumericalError(
            f"obstacle {obstacle_index} self-block not positive definite at "
            f"kappa={kappa:g}") from exc
    w_mat = sla.cho_solve(fjj, b)                     # (nj, nc)
    s = c - b.T @ w_mat
    s = 0.5 * (s + s.T)
    try:
        fs = sla.cho_factor(s, lower=True)
    except sla.LinAlgError as exc:
        raise NumericalError(
            f"Schur complement not positive definite at kappa={kappa:g}"
        ) from exc
    # evaluation points: all offsets for all boundary nodes, domain side
    pts = (z[None, :, :] + offsets[:, None, None] * nrm[None, :, :]).reshape(-1, d)
    # complement-blocks source vectors (these nodes are far; direct is fine)
    g_all, gr_all, _ = source_vectors(disc, kappa, pts, derivatives=1)
    g_c = g_all[:, comp]
    gr_c = gr_all[:, :, comp]
    if d == 2:
        curve = disc.params["curves"][obstacle_index]
        t_f = 2.0 * math.pi * np.arange(_N_FINE) / _N_FINE
        z_f = curve.point(t_f)
        speed_f = curve.speed(t_f)
        # densities rho_col = W_col / sqrt(w_j), upsampled, with fine measure
        dens = _upsample_columns(w_mat / np.sqrt(wj)[:, None], _N_FINE)
        phi = dens * (speed_f * (2.0 * math.pi / _N_FINE))[:, None]
        dx = pts[:, 0][:, None] - z_f[:, 0][None, :]
        dy = pts[:, 1][:, None] - z_f[:, 1][None, :]
        r = np.hypot(dx, dy)
        from . import specfun
        x = kappa * r
        k0v = specfun.k0_safe(x) / (2.0 * math.pi)
        wg = k0v @ phi                                # (npts, nc)
        k1v = -kappa * specfun.k1_safe(x) / (2.0 * math.pi * r)
        wgx = (dx * k1v) @ phi
        wgy = (dy * k1v) @ phi
        wgrad = np.stack([wgx, wgy], axis=1)
    else:
        g_j = g_all[:, sl]
        gr_j = gr_all[:, :, sl]
        wg = g_j @ w_mat
        wgrad = np.einsum("pai,ic->pac", gr_j, w_mat)
    eta = wg - g_c                                    # (npts, nc)
    geta = wgrad - gr_c                               # (npts, d, nc)
    nrm_rep = np.tile(nrm, (len(offsets), 1))
    deta = np.einsum("pa,pac->pc", nrm_rep, geta)
    sol = sla.cho_solve(fs, deta.T)                   # (nc, npts)
    vals = -np.einsum("pc,cp->p", deta, sol)
    return vals.reshape(len(offsets), nj), (z, nrm, wj)


def force_boundary_hadamard(config: Configuration, obstacle_index: int,
                            n_per_obstacle: int = 64,
                            tol: float = 1e-8) -> ForceResult:
    """Force from the Hadamard boundary formula.

    The frequency-integrated kernel is sampled at four offsets from the
    boundary (geometric, ratio 2) and extrapolated quadratically to the
    boundary; the contour sum then uses the obstacle's own quadrature.
    """
    d = config.dimension
    if len(config.obstacles) < 2:
        return ForceResult(np.zeros(d), "hadamard", obstacle_index, 0.0,
                           params={"single_obstacle": True})
    gap = min_gap(config)
    disc = discretize(config, n_per_obstacle)
    if d == 2:
        speed_max = float(np.max(disc.params["speeds"][obstacle_index]))
        floor = 2.5 * 2.0 * math.pi * speed_max / _N_FINE
        scale = min(gap, config.obstacles[obstacle_index].diameter())
    else:
        floor = 0.0
        scale = min(gap, config.obstacles[obstacle_index].width)
    # the kernel's boundary expansion runs in eps/curvature-radius as much as
    # eps/gap, so the ladder must respect the smaller of the two scales
    eps0 = max(4e-3 * scale, floor)
    if 8.0 * eps0 > 0.5 * gap:
        raise ProximityError(
            f"offset ladder up to {8 * eps0:g} would cross half the gap "
            f"{gap:g}; increase n_per_obstacle"
        )
    offsets = eps0 * np.array([8.0, 4.0, 2.0, 1.0])
    # slowest frequency decay happens at the largest offset into the gap
    nodes, weights, tail = _field_grid(config, decay=2.0 * (gap - 8.0 * eps0),
                                       tol=tol, quadratic_weight=True)
    acc = None
    for u, w in zip(nodes, weights):
        kappa = math.hypot(config.mass, u) if config.mass else u
        if kappa * gap * 0.5 > UNDERFLOW_CUTOFF:
            continue
        vals, geom = boundary_kernel(config, obstacle_index, kappa, offsets,
                                     n_per_obstacle)
        if acc is None:
            acc = np.zeros_like(vals)
            z, nrm, wj = geom
        acc += w * (2.0 / math.pi) * vals
    limits = np.empty(acc.shape[1])
    worst = 0.0
    for i in range(acc.shape[1]):
        limits[i], corr = _neville_limit(offsets, acc[:, i])
        if corr:
            worst = max(worst, corr[-1])
    force = -0.25 * np.einsum("i,ia,i->a", wj, nrm, limits)
    return ForceResult(force, "hadamard", obstacle_index, worst + tail,
                       params={"offsets": offsets.tolist(),
                               "boundary_kernel_values": limits,
                               "n_freq_nodes": len(nodes)})


def force(config: Configuration, obstacle_index: int, route: str = "fd",
          n_per_obstacle: int = 64, **kw):
    """Dispatch to one of the three routes, or 'all' for a dict of them."""
    routes = {
        "fd": force_fd,
        "surface": force_surface,
        "hadamard": force_boundary_hadamard,
    }
    if route == "all":
        return {name: fn(config, obstacle_index, n_per_obstacle=n_per_obstacle,
                         **kw) for name, fn in routes.items()}
    if route not in routes:
        raise ValueError(f"unknown force route {route!r}")
    return routes[route](config, obstacle_index, n_per_obstacle=n_per_obstacle,
                         **kw)
