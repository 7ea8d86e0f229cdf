"""Obstacle geometry: intervals on the line, smooth closed curves in the plane,
boundary quadrature, gaps, and rigid translations.

Curves are truncated trigonometric series, so tangents, normals and speeds are
exact and the periodic trapezoid rule is spectrally accurate.  Normals always
point outward (into the vacuum region).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

_DIGEST_VERSION = 1


@dataclass(frozen=True)
class Interval:
    """A 1D obstacle: the open interval (a, b)."""

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or not self.a < self.b:
            raise GeometryError(f"interval needs a < b, got ({self.a}, {self.b})")

    @property
    def width(self) -> float:
        return self.b - self.a

    def translated(self, t: float) -> "Interval":
        return Interval(self.a + t, self.b + t)

    def describe(self) -> dict:
        return {"kind": "interval", "a": self.a, "b": self.b}


def _eval_trig(coeffs: np.ndarray, t: np.ndarray, deriv: int = 0) -> np.ndarray:
    """Evaluate a trig series c0 + sum_m [c_{2m-1} cos(mt) + c_{2m} sin(mt)]
    or its derivative of the given order."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    if deriv == 0:
        out += coeffs[0]
    n_modes = (len(coeffs) - 1 + 1) // 2
    for m in range(1, n_modes + 1):
        c = coeffs[2 * m - 1] if 2 * m - 1 < len(coeffs) else 0.0
        s = coeffs[2 * m] if 2 * m < len(coeffs) else 0.0
        if c == 0.0 and s == 0.0:
            continue
        f = float(m) ** deriv
        phase = deriv % 4
        mt = m * t
        if phase == 0:
            out += f * (c * np.cos(mt) + s * np.sin(mt))
        elif phase == 1:
            out += f * (-c * np.sin(mt) + s * np.cos(mt))
        elif phase == 2:
            out += f * (-c * np.cos(mt) - s * np.sin(mt))
        else:
            out += f * (c * np.sin(mt) - s * np.cos(mt))
    return out


class ClosedCurve:
    """A smooth closed curve given by truncated trigonometric series for
    x(t), y(t), t in [0, 2pi).  Coefficient layout per coordinate:
    [const, cos 1t, sin 1t, cos 2t, sin 2t, ...]."""

    def __init__(self, x_coeffs, y_coeffs):
        self.x_coeffs = np.asarray(x_coeffs, dtype=float)
        self.y_coeffs = np.asarray(y_coeffs, dtype=float)
        if self.x_coeffs.ndim != 1 or self.y_coeffs.ndim != 1:
            raise GeometryError("curve coefficients must be 1D sequences")
        # orientation: positive signed area = counterclockwise
        self._orient = 1.0
        self._orient = 1.0 if self._signed_area() > 0 else -1.0
        self._check_nondegenerate()

    # -- constructors ------------------------------------------------------
    @classmethod
    def circle(cls, center, radius) -> "ClosedCurve":
        if radius <= 0:
            raise GeometryError(f"circle radius must be positive, got {radius}")
        cx, cy = float(center[0]), float(center[1])
        return cls([cx, radius, 0.0], [cy, 0.0, radius])

    @classmethod
    def ellipse(cls, center, semi_axes) -> "ClosedCurve":
        a, b = float(semi_axes[0]), float(semi_axes[1])
        if a <= 0 or b <= 0:
            raise GeometryError(f"ellipse semi-axes must be positive, got {semi_axes}")
        cx, cy = float(center[0]), float(center[1])
        return cls([cx, a, 0.0], [cy, 0.0, b])

    # -- evaluation --------------------------------------------------------
    def point(self, t):
        return np.stack([_eval_trig(self.x_coeffs, t), _eval_trig(self.y_coeffs, t)], axis=-1)

    def velocity(self, t):
        return np.stack(
            [_eval_trig(self.x_coeffs, t, 1), _eval_trig(self.y_coeffs, t, 1)], axis=-1
        )

    def speed(self, t):
        v = self.velocity(t)
        return np.sqrt(np.sum(v * v, axis=-1))

    def normal(self, t):
        """Unit outward normal (rotated tangent, orientation-corrected)."""
        v = self.velocity(t)
        n = np.stack([v[..., 1], -v[..., 0]], axis=-1) * self._orient
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    # -- properties --------------------------------------------------------
    def _signed_area(self) -> float:
        t = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
        p = self.point(t)
        v = self.velocity(t)
        return float(0.5 * np.mean(p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0]) * 2.0 * np.pi)

    def _check_nondegenerate(self, n: int = 256) -> None:
        t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        s = self.speed(t)
        if np.any(s < 1e-12):
            raise GeometryError("degenerate curve: |gamma'(t)| < 1e-12 at a sampled node")
        # simplicity check at discretization resolution: non-neighbouring
        # sample points must not come closer than a fraction of the local
        # node spacing, which would indicate a self-intersection.
        p = self.point(t)
        d2 = np.sum((p[:, None, :] - p[None, :, :]) ** 2, axis=-1)
        idx = np.arange(n)
        sep = np.minimum(np.abs(idx[:, None] - idx[None, :]), n - np.abs(idx[:, None] - idx[None, :]))
        local_h = (2.0 * np.pi / n) * np.minimum(s[:, None], s[None, :])
        far = sep >= 4
        if np.any(d2[far] < (0.5 * local_h[far]) ** 2):
            raise GeometryError("curve appears self-intersecting at discretization resolution")

    @property
    def is_circle(self) -> bool:
        cx, cy = self.x_coeffs, self.y_coeffs
        if len(cx) > 3 and np.any(cx[3:] != 0.0):
            return False
        if len(cy) > 3 and np.any(cy[3:] != 0.0):
            return False
        gx = np.zeros(3)
        gx[: len(cx[:3])] = cx[:3]
        gy = np.zeros(3)
        gy[: len(cy[:3])] = cy[:3]
        r = gx[1]
        return (
            r > 0
            and gx[2] == 0.0
            and gy[1] == 0.0
            and gy[2] == r
        )

    @property
    def circle_radius(self) -> float:
        if not self.is_circle:
            raise GeometryError("not a circle")
        return float(self.x_coeffs[1])

    def centroid(self) -> np.ndarray:
        return np.array([self.x_coeffs[0], self.y_coeffs[0]])

    def diameter(self, n: int = 128) -> float:
        t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        p = self.point(t)
        d2 = np.sum((p[:, None, :] - p[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.max()))

    def length(self, n: int = 512) -> float:
        t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return float(np.mean(self.speed(t)) * 2.0 * np.pi)

    def translated(self, vec) -> "ClosedCurve":
        xc = self.x_coeffs.copy()
        yc = self.y_coeffs.copy()
        xc[0] += vec[0]
        yc[0] += vec[1]
        return ClosedCurve(xc, yc)

    def describe(self) -> dict:
        return {
            "kind": "curve",
            "x_coeffs": [float(c) for c in self.x_coeffs],
            "y_coeffs": [float(c) for c in self.y_coeffs],
        }


@dataclass(frozen=True)
class Configuration:
    """An ordered collection of disjoint obstacles in a common dimension,
    plus the field mass m >= 0."""

    dimension: int
    mass: float
    obstacles: tuple

    def __init__(self, dimension, mass, obstacles):
        object.__setattr__(self, "dimension", int(dimension))
        object.__setattr__(self, "mass", float(mass))
        object.__setattr__(self, "obstacles", tuple(obstacles))
        self._validate()

    def _validate(self) -> None:
        if self.dimension not in (1, 2):
            raise GeometryError(f"dimension must be 1 or 2, got {self.dimension}")
        if not np.isfinite(self.mass) or self.mass < 0:
            raise GeometryError(f"mass must be a finite nonnegative real, got {self.mass}")
        if len(self.obstacles) == 0:
            raise GeometryError("configuration needs at least one obstacle")
        want = Interval if self.dimension == 1 else ClosedCurve
        for k, ob in enumerate(self.obstacles):
            if not isinstance(ob, want):
                raise GeometryError(
                    f"obstacle {k} has kind {type(ob).__name__}, incompatible with "
                    f"dimension {self.dimension}"
                )
        if len(self.obstacles) > 1:
            g = min_gap(self)
            if not g > 0:
                raise GeometryError(f"obstacles must have strictly positive gaps, min gap {g}")

    def describe(self) -> dict:
        return {
            "dimension": self.dimension,
            "mass": self.mass,
            "obstacles": [ob.describe() for ob in self.obstacles],
        }


@dataclass(frozen=True)
class RigidMotion:
    """Rigid translation of one obstacle."""

    obstacle_index: int
    translation: tuple

    def __init__(self, obstacle_index, translation):
        object.__setattr__(self, "obstacle_index", int(obstacle_index))
        tr = tuple(float(c) for c in np.atleast_1d(translation))
        object.__setattr__(self, "translation", tr)


@dataclass
class BoundaryDiscretization:
    """Quadrature nodes/weights/normals on the union of obstacle boundaries.

    block_ranges holds one (start, stop) per obstacle.  For d=2, params keeps
    the parameter grids and speeds needed by the singular quadrature.
    """

    nodes: np.ndarray
    weights: np.ndarray
    normals: np.ndarray
    block_ranges: tuple
    params: dict = field(default_factory=dict)

    def block_slice(self, j: int) -> slice:
        lo, hi = self.block_ranges[j]
        return slice(lo, hi)

    @property
    def size(self) -> int:
        return len(self.weights)


def discretize(config: Configuration, n_per_obstacle: int) -> BoundaryDiscretization:
    """Boundary quadrature: exact two-point 'rule' per interval in d=1,
    periodic trapezoid with n_per_obstacle nodes per curve in d=2."""
    if config.dimension == 1:
        nodes, weights, normals, ranges = [], [], [], []
        pos = 0
        for ob in config.obstacles:
            nodes.extend([[ob.a], [ob.b]])
            weights.extend([1.0, 1.0])
            normals.extend([[-1.0], [1.0]])
            ranges.append((pos, pos + 2))
            pos += 2
        return BoundaryDiscretization(
            nodes=np.array(nodes),
            weights=np.array(weights),
            normals=np.array(normals),
            block_ranges=tuple(ranges),
            params={"n_per_obstacle": 2},
        )

    n = int(n_per_obstacle)
    if n < 8 or n % 2 != 0:
        raise GeometryError(f"n_per_obstacle must be even and >= 8 for d=2, got {n}")
    t = 2.0 * np.pi * np.arange(n) / n
    nodes, weights, normals, ranges = [], [], [], []
    speeds = []
    pos = 0
    for ob in config.obstacles:
        s = ob.speed(t)
        if np.any(s < 1e-12):
            raise GeometryError("degenerate curve: |gamma'| < 1e-12 at a quadrature node")
        nodes.append(ob.point(t))
        weights.append(s * (2.0 * np.pi / n))
        normals.append(ob.normal(t))
        speeds.append(s)
        ranges.append((pos, pos + n))
        pos += n
    return BoundaryDiscretization(
        nodes=np.concatenate(nodes),
        weights=np.concatenate(weights),
        normals=np.concatenate(normals),
        block_ranges=tuple(ranges),
        params={
            "n_per_obstacle": n,
            "t": t,
            "speeds": speeds,
            "curves": list(config.obstacles),
        },
    )


def _pair_distance(c1: ClosedCurve, c2: ClosedCurve) -> float:
    """Minimum distance between two closed curves (exact for circle pairs,
    dense scan plus local parabolic refinement otherwise)."""
    if c1.is_circle and c2.is_circle:
        d = float(np.linalg.norm(c1.centroid() - c2.centroid()))
        return d - c1.circle_radius - c2.circle_radius
    n = 1024
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    p1 = c1.point(t)
    p2 = c2.point(t)
    d2 = np.sum((p1[:, None, :] - p2[None, :, :]) ** 2, axis=-1)
    i, j = np.unravel_index(np.argmin(d2), d2.shape)
    # local refinement: a few rounds of coordinate-wise parabolic interpolation
    ti, tj = t[i], t[j]
    h = 2.0 * np.pi / n

    def dist(a, b):
        return float(np.linalg.norm(c1.point(np.array(a)) - c2.point(np.array(b))))

    for _ in range(12):
        moved = False
        for which in (0, 1):
            f0 = dist(ti, tj)
            if which == 0:
                fm, fp = dist(ti - h, tj), dist(ti + h, tj)
            else:
                fm, fp = dist(ti, tj - h), dist(ti, tj + h)
            denom = fm - 2.0 * f0 + fp
            if denom > 0:
                step = 0.5 * (fm - fp) / denom * h
                step = float(np.clip(step, -h, h))
            else:
                step = h if fp < fm else -h
            if which == 0:
                ti += step
            else:
                tj += step
            moved = moved or abs(step) > 1e-15
        h *= 0.5
        if not moved and h < 1e-12:
            break
    return dist(ti, tj)


def min_gap(config: Configuration) -> float:
    """Minimum distance between obstacle boundaries; +inf for one obstacle."""
    obs = config.obstacles
    if len(obs) == 1:
        return math.inf
    if config.dimension == 1:
        order = sorted(obs, key=lambda o: o.a)
        return min(hi.a - lo.b for lo, hi in zip(order[:-1], order[1:]))
    best = math.inf
    for i in range(len(obs)):
        for j in range(i + 1, len(obs)):
            best = min(best, _pair_distance(obs[i], obs[j]))
    return best


def apply_motion(config: Configuration, motion: RigidMotion) -> Configuration:
    """Translate one obstacle rigidly; gap validation runs on construction."""
    j = motion.obstacle_index
    if not 0 <= j < len(config.obstacles):
        raise GeometryError(f"obstacle index {j} out of range")
    tr = motion.translation
    if len(tr) != config.dimension:
        raise GeometryError(
            f"translation has {len(tr)} components, configuration is {config.dimension}D"
        )
    new_obs = list(config.obstacles)
    if config.dimension == 1:
        new_obs[j] = new_obs[j].translated(tr[0])
    else:
        new_obs[j] = new_obs[j].translated(tr)
    return Configuration(config.dimension, config.mass, new_obs)


def config_digest(config: Configuration, params: dict | None = None) -> str:
    """Stable content hash of a configuration plus optional numerical params.

    Floats are serialized via repr (shortest round-trip), keys sorted, so the
    digest is independent of field ordering in any input file.
    """
    payload = {"v": _DIGEST_VERSION, "config": config.describe()}
    if params:
        payload["params"] = {str(k): params[k] for k in sorted(params)}
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=repr)
    return hashlib.sha256(text.encode()).hexdigest()
