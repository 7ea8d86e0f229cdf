"""Command-line interface.

Subcommands: xi, energy, force, sweep, tensor-field, validate.  Every run
prints a JSON manifest to stdout (sorted keys, so reruns are bitwise
identical apart from the "timing" block); grid-producing commands also write
CSV files and, unless --no-plot is given, PNG figures next to them.  Exit
codes: 0 ok, 2 schema/usage, 3 geometry, 4 numerical, 5 validation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
import warnings

import numpy as np

from . import __version__
from .energy import build_frequency_grid, energy_sweep, relative_energy
from .errors import (
    CasimirError,
    GeometryError,
    NumericalError,
    ProximityError,
    SchemaError,
    ValidationFailure,
)
from .geometry import (
    ClosedCurve,
    Configuration,
    Interval,
    config_digest,
    discretize,
    min_gap,
)
from .spectral import xi as xi_point
from .spectral import xi_curve
from .stressforce import force as force_dispatch
from .stressforce import t_rel

_EXIT_CODES = (
    (SchemaError, 2),
    (GeometryError, 3),
    (ProximityError, 3),
    (NumericalError, 4),
    (ValidationFailure, 5),
)


# ---------------------------------------------------------------------------
# configuration files

_OBSTACLE_KEYS = {
    "interval": {"kind", "a", "b"},
    "circle": {"kind", "center", "radius"},
    "ellipse": {"kind", "center", "semi_axes"},
    "curve": {"kind", "x_coeffs", "y_coeffs"},
}


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def parse_config(data: dict) -> Configuration:
    """Build a Configuration from a parsed JSON document.

    Top level: {"dimension": 1|2, "mass": float (optional, default 0),
    "obstacles": [...]}.  Unknown keys anywhere are rejected so typos fail
    loudly instead of being ignored.
    """
    _require(isinstance(data, dict), "config root must be a JSON object")
    extra = set(data) - {"dimension", "mass", "obstacles"}
    _require(not extra, f"unknown config keys: {sorted(extra)}")
    _require("dimension" in data, "config needs a 'dimension' field")
    _require(data["dimension"] in (1, 2),
             f"dimension must be 1 or 2, got {data['dimension']!r}")
    dim = data["dimension"]
    mass = data.get("mass", 0.0)
    _require(isinstance(mass, (int, float)) and not isinstance(mass, bool),
             f"mass must be a number, got {mass!r}")
    obs_spec = data.get("obstacles")
    _require(isinstance(obs_spec, list) and obs_spec,
             "config needs a nonempty 'obstacles' list")
    obstacles = []
    for k, ob in enumerate(obs_spec):
        _require(isinstance(ob, dict), f"obstacle {k} must be an object")
        kind = ob.get("kind")
        _require(kind in _OBSTACLE_KEYS,
                 f"obstacle {k}: unknown kind {kind!r} "
                 f"(expected one of {sorted(_OBSTACLE_KEYS)})")
        extra = set(ob) - _OBSTACLE_KEYS[kind]
        _require(not extra, f"obstacle {k} ({kind}): unknown keys {sorted(extra)}")
        missing = _OBSTACLE_KEYS[kind] - set(ob)
        _require(not missing, f"obstacle {k} ({kind}): missing keys {sorted(missing)}")
        if kind == "interval":
            _require(dim == 1, f"obstacle {k}: intervals require dimension 1")
            obstacles.append(Interval(_num(ob, k, "a"), _num(ob, k, "b")))
        else:
            _require(dim == 2, f"obstacle {k}: {kind} requires dimension 2")
            if kind == "circle":
                obstacles.append(ClosedCurve.circle(
                    _vec(ob, k, "center", 2), _num(ob, k, "radius")))
            elif kind == "ellipse":
                obstacles.append(ClosedCurve.ellipse(
                    _vec(ob, k, "center", 2), _vec(ob, k, "semi_axes", 2)))
            else:
                obstacles.append(ClosedCurve(
                    _vec(ob, k, "x_coeffs"), _vec(ob, k, "y_coeffs")))
    return Configuration(dimension=dim, mass=float(mass), obstacles=obstacles)


def _num(ob, k, key):
    v = ob[key]
    _require(isinstance(v, (int, float)) and not isinstance(v, bool),
             f"obstacle {k}: '{key}' must be a number, got {v!r}")
    return float(v)


def _vec(ob, k, key, length=None):
    v = ob[key]
    ok = isinstance(v, list) and all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
    _require(ok, f"obstacle {k}: '{key}' must be a list of numbers")
    if length is not None:
        _require(len(v) == length,
                 f"obstacle {k}: '{key}' must have {length} entries, got {len(v)}")
    return [float(c) for c in v]


def load_config(path: str) -> Configuration:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_config(data)


# ---------------------------------------------------------------------------
# persistent Xi cache

class XiCache:
    """Append-only JSONL store of Xi values, keyed bitwise by kappa.

    One file per (configuration, n) digest; each line is
    {"k": <float.hex>, "xi": <float.hex>}.  Unreadable lines are dropped with
    a warning and the file is rewritten from the surviving entries.
    """

    def __init__(self, path: str):
        self.path = path
        self.hits = 0
        self.misses = 0
        self._map = {}
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        good, bad = [], 0
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    key = rec["k"]
                    val = float.fromhex(rec["xi"])
                    float.fromhex(key)
                except (ValueError, KeyError, TypeError):
                    bad += 1
                    continue
                self._map[key] = val
                good.append((key, rec["xi"]))
        if bad:
            warnings.warn(f"xi cache {self.path}: dropped {bad} corrupt "
                          "line(s), rebuilding")
            with open(self.path, "w") as fh:
                for key, hx in good:
                    fh.write(json.dumps({"k": key, "xi": hx}) + "\n")

    def __call__(self, kappa: float):
        val = self._map.get(float(kappa).hex())
        if val is None:
            self.misses += 1
            return None
        self.hits += 1
        return val

    def store(self, kappa: float, value: float):
        key = float(kappa).hex()
        if key in self._map:
            return
        self._map[key] = float(value)
        with open(self.path, "a") as fh:
            fh.write(json.dumps({"k": key, "xi": float(value).hex()}) + "\n")

    @property
    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses,
                "entries": len(self._map)}


def _open_cache(args, config: Configuration):
    cache_dir = args.cache_dir or os.environ.get("CASIMIR_CACHE_DIR")
    if not cache_dir:
        return None
    os.makedirs(cache_dir, exist_ok=True)
    digest = config_digest(config, {"n": args.n})
    return XiCache(os.path.join(cache_dir, digest + ".jsonl"))


# ---------------------------------------------------------------------------
# small parsing helpers

def _parse_range(text: str, what: str):
    """'a:b:num' -> (a, b, num); 'a:b:num:log' -> log-spaced flag set."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise SchemaError(f"{what} must look like 'start:stop:num[:log]', "
                          f"got {text!r}")
    try:
        a, b, num = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise SchemaError(f"{what}: {exc}") from exc
    if num < 1:
        raise SchemaError(f"{what}: need at least one point, got {num}")
    log = len(parts) == 4
    if log and (a <= 0 or b <= 0):
        raise SchemaError(f"{what}: log spacing needs positive endpoints")
    vals = np.geomspace(a, b, num) if log else np.linspace(a, b, num)
    return vals


def _parse_direction(text: str, dim: int) -> np.ndarray:
    try:
        vec = np.array([float(c) for c in text.split(",")], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"direction: {exc}") from exc
    if vec.size != dim:
        raise SchemaError(f"direction needs {dim} components, got {vec.size}")
    if not np.linalg.norm(vec) > 0:
        raise SchemaError("direction must be nonzero")
    return vec


def _write_csv(path: str, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating))
                        else v for v in row])


def _manifest(args, config, results: dict, t0: float, cache=None,
              files=None) -> dict:
    man = {
        "command": args.command,
        "version": __version__,
        "config_digest": config_digest(config, {"n": args.n})
        if config is not None else None,
        "params": {"n": args.n, "tol": getattr(args, "tol", None),
                   "threads": getattr(args, "threads", 1)},
        "results": results,
    }
    if files:
        man["files"] = files
    timing = {"wall_s": round(time.perf_counter() - t0, 4)}
    if cache is not None:
        timing["cache"] = cache.stats
    man["timing"] = timing
    return man


def _emit(man: dict):
    print(json.dumps(man, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands

def cmd_xi(args):
    t0 = time.perf_counter()
    config = load_config(args.config)
    cache = _open_cache(args, config)
    files = {}
    if args.kappa is not None:
        kappa = float(args.kappa)
        if kappa <= 0:
            raise SchemaError(f"kappa must be positive, got {kappa}")
        val = cache(kappa) if cache is not None else None
        if val is None:
            val = xi_point(config, kappa, n_per_obstacle=args.n)
            if cache is not None:
                cache.store(kappa, val)
        results = {"kappa": kappa, "xi": val}
    else:
        kappas = _parse_range(args.kappa_grid, "--kappa-grid")
        if np.any(kappas <= 0):
            raise SchemaError("--kappa-grid needs positive kappa values")
        curve = xi_curve(config, kappas, n_per_obstacle=args.n,
                         threads=args.threads)
        out = os.path.join(args.outdir, "xi.csv")
        _write_csv(out, ["kappa", "xi"], zip(curve.kappas, curve.values))
        files["csv"] = out
        if not args.no_plot:
            from .plotting import plot_xi_curve
            png = os.path.join(args.outdir, "xi.png")
            plot_xi_curve(curve.kappas, curve.values, png)
            files["plot"] = png
        results = {"n_points": len(kappas),
                   "kappa_min": float(kappas[0]), "kappa_max": float(kappas[-1]),
                   "xi_first": float(curve.values[0]),
                   "xi_last": float(curve.values[-1])}
    _emit(_manifest(args, config, results, t0, cache, files))


def cmd_energy(args):
    t0 = time.perf_counter()
    config = load_config(args.config)
    cache = _open_cache(args, config)
    res = relative_energy(config, n_per_obstacle=args.n, tol=args.tol,
                          xi_lookup=cache, threads=args.threads)
    results = {
        "energy": res.energy,
        "error_estimate": res.error_estimate,
        "tail_bound": res.tail_bound,
        "n_xi_evals": res.n_xi_evals,
        "grid": res.params,
    }
    _emit(_manifest(args, config, results, t0, cache))


def cmd_force(args):
    t0 = time.perf_counter()
    config = load_config(args.config)
    if not 0 <= args.obstacle < len(config.obstacles):
        raise SchemaError(f"--obstacle {args.obstacle} out of range "
                          f"(config has {len(config.obstacles)} obstacles)")
    out = force_dispatch(config, args.obstacle, route=args.route,
                         n_per_obstacle=args.n, tol=args.tol)
    if args.route == "all":
        results = {name: _force_dict(r) for name, r in out.items()}
        vecs = np.array([r.force for r in out.values()])
        results["max_route_spread"] = float(
            np.max(np.ptp(vecs, axis=0))) if len(vecs) > 1 else 0.0
    else:
        results = _force_dict(out)
    _emit(_manifest(args, config, results, t0))


def _force_dict(res) -> dict:
    return {
        "force": [float(c) for c in np.atleast_1d(res.force)],
        "route": res.route,
        "obstacle": res.obstacle_index,
        "error_estimate": res.error_estimate,
    }


def cmd_sweep(args):
    t0 = time.perf_counter()
    config = load_config(args.config)
    if not 0 <= args.obstacle < len(config.obstacles):
        raise SchemaError(f"--obstacle {args.obstacle} out of range "
                          f"(config has {len(config.obstacles)} obstacles)")
    direction = _parse_direction(args.direction, config.dimension)
    offsets = _parse_range(args.offsets, "--offsets")
    rows = energy_sweep(config, args.obstacle, direction, offsets,
                        n_per_obstacle=args.n, tol=args.tol,
                        threads=args.threads)
    out = os.path.join(args.outdir, "sweep.csv")
    _write_csv(out, ["offset", "energy", "error_estimate"],
               [(s, r.energy, r.error_estimate) for s, r in rows])
    files = {"csv": out}
    if not args.no_plot:
        from .plotting import plot_sweep
        png = os.path.join(args.outdir, "sweep.png")
        plot_sweep([s for s, _ in rows], [r.energy for _, r in rows], png)
        files["plot"] = png
    results = {
        "n_points": len(rows),
        "energy_min": min(r.energy for _, r in rows),
        "energy_max": max(r.energy for _, r in rows),
    }
    _emit(_manifest(args, config, results, t0, files=files))


def _interior_mask(config: Configuration, pts: np.ndarray, disc) -> np.ndarray:
    """True where a grid point must be skipped: inside an obstacle or too
    close to a boundary for the field evaluator."""
    mask = np.zeros(len(pts), dtype=bool)
    if config.dimension == 1:
        for ob in config.obstacles:
            mask |= (pts[:, 0] >= ob.a - 1e-9) & (pts[:, 0] <= ob.b + 1e-9)
        return mask
    from matplotlib.path import Path

    tt = np.linspace(0.0, 2.0 * math.pi, 512, endpoint=False)
    for p, curve in enumerate(config.obstacles):
        ring = curve.point(tt)
        mask |= Path(ring).contains_points(pts)
        sl = disc.block_slice(p)
        bd = disc.nodes[sl]
        spacing = 2.0 * math.pi * np.max(disc.params["speeds"][p]) / (sl.stop - sl.start)
        d2 = np.min((pts[:, 0][:, None] - bd[:, 0][None, :]) ** 2
                    + (pts[:, 1][:, None] - bd[:, 1][None, :]) ** 2, axis=1)
        mask |= np.sqrt(d2) < 2.5 * spacing
    return mask


def cmd_tensor_field(args):
    t0 = time.perf_counter()
    config = load_config(args.config)
    d = config.dimension
    xs = _parse_range(args.grid_x, "--grid-x")
    if d == 2:
        if args.grid_y is None:
            raise SchemaError("--grid-y is required for 2d configurations")
        ys = _parse_range(args.grid_y, "--grid-y")
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        pts = np.column_stack([gx.ravel(), gy.ravel()])
    else:
        if args.grid_y is not None:
            raise SchemaError("--grid-y only applies to 2d configurations")
        pts = xs[:, None]

    disc = discretize(config, args.n)
    skip = _interior_mask(config, pts, disc)
    live = np.where(~skip)[0]
    t00 = np.full(len(pts), np.nan)
    h_rel = np.full(len(pts), np.nan)
    k0 = np.full(len(pts), np.nan)
    tij = np.full((len(pts), d, d), np.nan)
    # chunked so the (points x nodes) work arrays stay modest
    for lo in range(0, len(live), 2048):
        idx = live[lo:lo + 2048]
        fld = t_rel(config, pts[idx], n_per_obstacle=args.n, tol=args.tol)
        t00[idx] = fld.t00
        h_rel[idx] = fld.h_rel
        k0[idx] = fld.k0
        tij[idx] = fld.tij

    if d == 1:
        header = ["x", "t00", "t11", "h_rel", "k0"]
        rows = zip(pts[:, 0], t00, tij[:, 0, 0], h_rel, k0)
    else:
        header = ["x", "y", "t00", "t11", "t12", "t22", "h_rel", "k0"]
        rows = zip(pts[:, 0], pts[:, 1], t00, tij[:, 0, 0], tij[:, 0, 1],
                   tij[:, 1, 1], h_rel, k0)
    out = os.path.join(args.outdir, "tensor_field.csv")
    _write_csv(out, header, rows)
    files = {"csv": out}
    if not args.no_plot:
        png = os.path.join(args.outdir, "tensor_field.png")
        if d == 1:
            from .plotting import plot_tensor_field_1d
            plot_tensor_field_1d(pts[:, 0], t00, tij[:, 0, 0], png)
        else:
            from .plotting import plot_tensor_field_2d
            plot_tensor_field_2d(
                gx, gy, t00.reshape(gx.shape), config, png)
        files["plot"] = png
    results = {
        "n_points": len(pts),
        "n_evaluated": int(len(live)),
        "n_masked": int(skip.sum()),
        "t00_min": float(np.nanmin(t00)) if len(live) else None,
    }
    _emit(_manifest(args, config, results, t0, files=files))


# ---------------------------------------------------------------------------
# validation suites

def _suite_1d(checks):
    from .exact1d import (
        energy_exact_1d,
        force_exact_1d,
        two_intervals,
        xi_exact_1d,
    )
    from .stressforce import force_fd

    config = two_intervals(1.0, w1=1.0, w2=2.0)
    for kappa in (0.3, 1.0, 3.0):
        got = xi_point(config, kappa)
        want = float(xi_exact_1d(config, kappa))
        checks.append(("1d xi kappa=%g" % kappa,
                       abs(got - want) / abs(want), 1e-10))
    res = relative_energy(config, tol=1e-10)
    want = energy_exact_1d(config)
    checks.append(("1d energy", abs(res.energy - want) / abs(want), 1e-8))
    fd = force_fd(config, 1)
    want = force_exact_1d(config)
    checks.append(("1d force (fd)", abs(fd.force[0] - want) / abs(want), 1e-6))


def _suite_pw(checks):
    from .oracle_pw import TwoDiscSpec, energy_pw, xi_pw

    config = Configuration(dimension=2, mass=0.0, obstacles=[
        ClosedCurve.circle((-1.0, 0.0), 0.5),
        ClosedCurve.circle((1.0, 0.0), 0.5),
    ])
    spec = TwoDiscSpec.from_configuration(config)
    for kappa in (0.5, 1.0, 2.0):
        got = xi_point(config, kappa, n_per_obstacle=96)
        want = xi_pw(spec, kappa)
        checks.append(("pw xi kappa=%g" % kappa, abs(got - want), 1e-8))
    res = relative_energy(config, n_per_obstacle=96, tol=1e-10)
    want, _ = energy_pw(spec, tol=1e-10)
    checks.append(("pw energy", abs(res.energy - want) / abs(want), 1e-6))


def cmd_validate(args):
    t0 = time.perf_counter()
    suite = args.suite
    checks = []
    if suite in ("1d", "all"):
        _suite_1d(checks)
    if suite in ("pw", "all"):
        _suite_pw(checks)
    failures = 0
    for name, err, tol in checks:
        ok = err <= tol
        failures += 0 if ok else 1
        print(f"{'ok  ' if ok else 'FAIL'} {name:24s} err={err:.3e} tol={tol:.0e}")
    man = {
        "command": "validate",
        "version": __version__,
        "suite": suite,
        "n_checks": len(checks),
        "n_failures": failures,
        "timing": {"wall_s": round(time.perf_counter() - t0, 4)},
    }
    print(json.dumps(man, indent=2, sort_keys=True))
    if failures:
        raise ValidationFailure(f"{failures} of {len(checks)} checks failed")


# ---------------------------------------------------------------------------
# argument wiring

def _add_common(p, needs_config=True, grids=False):
    if needs_config:
        p.add_argument("--config", required=True, help="path to a JSON "
                       "configuration file (see docs/schemas.md)")
    p.add_argument("--n", type=int, default=64,
                   help="boundary nodes per obstacle (d=2); default 64")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="target tolerance for frequency integration")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for independent kappa evaluations")
    p.add_argument("--cache-dir", default=None,
                   help="directory for the persistent Xi cache "
                        "(default: $CASIMIR_CACHE_DIR if set, else none)")
    if grids:
        p.add_argument("--outdir", default=".",
                       help="directory for CSV/PNG outputs (default: .)")
        p.add_argument("--no-plot", action="store_true",
                       help="skip PNG rendering")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="casimir",
        description="Relative Casimir energies and forces between rigid "
                    "Dirichlet obstacles via boundary-layer determinants.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xi", help="evaluate Xi(i kappa)")
    _add_common(p, grids=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--kappa", type=float, help="single kappa value")
    g.add_argument("--kappa-grid", help="'min:max:num[:log]' grid; writes "
                                        "xi.csv (+ xi.png)")
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("energy", help="relative Casimir energy")
    _add_common(p)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("force", help="force on one obstacle")
    _add_common(p)
    p.add_argument("--obstacle", type=int, required=True,
                   help="index of the obstacle the force acts on")
    p.add_argument("--route", choices=["fd", "surface", "hadamard", "all"],
                   default="fd", help="force computation route (default fd)")
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("sweep", help="energy along a rigid displacement")
    _add_common(p, grids=True)
    p.add_argument("--obstacle", type=int, required=True)
    p.add_argument("--direction", required=True,
                   help="displacement direction, e.g. '1' (1d) or '0,1' (2d)")
    p.add_argument("--offsets", required=True,
                   help="'start:stop:num' offsets along the direction")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tensor-field", help="stress tensor on a point grid")
    _add_common(p, grids=True)
    p.add_argument("--grid-x", required=True, help="'x0:x1:nx' sample grid")
    p.add_argument("--grid-y", default=None,
                   help="'y0:y1:ny' sample grid (2d only)")
    p.set_defaults(func=cmd_tensor_field)

    p = sub.add_parser("validate", help="run built-in oracle suites")
    p.add_argument("--suite", "--oracle", dest="suite",
                   choices=["1d", "pw", "all"], default="all")
    p.set_defaults(func=cmd_validate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CasimirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for klass, code in _EXIT_CODES:
            if isinstance(exc, klass):
                return code
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
