"""End-to-end acceptance checks, one per headline claim of the solver.

Each test prints a single verdict line (visible even under pytest capture)
with the measured numbers and the elapsed time against the stated budget.
"""

import math
import time

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from casimir import (
    ClosedCurve,
    Configuration,
    SurfaceContour,
    TwoDiscSpec,
    energy_pw,
    force,
    force_boundary_hadamard,
    force_fd,
    force_surface,
    h_rel_profile_1d,
    min_gap,
    relative_energy,
    t_rel,
    two_intervals,
    xi,
    xi_pw,
)


@pytest.fixture
def verdict(capsys):
    def _verdict(name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        with capsys.disabled():
            print(line, flush=True)
        assert ok, line
    return _verdict


def unit_discs(center_distance=3.0, mass=0.0):
    return Configuration(2, mass, [
        ClosedCurve.circle((0.0, 0.0), 1.0),
        ClosedCurve.circle((center_distance, 0.0), 1.0),
    ])


def half_discs():
    return Configuration(2, 0.0, [
        ClosedCurve.circle((-1.0, 0.0), 0.5),
        ClosedCurve.circle((1.0, 0.0), 0.5),
    ])


def test_1d_energy_closed_form(verdict):
    """E = -pi/(24 g) for two intervals, independent of their widths."""
    t0 = time.perf_counter()
    gaps = [0.25, 0.5, 1.0, 2.0, 4.0]
    err = max(abs(relative_energy(two_intervals(g)).energy
                  + math.pi / (24.0 * g)) for g in gaps)
    widths = [relative_energy(two_intervals(1.0, w1=w, w2=w)).energy
              for w in (0.3, 1.0, 2.0)]
    spread = max(widths) - min(widths)
    dt = time.perf_counter() - t0
    ok = err <= 1e-8 and spread < 1e-10 and dt < 1.0
    verdict("1d-energy-closed-form", ok,
            f"max |E + pi/24g| = {err:.2e} (tol 1e-8), "
            f"width spread = {spread:.2e} (tol 1e-10), {dt:.2f}s < 1s")


def test_1d_force_closed_form(verdict):
    """Finite-difference force matches pi/(24 g^2); the extrapolated
    boundary kernel at the inner face matches -pi/(6 g^2)."""
    t0 = time.perf_counter()
    rel = 0.0
    for g in (0.5, 1.0, 2.0):
        want = -math.pi / (24.0 * g * g)       # on the right obstacle
        got = force_fd(two_intervals(g), 1).force[0]
        rel = max(rel, abs(got - want) / abs(want))
    res = force_boundary_hadamard(two_intervals(1.0), 1)
    kern = res.params["boundary_kernel_values"][0]
    krel = abs(kern + math.pi / 6.0) / (math.pi / 6.0)
    dt = time.perf_counter() - t0
    ok = rel <= 1e-6 and krel <= 1e-4 and dt < 5.0
    verdict("1d-force-closed-form", ok,
            f"max fd rel err = {rel:.2e} (tol 1e-6), "
            f"boundary kernel rel err = {krel:.2e} (tol 1e-4), {dt:.2f}s < 5s")


def test_two_discs_vs_partial_waves(verdict):
    """Nystrom Xi and energy for two unit discs agree with the
    partial-wave (Bessel) route."""
    t0 = time.perf_counter()
    cfg = unit_discs(3.0)
    spec = TwoDiscSpec(1.0, 1.0, 3.0)
    xerr = max(abs(xi(cfg, k, n_per_obstacle=128) - xi_pw(spec, k, n_orders=40))
               for k in (0.5, 1.0, 2.0, 5.0))
    e_bi = relative_energy(cfg, n_per_obstacle=128).energy
    e_pw = energy_pw(spec, n_orders=40)[0]
    erel = abs(e_bi - e_pw) / abs(e_pw)
    dt = time.perf_counter() - t0
    ok = xerr <= 1e-8 and erel <= 1e-6 and dt < 30.0
    verdict("two-discs-vs-partial-waves", ok,
            f"max |Xi_bi - Xi_pw| = {xerr:.2e} (tol 1e-8), "
            f"energy rel diff = {erel:.2e} (tol 1e-6), {dt:.1f}s < 30s")


def test_two_discs_three_force_routes(verdict):
    """The three force routes agree on two unit discs across gaps."""
    t0 = time.perf_counter()
    fd_vs_surf = 0.0
    had_vs_surf = 0.0
    for gap in (0.5, 1.0, 2.0):
        cfg = unit_discs(2.0 + gap)
        f_fd = force_fd(cfg, 1).force
        f_su = force_surface(cfg, 1).force
        f_ha = force_boundary_hadamard(cfg, 1).force
        scale = np.linalg.norm(f_su)
        fd_vs_surf = max(fd_vs_surf, np.linalg.norm(f_fd - f_su) / scale)
        had_vs_surf = max(had_vs_surf, np.linalg.norm(f_ha - f_su) / scale)
    dt = time.perf_counter() - t0
    ok = fd_vs_surf <= 1e-4 and had_vs_surf <= 1e-3 and dt < 300.0
    verdict("two-discs-three-force-routes", ok,
            f"max fd/surface rel diff = {fd_vs_surf:.2e} (tol 1e-4), "
            f"max hadamard/surface rel diff = {had_vs_surf:.2e} (tol 1e-3), "
            f"{dt:.1f}s < 300s")


def test_surface_contour_independence(verdict):
    """The stress-tensor flux is the same through two different contours."""
    t0 = time.perf_counter()
    cfg = half_discs()
    fa = force_surface(cfg, 1, contour=SurfaceContour((1.5, 0.0), 1.25)).force
    fb = force_surface(cfg, 1, contour=SurfaceContour((1.52, 0.03), 1.38)).force
    rel = np.linalg.norm(fa - fb) / np.linalg.norm(fa)
    dt = time.perf_counter() - t0
    ok = rel <= 1e-6 and dt < 60.0
    verdict("surface-contour-independence", ok,
            f"contour rel diff = {rel:.2e} (tol 1e-6), {dt:.1f}s < 60s")


def test_xi_decay_rate(verdict):
    """|Xi(i kappa)| decays like exp(-2 g kappa) with g the minimal gap."""
    t0 = time.perf_counter()
    kaps = np.linspace(5.0, 15.0, 11)
    worst = 0.0
    for cfg in (two_intervals(1.0), unit_discs(3.0)):
        vals = np.array([xi(cfg, k) for k in kaps])
        rate = -np.polyfit(kaps, np.log(np.abs(vals)), 1)[0]
        target = 2.0 * min_gap(cfg)
        worst = max(worst, abs(rate - target) / target)
    dt = time.perf_counter() - t0
    ok = worst <= 0.15 and dt < 30.0
    verdict("xi-decay-rate", ok,
            f"max fitted-rate rel err = {worst:.2e} (tol 0.15), {dt:.1f}s < 30s")


def test_symmetries_and_zeros(verdict):
    """Joint translations and reflections leave E unchanged, opposite
    obstacles feel opposite forces, and single obstacles see exact zeros."""
    t0 = time.perf_counter()
    pair = half_discs()
    moved = Configuration(2, 0.0, [c.translated((0.37, -0.21))
                                   for c in pair.obstacles])
    e0 = relative_energy(pair, tol=1e-8).energy
    trans = abs(relative_energy(moved, tol=1e-8).energy - e0)

    mirrored = Configuration(2, 0.0, [
        ClosedCurve.circle((1.0, 0.0), 0.5),
        ClosedCurve.circle((-1.0, 0.0), 0.5),
    ])
    refl = abs(relative_energy(mirrored, tol=1e-8).energy - e0)

    mix = Configuration(2, 0.0, [
        ClosedCurve.circle((0.0, 0.0), 0.6),
        ClosedCurve.ellipse((2.4, 0.15), (0.9, 0.55)),
    ])
    f0 = force_fd(mix, 0, n_per_obstacle=48, tol=1e-8).force
    f1 = force_fd(mix, 1, n_per_obstacle=48, tol=1e-8).force
    newton = np.linalg.norm(f0 + f1)

    lone2 = Configuration(2, 0.0, [ClosedCurve.circle((0.0, 0.0), 1.0)])
    lone1 = Configuration(1, 0.0, [two_intervals(1.0).obstacles[0]])
    zeros = [xi(lone2, 1.0), relative_energy(lone2).energy,
             xi(lone1, 1.0), relative_energy(lone1).energy]
    for cfg in (lone1, lone2):
        for route in ("fd", "surface", "hadamard"):
            zeros.extend(force(cfg, 0, route=route).force.tolist())
    zero_ok = all(z == 0.0 for z in zeros)

    dt = time.perf_counter() - t0
    ok = (trans <= 1e-10 and newton <= 1e-7 and refl <= 1e-8
          and zero_ok and dt < 60.0)
    verdict("symmetries-and-zeros", ok,
            f"translation dE = {trans:.2e} (tol 1e-10), "
            f"|F0 + F1| = {newton:.2e} (tol 1e-7), "
            f"reflection dE = {refl:.2e} (tol 1e-8), "
            f"single-obstacle zeros exact = {zero_ok}, {dt:.1f}s < 60s")


def test_mass_dependence(verdict):
    """E(m) rises monotonically toward zero and is continuous at m = 0."""
    t0 = time.perf_counter()
    def e_of(m):
        return relative_energy(Configuration(
            1, m, two_intervals(1.0).obstacles)).energy
    es = [e_of(m) for m in (0.0, 0.5, 1.0, 2.0)]
    mono = all(a < b < 0.0 for a, b in zip(es, es[1:]))
    jump = abs(e_of(1e-4) - es[0])
    dt = time.perf_counter() - t0
    ok = mono and jump <= 1e-4 and dt < 60.0
    verdict("mass-dependence", ok,
            f"monotone toward 0 = {mono}, |E(1e-4) - E(0)| = {jump:.2e} "
            f"(tol 1e-4), {dt:.1f}s < 60s")


def test_1d_stress_integral(verdict):
    """Integrating T00 over space recovers E, and the h_rel profile
    matches the closed form pointwise."""
    t0 = time.perf_counter()
    cfg = two_intervals(1.0, w1=1.0, w2=2.0)     # obstacles [-1,0] and [1,3]
    eps = 1e-6
    gl_x, gl_w = leggauss(24)
    total = 0.0
    for a, b in ((-5.0, -1.0 - eps), (eps, 1.0 - eps), (3.0 + eps, 8.0)):
        xs = 0.5 * (b - a) * gl_x + 0.5 * (a + b)
        ws = 0.5 * (b - a) * gl_w
        vals = t_rel(cfg, xs[:, None], tol=1e-10).t00
        total += float(ws @ vals)
    e_ref = relative_energy(cfg).energy
    ierr = abs(total - e_ref)

    pts = np.concatenate([np.linspace(0.08, 0.92, 10),
                          np.linspace(-4.0, -1.2, 5),
                          np.linspace(3.2, 7.0, 5)])
    herr = np.max(np.abs(t_rel(cfg, pts[:, None], tol=1e-10).h_rel
                         - h_rel_profile_1d(cfg, pts)))
    dt = time.perf_counter() - t0
    ok = ierr <= 1e-4 and herr <= 1e-6 and dt < 60.0
    verdict("1d-stress-integral", ok,
            f"|int T00 - E| = {ierr:.2e} (tol 1e-4), "
            f"max h_rel err = {herr:.2e} (tol 1e-6), {dt:.1f}s < 60s")
