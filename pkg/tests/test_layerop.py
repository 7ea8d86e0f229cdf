"""Single-layer operator assembly: free kernels, circle spectra, quadrature
scheme agreement, block splitting, and off-boundary source vectors."""

import math

import numpy as np
import pytest

from casimir import ClosedCurve, Configuration, Interval, discretize
from casimir.layerop import (
    assemble_Q,
    free_kernel,
    kress_weights,
    plain_kress_limit,
    source_vectors,
    split_blocks,
)

# frozen reference values (mpmath, 40 significant digits)
K0_091_OVER_2PI = 0.076335265072641045661   # K_0(0.91) / (2 pi)
I0K0_08 = 0.65948583489391253122            # I_0(0.8) K_0(0.8)
I3K3_08 = 0.16051793853035653993            # I_3(0.8) K_3(0.8)


def circle_pair(d=3.0, r=1.0, mass=0.0):
    return Configuration(2, mass, [
        ClosedCurve.circle((-d / 2, 0.0), r),
        ClosedCurve.circle((d / 2, 0.0), r),
    ])


# -- free kernels ------------------------------------------------------------

def test_free_kernel_2d_value():
    assert free_kernel(2, 1.3, np.array([0.7]))[0] == pytest.approx(
        K0_091_OVER_2PI, rel=1e-14)


def test_free_kernel_1d_value():
    # e^{-kappa r} / (2 kappa)
    val = free_kernel(1, 1.3, np.array([0.7]))[0]
    assert val == pytest.approx(math.exp(-0.91) / 2.6, rel=1e-14)


def test_free_kernel_underflow():
    assert free_kernel(2, 500.0, np.array([3.0]))[0] == 0.0


# -- quadrature weights ------------------------------------------------------

def test_kress_weights_integrate_log():
    # R_j weights integrate log(4 sin^2((t - s)/2)) exactly for trig
    # polynomials: sum_j R_j = -4pi/n * sum 1/m cos(...)=...; the defining
    # property we rely on is sum_j R_j cos(m s_j) reproducing the Fourier
    # coefficients -2pi/m of the log kernel for 1 <= m < n/2.
    n = 32
    r = kress_weights(n)
    s = 2.0 * math.pi * np.arange(n) / n
    for m in (1, 2, 5, 15):
        got = float(np.sum(r * np.cos(m * s)))
        assert got == pytest.approx(-2.0 * math.pi / m, rel=1e-12), m


# -- 1D assembly is exact ----------------------------------------------------

def test_assemble_q_1d_entries():
    cfg = Configuration(1, 0.0, [Interval(0, 1), Interval(2, 3)])
    disc = discretize(cfg, 64)
    kappa = 0.9
    q = assemble_Q(disc, kappa)
    x = disc.nodes[:, 0]
    expect = np.exp(-kappa * np.abs(x[:, None] - x[None, :])) / (2 * kappa)
    assert np.allclose(q.entries, expect, rtol=0, atol=1e-16)


# -- circle spectra ----------------------------------------------------------

def test_circle_block_matches_exact_spectrum():
    """Self-block of a unit circle diagonalizes in Fourier modes with
    eigenvalues R I_m(kR) K_m(kR); resolved modes must be machine-exact."""
    cfg = circle_pair(d=40.0, r=1.0)   # huge gap: cross-blocks negligible
    n = 64
    disc = discretize(cfg, n)
    kappa = 0.8
    q = assemble_Q(disc, kappa)
    blk = q.entries[:n, :n]
    w = disc.weights[:n]
    # undo the symmetric weighting, then diagonalize in the Fourier basis
    kernel = blk / np.sqrt(np.outer(w, w))
    t = 2.0 * math.pi * np.arange(n) / n
    for m, ref in ((0, I0K0_08), (3, I3K3_08)):
        vec = np.cos(m * t)
        applied = (kernel * w[None, :]) @ vec
        assert np.allclose(applied, ref * vec, rtol=0, atol=5e-13), m


def test_plain_kress_limit_values():
    # the stability threshold grows logarithmically with n
    assert plain_kress_limit(64) == pytest.approx(5.2, abs=0.2)
    assert plain_kress_limit(128) == pytest.approx(7.4, abs=0.2)
    assert plain_kress_limit(256) < plain_kress_limit(512)


def test_scheme_agreement_across_kappa():
    """Xi-relevant quantity (log det of the self block) must be continuous
    across the plain-Kress / projected / circulant scheme switches."""
    cfg = circle_pair(d=6.0, r=1.0)
    disc = discretize(cfg, 64)
    limit = plain_kress_limit(64) / 2.0   # kappa at half the diam-2 limit
    for kappa in (limit * 0.98, limit * 1.02):
        q = assemble_Q(disc, kappa)
        sign, ld = np.linalg.slogdet(q.entries[:64, :64])
        assert sign > 0
    # same matrix assembled at n=64 and n=128 agrees spectrally: compare
    # the smallest eigenvalue of the self block (a stand-in for stability)
    for kappa in (2.0, 6.0, 12.0):
        for n in (64, 128):
            d2 = discretize(cfg, n)
            q = assemble_Q(d2, kappa)
            ev = np.linalg.eigvalsh(q.entries[:n, :n])
            assert ev.min() > 0.0, (kappa, n)


def test_ellipse_block_positive_definite_high_kappa():
    e = Configuration(2, 0.0, [ClosedCurve.ellipse((0, 0), (1.4, 0.8)),
                               ClosedCurve.circle((8, 0), 1.0)])
    disc = discretize(e, 96)
    for kappa in (4.0, 9.0):
        q = assemble_Q(disc, kappa)
        ev = np.linalg.eigvalsh(q.entries[:96, :96])
        assert ev.min() > 0.0, kappa


# -- cross blocks and splitting ----------------------------------------------

def test_cross_block_entries():
    cfg = circle_pair(d=3.0, r=1.0)
    disc = discretize(cfg, 16)
    kappa = 1.1
    q = assemble_Q(disc, kappa)
    i, j = 3, 16 + 7
    r = np.linalg.norm(disc.nodes[i] - disc.nodes[j])
    want = math.sqrt(disc.weights[i] * disc.weights[j]) * free_kernel(
        2, kappa, np.array([r]))[0]
    assert q.entries[i, j] == pytest.approx(want, rel=1e-13)
    assert np.allclose(q.entries, q.entries.T, atol=0, rtol=0)


def test_split_blocks_exact():
    cfg = circle_pair()
    disc = discretize(cfg, 16)
    q = assemble_Q(disc, 1.0)
    qt, t = split_blocks(q)
    assert np.all(qt.entries + t.entries == q.entries)
    assert np.all(t.entries[:16, :16] == 0.0)
    assert np.all(t.entries[16:, 16:] == 0.0)
    assert np.all(qt.entries[:16, 16:] == 0.0)


# -- source vectors -----------------------------------------------------------

def test_source_vectors_derivatives_fd():
    cfg = circle_pair(d=3.0, r=1.0)
    disc = discretize(cfg, 32)
    kappa = 1.3
    pt = np.array([[0.2, 0.6]])
    g, grad, hess = source_vectors(disc, kappa, pt, derivatives=2)
    h = 1e-5
    for a in range(2):
        e = np.zeros(2)
        e[a] = h
        gp, _, _ = source_vectors(disc, kappa, pt + e, derivatives=0)
        gm, _, _ = source_vectors(disc, kappa, pt - e, derivatives=0)
        fd = (gp - gm) / (2 * h)
        assert np.allclose(grad[0, a], fd[0], rtol=1e-9, atol=1e-12), a
    # second derivatives need a larger step (roundoff ~ eps/h^2)
    h = 1e-4
    for a in range(2):
        e = np.zeros(2)
        e[a] = h
        gp, _, _ = source_vectors(disc, kappa, pt + e, derivatives=0)
        gm, _, _ = source_vectors(disc, kappa, pt - e, derivatives=0)
        fd2 = (gp + gm - 2 * g) / h**2
        assert np.allclose(hess[0, a, a], fd2[0], rtol=1e-6, atol=1e-10), a
    e = np.array([h, h])
    gpp, _, _ = source_vectors(disc, kappa, pt + e, derivatives=0)
    gmm, _, _ = source_vectors(disc, kappa, pt - e, derivatives=0)
    e2 = np.array([h, -h])
    gpm, _, _ = source_vectors(disc, kappa, pt + e2, derivatives=0)
    gmp, _, _ = source_vectors(disc, kappa, pt - e2, derivatives=0)
    fd = (gpp + gmm - gpm - gmp) / (4 * h**2)
    assert np.allclose(hess[0, 0, 1], fd[0], rtol=1e-6, atol=1e-10)


def test_source_vector_is_weighted_kernel_column():
    cfg = Configuration(1, 0.0, [Interval(0, 1), Interval(2, 3)])
    disc = discretize(cfg, 8)
    kappa = 0.7
    pt = np.array([[1.4]])
    g, _, _ = source_vectors(disc, kappa, pt, derivatives=0)
    x = disc.nodes[:, 0]
    want = np.sqrt(disc.weights) * np.exp(-kappa * np.abs(x - 1.4)) / (2 * kappa)
    assert np.allclose(g[0], want, rtol=1e-14)
