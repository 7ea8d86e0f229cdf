"""Modified Bessel functions of integer order, with overflow-safe scaling.

Every Green's-function evaluation at imaginary frequency reduces to the
modified Bessel pair (I_n, K_n) on the positive real axis.  This module is the
single place the package touches special functions: plain values where they
are representable, and (value, log_scale) pairs everywhere else, so that
e^{-kappa r} factors down to e^{-700} and beyond never overflow or underflow
silently.  Derivatives come from the standard recurrences
K_0' = -K_1 and K_n' = -(K_{n-1} + K_{n+1})/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp


@dataclass(frozen=True)
class ScaledBesselValue:
    """A Bessel value stored as value * exp(log_scale).

    The scaled value stays O(1) for all arguments; the exponential lives in
    log_scale.  For K_n the scale is -x, for I_n it is +x.
    """

    value: float
    log_scale: float

    def unscaled(self) -> float:
        """Reconstruct the plain value (may overflow/underflow for large |log_scale|)."""
        return float(self.value * np.exp(self.log_scale))


def _check_args(n, x) -> None:
    if n != int(n) or n < 0:
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    if not np.isfinite(x) or x <= 0.0:
        raise ValueError(f"argument must be positive and finite, got {x!r}")


def bessel_k(n: int, x: float) -> float:
    """K_n(x) for integer n >= 0 and x > 0 (plain value; underflows past x ~ 745)."""
    _check_args(n, x)
    return float(sp.kv(n, x))


def bessel_k_scaled(n: int, x: float) -> ScaledBesselValue:
    """e^x K_n(x) together with log-scale -x, valid for arbitrarily large x."""
    _check_args(n, x)
    return ScaledBesselValue(float(sp.kve(n, x)), -float(x))


def bessel_i(n: int, x: float) -> float:
    """I_n(x) for integer n >= 0 and x > 0 (plain value; overflows past x ~ 700)."""
    _check_args(n, x)
    return float(sp.iv(n, x))


def bessel_i_scaled(n: int, x: float) -> ScaledBesselValue:
    """e^{-x} I_n(x) together with log-scale +x, valid for arbitrarily large x."""
    _check_args(n, x)
    return ScaledBesselValue(float(sp.ive(n, x)), float(x))


def bessel_k_derivatives(n: int, x: float) -> tuple[float, float, float]:
    """(K_n, K_n', K_n'') at x > 0 from the standard recurrences.

    K_n' = -(K_{n-1} + K_{n+1})/2 with K_{-m} = K_m, and one more application
    for the second derivative: K_n'' = (K_{n-2} + 2 K_n + K_{n+2})/4.
    """
    _check_args(n, x)
    orders = np.abs(np.arange(n - 2, n + 3))
    k = sp.kv(orders, x)
    km2, km1, k0, kp1, kp2 = (float(v) for v in k)
    return k0, -(km1 + kp1) / 2.0, (km2 + 2.0 * k0 + kp2) / 4.0


# ---------------------------------------------------------------------------
# Vectorized kernels used by the assembly and jet code.  These always go
# through the scaled routines so large kappa*r underflows cleanly to zero
# (the true value is below 1e-300 there) instead of tripping exp overflow.
# ---------------------------------------------------------------------------

def k0_safe(x):
    """K_0(x) elementwise for x > 0, graceful underflow for large x."""
    x = np.asarray(x, dtype=float)
    return sp.k0e(x) * np.exp(-x)


def k1_safe(x):
    """K_1(x) elementwise for x > 0, graceful underflow for large x."""
    x = np.asarray(x, dtype=float)
    return sp.k1e(x) * np.exp(-x)


def k2_safe(x):
    """K_2(x) elementwise for x > 0, graceful underflow for large x."""
    x = np.asarray(x, dtype=float)
    return sp.kve(2, x) * np.exp(-x)


def i0_plain(x):
    """I_0(x) elementwise (caller guarantees x small enough not to overflow)."""
    return sp.i0(np.asarray(x, dtype=float))
