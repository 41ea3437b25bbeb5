"""Integrated pole density of best rational approximants to sqrt.

The poles of the degree-N best approximant on [0,1] lie on the negative
axis; mapped to the imaginary axis coordinate y = sqrt(|p|), their
integrated (counting) density above height y is asymptotically

    H(N, y) = (N+1)/2 - sqrt(N) * L(y) - Q(y)

where L is the leading tail integral and Q an O(1) correction, both
vanishing as y -> infinity.  Inverting H on its monotone branch places
individual poles; the largest ones come out at -8N/((2k+1)^2 pi^2), and
the number of poles with magnitude > 1 grows like 0.4 sqrt(N).

H is NOT monotone all the way down: it has a shallow minimum (about 0.58)
near y = 1/sinh(pi sqrt(N)) before diverging as y -> 0, so the inversion
bracket must stop at that turning point.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .errors import InputError, NumericError
from .quadrature import doubling_simpson

_TAIL_CUTOFF = math.log(1e18)


def density_leading(y):
    """Leading tail integral (1/pi) int_y^inf dt/(t sqrt(1+t^2)).

    Closed form asinh(1/y)/pi; for large y it behaves like
    1/(pi y) - 1/(6 pi y^3) + O(y^-5).
    """
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise InputError("y must be positive")
    out = np.arcsinh(1.0 / y) / math.pi
    return float(out) if out.ndim == 0 else out


def density_correction(y: float, tol: float = 1e-12) -> float:
    """O(1) correction term -(1/pi^2) int_0^inf asinh(1/(y e^s)) ds.

    Always negative; equals (1/pi^2) int_y^inf log(t/(1+sqrt(1+t^2)))/t dt
    after substituting t = y e^s, which is the form that makes the
    infinite tail quadrature-friendly.
    """
    if y <= 0:
        raise InputError(f"y must be positive, got {y}")
    # integrand < 1e-18 once y e^s > 1e18
    upper = max(5.0, _TAIL_CUTOFF - math.log(y))

    def integrand(s):
        return np.arcsinh(np.exp(-s) / y)

    return -doubling_simpson(integrand, 0.0, upper, tol) / math.pi**2


def stahl_density(n: int, y: float, tol: float = 1e-12) -> float:
    """Integrated pole density H(n, y) of the degree-n best approximant."""
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    return (n + 1) / 2.0 - math.sqrt(n) * float(density_leading(y)) \
        - density_correction(y, tol)


def _bracket_low(n: int) -> float:
    # turning point of H sits near 1/sinh(pi sqrt(n)); clamp the argument
    # so sinh does not overflow
    return 1.0 / math.sinh(min(math.pi * math.sqrt(n), 700.0))


def invert_stahl_density(n: int, j: float, tol: float = 1e-12) -> float:
    """The y > 0 with H(n, y) = j, on the monotone branch.

    Requires j strictly between the turning-point value of H (about 0.58)
    and the y -> infinity limit (n+1)/2.
    """
    if not (j < (n + 1) / 2.0):
        raise InputError(f"j must be below (n+1)/2 = {(n + 1) / 2}, got {j}")
    lo = _bracket_low(n)
    hi = 1e12
    f_lo = stahl_density(n, lo, tol) - j
    if f_lo >= 0:
        raise InputError(
            f"j={j} is below the monotone range of H (H({lo:.3e}) = {f_lo + j:.4f})")
    f_hi = stahl_density(n, hi, tol) - j
    if f_hi <= 0:
        raise NumericError("upper bracket failed; j too close to (n+1)/2")

    def g(t):
        return stahl_density(n, math.exp(t), tol) - j

    t_root = brentq(g, math.log(lo), math.log(hi), xtol=1e-13, rtol=1e-14)
    return math.exp(t_root)


def large_pole_estimate(n: int, k: int):
    """Asymptotic location -8n/((2k+1)^2 pi^2) of the (k+1)-largest pole."""
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if not 0 <= k < n:
        raise InputError(f"k must satisfy 0 <= k < n, got {k}")
    return -8.0 * n / ((2 * k + 1) ** 2 * math.pi**2)


def pole_from_density(n: int, j: float, tol: float = 1e-12) -> float:
    """Pole location -y^2 with H(2n, y) = j.

    The density of the degree-n approximant's poles to sqrt is that of the
    degree-2n approximant to |x| on [-1,1], hence the doubled argument.
    """
    y = invert_stahl_density(2 * n, j, tol)
    return -(y * y)


def count_large_poles(n: int, tol: float = 1e-12) -> float:
    """Expected number of best-approximant poles with magnitude > 1.

    n - H(2n, 1), approximately 0.4 sqrt(n); returned as a real since the
    statement is asymptotic, not a literal count.
    """
    if n < 4:
        raise InputError(f"n must be >= 4, got {n}")
    return n - stahl_density(2 * n, 1.0, tol)
