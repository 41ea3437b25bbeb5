"""Preassigned pole families on the negative real axis.

Two clustered families approach the branch point at 0 exponentially:

  uniform   p_j = -C exp(-sigma j / sqrt(N1)),        j = 0 .. N1-1
  tapered   p_j = -C exp(-sigma (sqrt(N1) - sqrt(j))), j = 1 .. N1

The tapered spacing mimics the pole distribution of the best rational
approximant of sqrt; it is what the trapezoidal reference approximant
produces.  A third family places a few "big" poles that stand in for a
polynomial term (poles clustering towards infinity):

  big       p_i = -8 N / ((2i+1)^2 pi^2),             i = 1 .. N2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class PoleSet:
    poles: np.ndarray
    scheme: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        p = np.asarray(self.poles, dtype=float)
        if p.ndim != 1:
            raise InputError("poles must form a 1-d array")
        if np.any(p >= 0) or not np.all(np.isfinite(p)):
            raise InputError("every pole must be finite and strictly negative")
        if len(np.unique(p)) != len(p):
            raise InputError("poles must be distinct")
        object.__setattr__(self, "poles", p)
        self.poles.flags.writeable = False

    def __len__(self) -> int:
        return len(self.poles)


def _check_counts(n: int, sigma: float | None = None, scale: float | None = None):
    if n < 1:
        raise InputError(f"need at least one pole, got {n}")
    if sigma is not None and sigma <= 0:
        raise InputError(f"sigma must be positive, got {sigma}")
    if scale is not None and scale <= 0:
        raise InputError(f"scale must be positive, got {scale}")


def uniform_poles(n1: int, sigma: float, scale: float = 1.0) -> PoleSet:
    """Exponentially spaced poles with uniform log-gap sigma/sqrt(N1)."""
    _check_counts(n1, sigma, scale)
    j = np.arange(n1)
    p = -scale * np.exp(-sigma * j / math.sqrt(n1))
    return PoleSet(p, "uniform", {"n1": n1, "sigma": sigma, "scale": scale})


def tapered_poles(n1: int, sigma: float, scale: float = 1.0) -> PoleSet:
    """Clustered poles with log-gaps that shrink like sigma/(2 sqrt(j)).

    Ascending magnitude: |p_1| = C exp(-sigma (sqrt(N1)-1)) up to |p_N1| = C.
    """
    _check_counts(n1, sigma, scale)
    j = np.arange(1, n1 + 1)
    p = -scale * np.exp(-sigma * (math.sqrt(n1) - np.sqrt(j)))
    return PoleSet(p, "tapered", {"n1": n1, "sigma": sigma, "scale": scale})


def big_poles(n: int, n2: int) -> PoleSet:
    """Large negative poles emulating a degree-N2 polynomial term.

    Descending magnitude, scale set by the total degree n of the target
    approximant; independent of any clustering scale.
    """
    _check_counts(n)
    if n2 < 1:
        raise InputError(f"need at least one big pole, got {n2}")
    i = np.arange(1, n2 + 1)
    p = -8.0 * n / ((2 * i + 1) ** 2 * math.pi**2)
    return PoleSet(p, "big", {"n": n, "n2": n2})
