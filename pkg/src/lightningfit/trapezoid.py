"""Trapezoidal-quadrature rational approximant to sqrt on [0,1] and V-domains.

Discretizing the integral representation of sqrt(z) along the real axis
with step h and Nt nodes gives a rational function of degree Nt whose
error decays like exp(-sqrt(Nt*h)/2).  Written in partial fractions it
has Nt simple poles on the negative real axis; the Nt/4 poles of
magnitude <= 1 are exactly the tapered clustered family with
sigma = 2 sqrt(h), and the remaining large poles plus the constant are
polynomial-like on the domain.  This approximant is the constructive
benchmark the fitted ones are measured against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, InputError, NumericError
from .quadrature import doubling_simpson


def default_step(beta: float = 0.0) -> float:
    """Quadrature step matched to the domain opening: h = (2 - beta) pi^2."""
    if not (0.0 <= beta < 2.0):
        raise InputError(f"beta must lie in [0, 2), got {beta}")
    return (2.0 - beta) * math.pi**2


def t_parameter(nt: int, step: float) -> float:
    """Half-width T of the integration window, T = sqrt(Nt h)/2."""
    return math.sqrt(nt * step) / 2.0


@dataclass(frozen=True)
class TrapApproximant:
    """Nt-node trapezoidal approximant; step defaults to (2-beta) pi^2."""

    nt: int
    beta: float = 0.0
    step: float | None = None
    t_param: float = field(init=False)

    def __post_init__(self):
        if self.nt < 1:
            raise InputError(f"need at least one node, got nt={self.nt}")
        if not (0.0 <= self.beta < 2.0):
            raise InputError(f"beta must lie in [0, 2), got {self.beta}")
        if self.step is None:
            object.__setattr__(self, "step", default_step(self.beta))
        elif self.step <= 0:
            raise InputError(f"step must be positive, got {self.step}")
        object.__setattr__(self, "t_param", t_parameter(self.nt, self.step))

    def __call__(self, z):
        return trap_eval(self, z)


def trap_eval(t: TrapApproximant, z):
    """Evaluate the trapezoidal approximant at z (scalar or array).

    Terms are summed in ascending node order; for z >= 0 every term is
    positive so the ordering only shuffles roundoff.  The summand is
    evaluated as 1/(e^s + z e^{-s}) which stays bounded for all node
    positions, unlike the textbook e^s/(e^{2s} + z) form.
    """
    z = np.asarray(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    j = np.arange(1, t.nt + 1)
    s = np.sqrt(j * t.step) - t.t_param
    es, ems = np.exp(s), np.exp(-s)
    den = es[None, :] + z[:, None] * ems[None, :]
    if np.any(den == 0):
        raise EvaluationError("evaluation point coincides with a pole")
    terms = (1.0 / np.sqrt(j * t.step))[None, :] / den
    out = (z * t.step / math.pi) * terms.sum(axis=1)
    return out[0] if scalar else out


def trap_error_bound(nt: int, beta: float = 0.0) -> float:
    """Max-norm error bound 20 e^{-T} with the default step for beta.

    For beta = 0 the constant 20 is proved; for beta > 0 only the rate
    e^{-T} is, and the same constant is kept as a heuristic.
    """
    if nt < 1:
        raise InputError(f"need at least one node, got nt={nt}")
    return 20.0 * math.exp(-t_parameter(nt, default_step(beta)))


@dataclass(frozen=True)
class PartialFractionForm:
    """Exact partial fractions of the Nt = 4 N1 node approximant.

    poles p_j = -exp(-2 sqrt(h)(sqrt(N1) - sqrt(j))), j = 1..4N1, ascending
    magnitude; residues w_j p_j and constant sum(w_j) with weights
    w_j = (sqrt(h)/pi) sqrt(|p_j|/j).  Only the first N1 poles have
    magnitude <= 1; beyond roughly N1 = 6000 the large-pole weights
    overflow double precision.
    """

    n1: int
    step: float
    poles: np.ndarray
    term_weights: np.ndarray

    def __post_init__(self):
        self.poles.flags.writeable = False
        self.term_weights.flags.writeable = False

    @property
    def nt(self) -> int:
        return 4 * self.n1

    @property
    def t_param(self) -> float:
        return t_parameter(self.nt, self.step)

    @property
    def residues(self) -> np.ndarray:
        return self.term_weights * self.poles

    @property
    def constant(self) -> float:
        return float(self.term_weights.sum())

    @property
    def small_poles(self) -> np.ndarray:
        """The N1 poles of magnitude <= 1 (tapered family, sigma = 2 sqrt(h))."""
        return self.poles[: self.n1]

    @property
    def large_poles(self) -> np.ndarray:
        return self.poles[self.n1:]


def trap_partial_fractions(n1: int, step: float) -> PartialFractionForm:
    if n1 < 1:
        raise InputError(f"need n1 >= 1, got {n1}")
    if step <= 0:
        raise InputError(f"step must be positive, got {step}")
    j = np.arange(1, 4 * n1 + 1)
    root_h = math.sqrt(step)
    with np.errstate(over="ignore"):
        poles = -np.exp(-2.0 * root_h * (math.sqrt(n1) - np.sqrt(j)))
    if not np.all(np.isfinite(poles)):
        # outermost pole is exp(2 sqrt(step*n1)); past ~e^709 doubles give inf
        raise NumericError(
            f"pole ladder exceeds double range at n1={n1}, step={step:g}")
    weights = (root_h / math.pi) * np.sqrt(np.abs(poles) / j)
    return PartialFractionForm(n1=n1, step=step, poles=poles, term_weights=weights)


def _pole_differences(z, poles):
    z = np.atleast_1d(np.asarray(z))
    diff = z[:, None] - poles[None, :]
    if np.any(diff == 0):
        raise EvaluationError("evaluation point coincides with a pole")
    return z, diff


def naive_partial_fraction_eval(pf: PartialFractionForm, z):
    """Literal sum C + sum a_j/(z - p_j).

    Suffers catastrophic cancellation between the constant and the
    large-pole terms (absolute error ~1e-9 already at n1 = 16); kept for
    identity tests, not for production evaluation.
    """
    zv, diff = _pole_differences(z, pf.poles)
    out = pf.constant + (pf.residues[None, :] / diff).sum(axis=1)
    return out[0] if np.asarray(z).ndim == 0 else out


def large_pole_tail(pf: PartialFractionForm, z):
    """Constant plus large-pole partial fractions, evaluated stably.

    Algebraically C + sum_{|p_j|>1} a_j/(z - p_j), regrouped as
    sum_{j<=N1} w_j + sum_{j>N1} w_j z/(z - p_j) so no huge intermediates
    appear.  On the domain this function is smooth and polynomial-like:
    its analyticity region is bounded by the smallest large pole.
    """
    zv, diff = _pole_differences(z, pf.large_poles)
    head = pf.term_weights[: pf.n1].sum()
    tail = (pf.term_weights[pf.n1:][None, :] * zv[:, None] / diff).sum(axis=1)
    out = head + tail
    return out[0] if np.asarray(z).ndim == 0 else out


def stable_partial_fraction_eval(pf: PartialFractionForm, z):
    """Partial-fraction evaluation with the cancellation removed.

    C + sum a_j/(z - p_j) collapses algebraically to sum w_j z/(z - p_j),
    whose terms are all positive for z in [0, 1]; near z = 0 the naive
    form instead subtracts O(1) quantities to produce an O(z) value.
    """
    zv, diff = _pole_differences(z, pf.poles)
    out = (pf.term_weights[None, :] * zv[:, None] / diff).sum(axis=1)
    return out[0] if np.asarray(z).ndim == 0 else out


def truncated_sqrt_integral(z, t_param: float, tol: float = 1e-13):
    """Window-truncated integral representation of sqrt(z).

    (2z/pi) * integral over s in [-T, T] of ds/(e^s + z e^{-s}), by
    panel-doubling quadrature, deliberately independent of the
    trapezoidal discretization it serves as an oracle for.  Converges to
    sqrt(z) as T grows; the truncation error is below (4/pi) e^{-T} on
    the closed unit interval.

    tol is the absolute tolerance on the returned value; the raw integral
    is ~pi/(2 sqrt|z|), so for small z the inner quadrature runs at the
    correspondingly looser tolerance (an absolute 1e-13 on a 1e7-sized
    integral would sit below its roundoff floor).
    """
    if t_param <= 0:
        raise InputError(f"t_param must be positive, got {t_param}")
    if z == 0:
        return 0.0

    def integrand(s):
        return 1.0 / (np.exp(s) + z * np.exp(-s))

    inner_tol = tol * math.pi / (2.0 * abs(z))
    val = doubling_simpson(integrand, -t_param, t_param, inner_tol)
    return (2.0 * z / math.pi) * val
