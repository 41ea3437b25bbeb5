"""Contour-integral decomposition of the trapezoidal quadrature error.

The gap between the window-truncated integral representation of sqrt(z)
and its Nt-node trapezoidal sum is, exactly,

    integral - sum = end_ints + gamma_int - residue_term

where end_ints integrates the kernel over the two real stubs the
rectangle does not cover, gamma_int integrates kernel * delta over a
positively oriented rectangle enclosing the quadrature nodes, and
residue_term collects the kernel's two primary poles.  delta is the
quadrature-error kernel: the piecewise-constant sign weight minus the
cotangent comb whose residues reproduce the node sum.

Everything here is double-checked machinery: the identity holds to
quadrature tolerance, the conjectured bound on gamma_int and the decay
rate of the residue term are then measured against it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, InputError
from .quadrature import doubling_simpson, line_integral
from .trapezoid import default_step, t_parameter, truncated_sqrt_integral


def quadrature_error_kernel(u, step: float, branch: int | None = None):
    """delta(u): -1/2 + (i/2)cot(pi u/step) above the real axis, +1/2 + ... below.

    Evaluated through e^{2 pi i u/step} on whichever side keeps that factor
    small, so it never overflows.  `branch` forces the upper (+1) or lower
    (-1) expression regardless of sign(Im u); contour legs that touch the
    real axis use it to stay on their one-sided limit.
    """
    uu = np.atleast_1d(np.asarray(u, dtype=complex))
    scaled = uu / step
    on_lattice = (np.abs(scaled.imag) < 1e-12) \
        & (np.abs(scaled.real - np.round(scaled.real)) < 1e-12)
    if np.any(on_lattice):
        raise EvaluationError("delta evaluated on a quadrature node of the comb")
    if branch is None:
        upper = uu.imag >= 0
    elif branch > 0:
        upper = np.ones(uu.shape, dtype=bool)
    else:
        upper = np.zeros(uu.shape, dtype=bool)
    out = np.empty_like(uu)
    q = np.exp(2j * math.pi * scaled[upper])
    out[upper] = q / (1.0 - q)
    qc = np.exp(-2j * math.pi * scaled[~upper])
    out[~upper] = -qc / (1.0 - qc)
    return out[0] if np.asarray(u).ndim == 0 else out


def error_integrand(u, z: complex, t_param: float):
    """Kernel f(u) = (z/pi) u^{-1/2} e^{sqrt(u)-T} / (e^{2(sqrt(u)-T)} + z).

    Principal square root; callers keep Re u > 0 except for the u -> 0
    endpoint where f ~ u^{-1/2} is integrable.
    """
    uu = np.atleast_1d(np.asarray(u, dtype=complex))
    root = np.sqrt(uu)
    s = root - t_param
    out = (z / math.pi) / (root * (np.exp(s) + z * np.exp(-s)))
    return out[0] if np.asarray(u).ndim == 0 else out


def node_sum(z: complex, nt: int, step: float) -> complex:
    """Trapezoidal node sum step * sum_j f(j step); the S of the identity."""
    t_param = t_parameter(nt, step)
    nodes = step * np.arange(1, nt + 1)
    return step * np.sum(error_integrand(nodes, z, t_param))


@dataclass(frozen=True)
class PoleResidue:
    pole: complex
    residue: complex
    k: int
    branch: int  # +1 for the upper family, -1 for the lower


def pole_residue_pairs(z: complex, t_param: float, kmax: int = 0):
    """Poles of u -> f(u, z) right of the imaginary axis, with residues.

    The k-th pole of the upper (+) / lower (-) family is w^2 with
    w = T + log|z|/2 + i(arg z + (2k+1) pi (+/-1))/2; its residue is
    -/+ i (-1)^k sqrt(z)/pi.  Ordered k = 0..kmax, upper before lower.
    """
    z = complex(z)
    r = abs(z)
    if not 0 < r <= 1 + 1e-12:
        raise InputError(f"|z| must lie in (0, 1], got {r}")
    if kmax < 0:
        raise InputError(f"kmax must be >= 0, got {kmax}")
    theta = cmath.phase(z)
    base = t_param + 0.5 * math.log(r)
    root_z = cmath.sqrt(z)
    pairs = []
    for k in range(kmax + 1):
        for eps in (1, -1):
            w = base + 1j * (theta / 2.0 + eps * (2 * k + 1) * math.pi / 2.0)
            residue = -1j * eps * (-1) ** k * root_z / math.pi
            pairs.append(PoleResidue(pole=w * w, residue=residue, k=k, branch=eps))
    return pairs


def residue_term(z: complex, t_param: float, step: float) -> complex:
    """2 pi i (r+ delta(pole+) + r- delta(pole-)) for the primary pole pair."""
    total = 0.0j
    for pr in pole_residue_pairs(z, t_param, kmax=0):
        total += pr.residue * quadrature_error_kernel(pr.pole, step)
    return 2j * math.pi * total


@dataclass(frozen=True)
class ContourSetup:
    """Geometry for one quadrature-error evaluation.

    Valid for |z| in [e^{4+2 beta - 2T}, 1]: close enough to the outer end
    of the domain that the primary pole pair sits inside the rectangle
    [1-beta/2, 4T^2+1-beta/2] x [-ia, ia], a = 2 pi (T + log|z|/2), and
    every other pole sits outside.
    """

    z: complex
    nt: int
    beta: float = 0.0
    step: float | None = None
    tol: float = 2e-13
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
        z = complex(self.z)
        object.__setattr__(self, "z", z)
        r = abs(z)
        if not 0 < r <= 1 + 1e-12:
            raise InputError(f"|z| must lie in (0, 1], got {r}")
        arm = self.beta * math.pi / 2.0
        theta = abs(cmath.phase(z))
        if not (theta < 1e-12 or abs(theta - arm) < 1e-9):
            raise InputError(
                f"z must lie on the domain (argument 0 or +-{arm:.6f}), got {theta:.6f}")
        floor = math.exp(4.0 + 2.0 * self.beta - 2.0 * self.t_param)
        if r < floor * (1.0 - 1e-9):
            raise InputError(
                f"|z| = {r:.3e} below the validity floor {floor:.3e} for nt={self.nt}")
        if self.rect_left < 1e-6:
            raise InputError("degenerate rectangle: left edge at the origin")

    @property
    def radius(self) -> float:
        return abs(self.z)

    @property
    def half_height(self) -> float:
        return 2.0 * math.pi * (self.t_param + 0.5 * math.log(self.radius))

    @property
    def rect_left(self) -> float:
        return 1.0 - self.beta / 2.0

    @property
    def rect_right(self) -> float:
        return 4.0 * self.t_param**2 + 1.0 - self.beta / 2.0


@dataclass(frozen=True)
class ContourTerms:
    end_ints: complex
    gamma_int: complex
    residue_term: complex


def contour_terms(setup: ContourSetup) -> ContourTerms:
    """The three pieces of the quadrature-error identity, each by quadrature.

    Vertical rectangle legs are split at the real axis and evaluated on
    the one-sided limit of delta, since delta jumps by 1 across the axis;
    the left real stub uses u = v^2 to remove the u^{-1/2} endpoint
    singularity.
    """
    z, tp, h = setup.z, setup.t_param, setup.step
    tol = setup.tol
    x0, x1, a = setup.rect_left, setup.rect_right, setup.half_height

    def f(u):
        return error_integrand(u, z, tp)

    def stub_left(v):
        # f(v^2) * 2v with the singular factor cancelled
        s = v - tp
        return (2.0 * z / math.pi) / (np.exp(s) + z * np.exp(-s))

    left_stub = doubling_simpson(stub_left, 0.0, math.sqrt(x0), tol)
    right_stub = doubling_simpson(f, 4.0 * tp**2, x1, tol)
    end_ints = left_stub - right_stub

    def f_delta(branch):
        def g(u):
            return error_integrand(u, z, tp) \
                * quadrature_error_kernel(u, h, branch=branch)
        return g

    legs = [
        (x0 - 1j * a, x1 - 1j * a, -1),   # bottom
        (x1 - 1j * a, x1 + 0j, -1),       # right, lower half
        (x1 + 0j, x1 + 1j * a, +1),       # right, upper half
        (x1 + 1j * a, x0 + 1j * a, +1),   # top
        (x0 + 1j * a, x0 + 0j, +1),       # left, upper half
        (x0 + 0j, x0 - 1j * a, -1),       # left, lower half
    ]
    gamma = 0.0j
    for z0, z1, branch in legs:
        gamma += line_integral(f_delta(branch), z0, z1, tol)

    return ContourTerms(end_ints=end_ints, gamma_int=gamma,
                        residue_term=residue_term(z, tp, h))


@dataclass(frozen=True)
class IdentityReport:
    integral_value: complex
    node_sum: complex
    terms: ContourTerms
    lhs: complex
    rhs: complex
    defect: float


def error_identity_report(setup: ContourSetup) -> IdentityReport:
    """Evaluate both sides of the quadrature-error identity independently.

    lhs = truncated integral minus node sum (each computed directly),
    rhs = end_ints + gamma_int - residue_term.  The defect |lhs - rhs|
    is bounded by the stacked quadrature tolerances when the machinery
    is correct; it is the master self-check of this module.
    """
    i_val = truncated_sqrt_integral(setup.z, setup.t_param, tol=1e-13)
    s_val = node_sum(setup.z, setup.nt, setup.step)
    terms = contour_terms(setup)
    lhs = i_val - s_val
    rhs = terms.end_ints + terms.gamma_int - terms.residue_term
    return IdentityReport(integral_value=i_val, node_sum=s_val, terms=terms,
                          lhs=lhs, rhs=rhs, defect=abs(lhs - rhs))


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    t_param: float


def check_conjecture_bound(setup: ContourSetup, ratio_cap: float = 100.0) -> BoundCheck:
    """|gamma_int| against its conjectured ceiling.

    On the interval the ceiling is the sharp 12 e^{-T}; on V-domains only
    the e^{-T} rate is claimed, so the ceiling is ratio_cap * e^{-T} and
    the measured ratio is the interesting output.
    """
    terms = contour_terms(setup)
    lhs = abs(terms.gamma_int)
    scale = math.exp(-setup.t_param)
    rhs = 12.0 * scale if setup.beta == 0.0 else ratio_cap * scale
    return BoundCheck(lhs=lhs, rhs=rhs, ratio=lhs / scale, passed=lhs < rhs,
                      t_param=setup.t_param)


def residue_rate_check(step: float, beta: float, nt_list,
                       radii=(0.1, 0.5, 1.0)):
    """Rows of |residue_term| / e^{-T} across node counts and radii.

    With the step matched to the domain the ratio is bounded by an
    nt-independent constant (it equals 4 |sin(phase)| to leading order, so
    it can dip near phase zeros but never exceeds ~4).  A mismatched step
    makes it drift exponentially in nt, which is how a wrong step is
    detected.
    """
    if step <= 0:
        raise InputError(f"step must be positive, got {step}")
    rows = []
    arm = beta * math.pi / 2.0
    for nt in nt_list:
        tp = t_parameter(nt, step)
        for r in radii:
            z = r * cmath.exp(1j * arm) if beta > 0 else complex(r)
            mag = float(abs(residue_term(z, tp, step)))
            rows.append({
                "nt": int(nt),
                "radius": float(r),
                "t_param": tp,
                "residue_abs": mag,
                "ratio": mag / math.exp(-tp),
            })
    return rows
