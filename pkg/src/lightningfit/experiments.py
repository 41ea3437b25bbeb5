"""Sweep studies as deterministic table-producing pipelines.

Each run_* function sweeps one family of fits (or one verification
battery), captures per-row failures without aborting the sweep, and
returns a ResultTable whose metadata echoes the full configuration.
The acceptance checks read everything they need from these tables.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .contour import (ContourSetup, check_conjecture_bound,
                      error_identity_report, residue_rate_check)
from .density import count_large_poles, large_pole_estimate, pole_from_density
from .errors import InputError, LightningError
from .fitting import BasisSpec, fit
from .poles import big_poles, tapered_poles, uniform_poles
from .problems import (ApproxProblem, Domain, Target, build_fit_grid,
                       build_validation_grid)
from .tables import ResultTable
from .trapezoid import default_step, t_parameter

DEFAULT_N1_LIST = (9, 16, 25, 36, 49, 64)
RHO_BERNSTEIN = 3.0 + 2.0 * math.sqrt(2.0)

# scheme, sigma, augmentation for each convergence variant; the augmented
# variants use N2 = ceil(1.3 sqrt(N1)), the plain ones a bare constant
CONVERGENCE_VARIANTS = {
    "tapered": ("tapered", math.sqrt(2.0) * math.pi, "none"),
    "uniform": ("uniform", math.pi, "none"),
    "tapered+poly": ("tapered", 2.0 * math.sqrt(2.0) * math.pi, "poly"),
    "uniform+poly": ("uniform", 2.0 * math.pi, "poly"),
    "tapered+big": ("tapered", 2.0 * math.sqrt(2.0) * math.pi, "big"),
    "uniform+big": ("uniform", 2.0 * math.pi, "big"),
}


def poly_degree_rule(n1: int) -> int:
    """Polynomial degree that balances the clustered poles: ceil(1.3 sqrt(N1))."""
    if n1 < 1:
        raise InputError(f"pole count must be >= 1, got {n1}")
    return math.ceil(1.3 * math.sqrt(n1))


def _make_poles(scheme: str, n1: int, sigma: float, scale: float):
    if scheme == "tapered":
        return tapered_poles(n1, sigma, scale)
    if scheme == "uniform":
        return uniform_poles(n1, sigma, scale)
    raise LightningError(f"unknown scheme {scheme!r}")


def run_convergence(n1_list=DEFAULT_N1_LIST, variants=None, scale: float = 2.0,
                    eps_rel: float = 2e-14, per_arm: int = 2000,
                    decades: float = 16.0, val_per_arm: int = 10000) -> ResultTable:
    """Degree sweep of sqrt(x) fits for every pole/augmentation variant.

    Fit-grid columns are shared across rows of equal basis, but each row
    refits from scratch; errors in a row are recorded, not raised.
    """
    if variants is None:
        variants = tuple(CONVERGENCE_VARIANTS)
    domain = Domain.unit_interval()
    problem = ApproxProblem(Target.sqrt(), domain)
    grid = build_fit_grid(domain, decades=decades, per_arm=per_arm)
    vgrid = build_validation_grid(domain, per_arm=val_per_arm, decades=decades)
    rows = []
    for name in variants:
        scheme, sigma, augment = CONVERGENCE_VARIANTS[name]
        for n1 in n1_list:
            n2 = poly_degree_rule(n1) if augment != "none" else 0
            n_total = n1 + n2
            try:
                clustered = _make_poles(scheme, n1, sigma, scale)
                extra = big_poles(n_total, n2) if augment == "big" else None
                degree = n2 if augment == "poly" else 0
                spec = BasisSpec(clustered=clustered, extra_finite=extra,
                                 poly_degree=degree)
                _, rep = fit(problem, spec, grid=grid, eps_rel=eps_rel,
                             validation_grid=vgrid)
                rows.append((name, scheme, n_total, n1, n2, sigma, rep.max_err,
                             rep.coeff_2norm, rep.resid_2norm, rep.eff_rank, ""))
            except LightningError as exc:
                rows.append((name, scheme, n_total, n1, n2, sigma,
                             math.nan, math.nan, math.nan, 0, str(exc)))
    meta = {
        "kind": "convergence",
        "target": "sqrt",
        "n1_list": list(n1_list),
        "variants": list(variants),
        "scale": scale,
        "eps_rel": eps_rel,
        "per_arm": per_arm,
        "decades": decades,
        "val_per_arm": val_per_arm,
    }
    return ResultTable(
        columns=("variant", "scheme", "n", "n1", "n2", "sigma", "max_err",
                 "coeff_2norm", "resid_2norm", "eff_rank", "status"),
        rows=rows, meta=meta)


def slope_vs_sqrt_n(table: ResultTable, variant: str,
                    err_lo: float = 1e-10, err_hi: float = 1e-3):
    """Least-squares slope of log(max_err) against sqrt(N) for one variant.

    Restricted to the clean-convergence window err_lo <= max_err <= err_hi,
    which drops the preasymptotic head and the roundoff floor.  Returns
    (slope, points_used).
    """
    names = table.column("variant")
    ns = table.column("n")
    errs = table.column("max_err")
    xs, ys = [], []
    for name, n, err in zip(names, ns, errs):
        if name == variant and isinstance(err, float) and math.isfinite(err) \
                and err_lo <= err <= err_hi:
            xs.append(math.sqrt(n))
            ys.append(math.log(err))
    if len(xs) < 2:
        raise LightningError(
            f"variant {variant!r} has {len(xs)} rows in the error window; need >= 2")
    slope = np.polyfit(np.array(xs), np.array(ys), 1)[0]
    return float(slope), len(xs)


def refine_argmin(xs, ys):
    """Parabolic refinement of argmin over a positive grid.

    Fits a parabola through the discrete minimizer and its neighbours in
    (log x, y); falls back to the grid point at the boundary or when the
    parabola degenerates.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise InputError(f"grid/value shape mismatch: {xs.shape} vs {ys.shape}")
    i = int(np.nanargmin(ys))
    if i == 0 or i == len(xs) - 1:
        return float(xs[i])
    u = np.log(xs[i - 1:i + 2])
    v = ys[i - 1:i + 2]
    if not np.all(np.isfinite(v)):
        return float(xs[i])
    a, b, _ = np.polyfit(u, v, 2)
    if a <= 0:
        return float(xs[i])
    u_star = -b / (2.0 * a)
    u_star = min(max(u_star, u[0]), u[2])
    return float(math.exp(u_star))


def run_sigma_sweep(alpha: float = math.pi / 10, n1: int = 10,
                    poly_degree: int = 3, sigma_min: float = 2.0,
                    sigma_max: float = 30.0, n_sigma: int = 41,
                    scale: float = 1.0, eps_rel: float = 2e-14,
                    per_arm: int = 2000, include_plain: bool = True) -> ResultTable:
    """Clustering-parameter sweep for x^alpha on the unit interval.

    Two fit families per sigma: clustered poles with a bare constant, and
    the same poles plus a low-degree polynomial.  The refined argmin of
    each family lands in the metadata next to the 2 pi / sqrt(alpha) rule.
    """
    domain = Domain.unit_interval()
    problem = ApproxProblem(Target.power(alpha), domain)
    grid = build_fit_grid(domain, per_arm=per_arm)
    vgrid = build_validation_grid(domain)
    sigmas = np.geomspace(sigma_min, sigma_max, n_sigma)
    variants = (("plain", 0), ("poly", poly_degree)) if include_plain \
        else (("poly", poly_degree),)
    rows = []
    errs = {name: [] for name, _ in variants}
    for sigma in sigmas:
        for name, degree in variants:
            try:
                spec = BasisSpec(clustered=tapered_poles(n1, float(sigma), scale),
                                 poly_degree=degree)
                _, rep = fit(problem, spec, grid=grid, eps_rel=eps_rel,
                             validation_grid=vgrid)
                err = rep.max_err
                status = ""
            except LightningError as exc:
                err, status = math.nan, str(exc)
            rows.append((name, float(sigma), err, status))
            errs[name].append(err)
    meta = {
        "kind": "sigma-sweep",
        "alpha": alpha,
        "n1": n1,
        "poly_degree": poly_degree,
        "scale": scale,
        "eps_rel": eps_rel,
        "per_arm": per_arm,
        "sigma_grid": [float(s) for s in sigmas],
        "sigma_rule": 2.0 * math.pi / math.sqrt(alpha),
    }
    for name, _ in variants:
        log_err = [math.log(e) if math.isfinite(e) else math.nan for e in errs[name]]
        meta[f"argmin_sigma_{name}"] = refine_argmin(sigmas, log_err)
    return ResultTable(columns=("variant", "sigma", "max_err", "status"),
                       rows=rows, meta=meta)


def run_grid(alpha: float = math.pi / 10,
             n1_list=(4, 9, 16, 25, 36, 49, 64, 81, 100),
             n2_list=tuple(range(0, 16)), sigma: float | None = None,
             eps_rel: float = 2e-14, per_arm: int = 2000) -> ResultTable:
    """(N1, N2) error surface for x^alpha; where does more polynomial stop helping."""
    if sigma is None:
        sigma = 2.0 * math.pi / math.sqrt(alpha)
    domain = Domain.unit_interval()
    problem = ApproxProblem(Target.power(alpha), domain)
    grid = build_fit_grid(domain, per_arm=per_arm)
    vgrid = build_validation_grid(domain)
    rows = []
    near_optimal = []
    for n1 in n1_list:
        clustered = tapered_poles(n1, sigma, 1.0)
        row_errs = []
        for n2 in n2_list:
            try:
                spec = BasisSpec(clustered=clustered, poly_degree=n2)
                _, rep = fit(problem, spec, grid=grid, eps_rel=eps_rel,
                             validation_grid=vgrid)
                err, status = rep.max_err, ""
            except LightningError as exc:
                err, status = math.nan, str(exc)
            rows.append((n1, n2, err, status))
            row_errs.append(err)
        finite = [e for e in row_errs if math.isfinite(e)]
        if finite:
            best = min(finite)
            chosen = next(n2 for n2, e in zip(n2_list, row_errs)
                          if math.isfinite(e) and e <= 3.0 * best)
            near_optimal.append({"n1": int(n1), "n2": int(chosen),
                                 "best_err": best})
    meta = {
        "kind": "n1-n2-grid",
        "alpha": alpha,
        "sigma": sigma,
        "eps_rel": eps_rel,
        "per_arm": per_arm,
        "n1_list": [int(n) for n in n1_list],
        "n2_list": [int(n) for n in n2_list],
        "near_optimal": near_optimal,
        "n2_rule": "1.1*sqrt(n1) - 1",
    }
    return ResultTable(columns=("n1", "n2", "max_err", "status"),
                       rows=rows, meta=meta)


VSHAPE_SIGMA_RULES = ("tapered-default", "opening-matched", "four")


def _vshape_sigma(rule: str, beta: float) -> float:
    if rule == "tapered-default":
        return 2.0 * math.sqrt(2.0) * math.pi
    if rule == "opening-matched":
        return 2.0 * math.sqrt(2.0 - beta) * math.pi
    if rule == "four":
        return 4.0
    raise LightningError(f"unknown sigma rule {rule!r}")


def run_vshape(beta_list=(0.25, 0.5, 0.75, 1.0, 1.25, 1.5), n1: int = 40,
               n2: int = 10, eps_rel: float = 2e-14,
               per_arm: int = 2000) -> ResultTable:
    """sqrt(z) on V-domains: one row per (opening, sigma rule)."""
    rows = []
    for beta in beta_list:
        domain = Domain.vshape(beta)
        problem = ApproxProblem(Target.sqrt(), domain)
        grid = build_fit_grid(domain, per_arm=per_arm)
        vgrid = build_validation_grid(domain)
        for rule in VSHAPE_SIGMA_RULES:
            sigma = _vshape_sigma(rule, beta)
            try:
                spec = BasisSpec(clustered=tapered_poles(n1, sigma, 1.0),
                                 poly_degree=n2)
                _, rep = fit(problem, spec, grid=grid, eps_rel=eps_rel,
                             validation_grid=vgrid)
                err, status = rep.max_err, ""
            except LightningError as exc:
                err, status = math.nan, str(exc)
            rows.append((float(beta), rule, sigma, err, status))
    meta = {
        "kind": "vshape-angle",
        "target": "sqrt",
        "n1": n1,
        "n2": n2,
        "eps_rel": eps_rel,
        "per_arm": per_arm,
        "beta_list": [float(b) for b in beta_list],
    }
    return ResultTable(columns=("beta", "rule", "sigma", "max_err", "status"),
                       rows=rows, meta=meta)


def corner_target(beta: float) -> Target:
    """Dominant corner behaviour z^{1/beta}, with a log factor at integer powers."""
    exponent = 1.0 / beta
    nearest = round(exponent)
    if abs(exponent - nearest) < 1e-12:
        return Target.power_log(float(nearest))
    return Target.power(exponent)


def corner_sigma_rule(beta: float) -> float:
    """Optimal clustering rule sqrt(2 (2-beta) beta) pi for corner targets."""
    return math.sqrt(2.0 * (2.0 - beta) * beta) * math.pi


def run_corner_sigma(beta_list=(0.5, 1.0, 1.5), n1: int = 20, n2: int = 20,
                     sigma_min: float = 2.0, sigma_max: float = 30.0,
                     n_sigma: int = 41, eps_rel: float = 2e-14,
                     per_arm: int = 2000) -> ResultTable:
    """Per-opening sigma sweep for the corner target z^{1/beta}."""
    sigmas = np.geomspace(sigma_min, sigma_max, n_sigma)
    rows = []
    argmins = []
    for beta in beta_list:
        domain = Domain.vshape(beta)
        problem = ApproxProblem(corner_target(beta), domain)
        grid = build_fit_grid(domain, per_arm=per_arm)
        vgrid = build_validation_grid(domain)
        log_err = []
        for sigma in sigmas:
            try:
                spec = BasisSpec(clustered=tapered_poles(n1, float(sigma), 1.0),
                                 poly_degree=n2)
                _, rep = fit(problem, spec, grid=grid, eps_rel=eps_rel,
                             validation_grid=vgrid)
                err, status = rep.max_err, ""
            except LightningError as exc:
                err, status = math.nan, str(exc)
            rows.append((float(beta), float(sigma), err, status))
            log_err.append(math.log(err) if math.isfinite(err) else math.nan)
        argmins.append({"beta": float(beta),
                        "argmin_sigma": refine_argmin(sigmas, log_err),
                        "rule_sigma": corner_sigma_rule(beta)})
    meta = {
        "kind": "corner-sigma",
        "n1": n1,
        "n2": n2,
        "eps_rel": eps_rel,
        "per_arm": per_arm,
        "beta_list": [float(b) for b in beta_list],
        "sigma_grid": [float(s) for s in sigmas],
        "argmin": argmins,
    }
    return ResultTable(columns=("beta", "sigma", "max_err", "status"),
                       rows=rows, meta=meta)


def run_pole_ladder(n_list=(16, 36, 64)) -> ResultTable:
    """Pole ladder of the best approximant from the density inversion.

    Per degree n, inverts the integrated density at j = 1..n and lines the
    magnitudes up against the tapered clustering model and the large-pole
    asymptote for the top rungs.
    """
    sigma_best = 2.0 * math.sqrt(2.0) * math.pi
    rows = []
    counts = []
    for n in n_list:
        count = count_large_poles(n)
        counts.append({"n": int(n), "count_large": count})
        for j in range(1, n + 1):
            try:
                magnitude = abs(pole_from_density(n, float(j)))
                status = ""
            except LightningError as exc:
                magnitude, status = math.nan, str(exc)
            tapered_model = math.exp(-sigma_best * (math.sqrt(n) - math.sqrt(j)))
            big_model = abs(large_pole_estimate(n, n - j))
            rows.append((int(n), int(j), magnitude, tapered_model, big_model,
                         count, status))
    meta = {
        "kind": "pole-ladder",
        "n_list": [int(n) for n in n_list],
        "sigma_model": sigma_best,
        "counts": counts,
    }
    return ResultTable(
        columns=("n", "j", "density_pole_mag", "tapered_model", "big_model",
                 "count_large", "status"),
        rows=rows, meta=meta)


def run_verify_bounds(nt_list=(16, 64, 144), vshape_nt_list=(64, 144),
                      vshape_beta: float = 1.0, tol: float = 2e-13) -> ResultTable:
    """Quadrature-error identity, conjectured contour bound, and residue rates.

    Interval rows cover the 3x3 grid (radius near the validity floor, 0.5,
    1.0) x nt_list with the matched step; V-domain rows record the bound
    ratio at |z| = 1.  Pass flags are stored as 0/1 ints.
    """
    rows = []
    for beta, nts in ((0.0, tuple(nt_list)), (vshape_beta, tuple(vshape_nt_list))):
        step = default_step(beta)
        arm = beta * math.pi / 2.0
        for nt in nts:
            t_param = t_parameter(nt, step)
            if beta == 0.0:
                radii = (math.exp(4.0 - 2.0 * t_param), 0.5, 1.0)
            else:
                radii = (1.0,)
            for r in radii:
                z = r * cmath.exp(1j * arm) if beta > 0 else r
                setup = ContourSetup(z=z, nt=nt, beta=beta, tol=tol)
                report = error_identity_report(setup)
                bound = check_conjecture_bound(setup)
                scale = math.exp(-t_param)
                lhs_abs = abs(report.lhs)
                identity_pass = report.defect <= max(1e-10, 1e-3 * lhs_abs)
                rows.append((
                    float(beta), int(nt), float(r), t_param,
                    lhs_abs, report.defect, int(identity_pass),
                    abs(report.terms.end_ints),
                    abs(report.terms.gamma_int),
                    abs(report.terms.residue_term),
                    scale,
                    bound.ratio, bound.rhs, int(bound.passed),
                    abs(report.terms.residue_term) / scale,
                ))
    meta = {
        "kind": "verify-bounds",
        "nt_list": [int(n) for n in nt_list],
        "vshape_nt_list": [int(n) for n in vshape_nt_list],
        "vshape_beta": vshape_beta,
        "tol": tol,
        "residue_rates_matched": residue_rate_check(
            default_step(0.0), 0.0, nt_list),
        "residue_rates_mismatched": residue_rate_check(
            math.pi**2, 0.0, nt_list),
    }
    return ResultTable(
        columns=("beta", "nt", "radius", "t_param", "i_minus_s_abs",
                 "identity_defect", "identity_pass", "end_ints_abs",
                 "gamma_abs", "residue_abs", "exp_neg_t", "gamma_ratio",
                 "conj_bound", "conj_pass", "residue_ratio"),
        rows=rows, meta=meta)
