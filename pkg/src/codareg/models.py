"""Compositional regression families, fitted across all pivots.

Three families are provided, each built on the pivot coordinate machinery:

* ``fit_comp_covariates`` -- a non-compositional response regressed on the
  pivot coordinates of a composition plus ordinary covariates (gaussian or
  binomial). One fit per pivot part; the first coordinate's coefficient is
  the reported effect for that part, while the intercept, the covariate
  coefficients, and the overall fit statistics are shared by every pivot.
* ``fit_comp_response`` -- each part's first pivot coordinate regressed on
  ordinary covariates; one least-squares model per part.
* ``fit_within_composition`` -- one part's balancing coordinate regressed on
  the pivot coordinates of the remaining parts (plus covariates).

``fit_naive_raw`` is the deliberately wrong baseline: plain least squares on
raw part columns. When the response is a part and the regressors complete a
constant-sum composition the fit is vacuously perfect; the result carries a
pathology flag instead of pretending R^2 = 1 means anything.
"""

from dataclasses import dataclass, field

import numpy as np

from .dataio import Dataset
from .errors import PivotConsistencyError, ValidationError
from .linmod import FitSummary, design_with_intercept, fit_ols
from .logitreg import GlmSummary, fit_logit
from .simplex import response_coordinate, to_coordinates

FAMILIES = ("gaussian", "binomial")

# Internal guard on cross-pivot agreement; the mathematical identity is far
# tighter (see tests), this only trips on genuinely inconsistent fits.
_SHARED_GUARD = 1e-6


@dataclass(frozen=True)
class ModelSpec:
    """What to fit: part group, covariates, response, family, scheme."""

    parts: tuple
    covariates: tuple = ()
    response: str = None
    family: str = "gaussian"
    scheme: str = "orthogonal"
    alpha: float = 0.05

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}; expected {FAMILIES}")
        if set(self.parts) & set(self.covariates):
            raise ValidationError("parts and covariates must be disjoint")
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "covariates", tuple(self.covariates))


@dataclass(frozen=True)
class TableRow:
    name: str
    estimate: float
    std_error: float
    statistic: float
    p_value: float
    significant: bool


@dataclass(frozen=True)
class PivotTable:
    """Assembled coefficients across all pivot fits (one row per part).

    ``kind`` records which family produced it: "comp_covariates" (ordinary
    response) or "within_composition" (the response is a part's balancing
    coordinate and ``response`` names that part).
    """

    kind: str
    family: str
    scheme: str
    alpha: float
    response: str
    parts: tuple
    intercept: TableRow
    part_rows: tuple
    covariate_rows: tuple
    shared: dict
    fits: tuple = field(repr=False)


@dataclass(frozen=True)
class ResponseTable:
    """Per-part covariate coefficients for compositional-response models."""

    scheme: str
    alpha: float
    parts: tuple
    row_names: tuple
    estimates: np.ndarray
    std_errors: np.ndarray
    statistics: np.ndarray
    p_values: np.ndarray
    significant: np.ndarray
    fits: tuple = field(repr=False)


@dataclass(frozen=True)
class NaiveFit:
    """Raw-percentage least squares baseline plus the constant-sum flag."""

    fit: FitSummary
    constant_sum_pathology: bool


def _row(name, est, se, stat, p, alpha):
    return TableRow(
        name=name,
        estimate=float(est),
        std_error=float(se),
        statistic=float(stat),
        p_value=float(p),
        significant=bool(p < alpha),
    )


def _check_shared(label, values, tol=_SHARED_GUARD):
    values = np.asarray(values, dtype=float)
    spread = float(values.max() - values.min())
    if spread > tol * max(1.0, float(np.abs(values).max())):
        raise PivotConsistencyError(
            f"{label} differs across pivot fits by {spread:.3e}; "
            "the pivot systems should be exact rotations of each other"
        )


def _coordinate_design(parts_mat, pivot, spec, cov_mat, part_names):
    z = to_coordinates(parts_mat, pivot, spec.scheme, part_names=part_names).values
    k = cov_mat.shape[1]
    names = [f"z{i + 1}" for i in range(z.shape[1])] + list(spec.covariates)
    cols = [z[:, i] for i in range(z.shape[1])] + [cov_mat[:, j] for j in range(k)]
    return design_with_intercept(cols, names)


def _fit_family(design, y, spec):
    if spec.family == "binomial":
        return fit_logit(design, y)
    return fit_ols(design, y, alpha=spec.alpha)


def _stat_fields(fit):
    if isinstance(fit, GlmSummary):
        return fit.coefficients, fit.std_errors, fit.z_values, fit.p_values
    return fit.coefficients, fit.std_errors, fit.t_values, fit.p_values


def _pivot_fit_loop(parts_mat, part_names, y, spec, cov_mat, response_label, kind):
    d = parts_mat.shape[1]
    k = cov_mat.shape[1]
    fits = []
    part_rows = []
    for pivot in range(d):
        design = _coordinate_design(parts_mat, pivot, spec, cov_mat, part_names)
        fit = _fit_family(design, y, spec)
        fits.append(fit)
        coef, se, stat, p = _stat_fields(fit)
        part_rows.append(_row(part_names[pivot], coef[1], se[1], stat[1], p[1], spec.alpha))

    # Shared quantities are taken from the first fit after checking that all
    # pivots agree; they are identical up to rotation-induced rounding.
    _check_shared("intercept", [f.coefficients[0] for f in fits])
    for j in range(k):
        _check_shared(
            f"covariate {spec.covariates[j]!r}",
            [f.coefficients[1 + (d - 1) + j] for f in fits],
        )
    first = fits[0]
    coef, se, stat, p = _stat_fields(first)
    intercept = _row("(Intercept)", coef[0], se[0], stat[0], p[0], spec.alpha)
    cov_rows = tuple(
        _row(spec.covariates[j], coef[1 + (d - 1) + j], se[1 + (d - 1) + j],
             stat[1 + (d - 1) + j], p[1 + (d - 1) + j], spec.alpha)
        for j in range(k)
    )
    if spec.family == "binomial":
        _check_shared("residual deviance", [f.residual_deviance for f in fits])
        _check_shared("AIC", [f.aic for f in fits])
        shared = {
            "null_deviance": first.null_deviance,
            "residual_deviance": first.residual_deviance,
            "aic": first.aic,
            "df_null": first.df_null,
            "df_residual": first.df_residual,
            "iterations": first.iterations,
        }
    else:
        _check_shared("sigma2", [f.sigma2_hat for f in fits])
        _check_shared("R-squared", [f.r_squared for f in fits])
        shared = {
            "sigma2": first.sigma2_hat,
            "r_squared": first.r_squared,
            "adj_r_squared": first.adj_r_squared,
            "f_stat": first.f_stat,
            "f_pvalue": first.f_pvalue,
            "df_residual": first.df_residual,
        }
    return PivotTable(
        kind=kind,
        family=spec.family,
        scheme=spec.scheme,
        alpha=spec.alpha,
        response=response_label,
        parts=tuple(part_names),
        intercept=intercept,
        part_rows=tuple(part_rows),
        covariate_rows=cov_rows,
        shared=shared,
        fits=tuple(fits),
    )


def fit_comp_covariates(data, spec):
    """Regress a non-compositional response on compositional covariates.

    Runs one fit per pivot part; every part of the declared composition
    enters every fit, so parts later hidden from a report still shape the
    estimates.
    """
    if spec.response is None:
        raise ValidationError("comp-covariates model needs a response column")
    if spec.response in spec.parts:
        raise ValidationError(
            "response is a compositional part; use fit_within_composition instead"
        )
    parts_mat = data.parts_matrix(spec.parts)
    cov_mat = _covariate_matrix(data, spec)
    y = data.columns[spec.response]
    if spec.family == "binomial" and not np.all((y == 0) | (y == 1)):
        raise ValidationError("binomial response must be coded 0/1")
    return _pivot_fit_loop(
        parts_mat, spec.parts, y, spec, cov_mat, spec.response, "comp_covariates"
    )


def fit_comp_response(data, spec):
    """Regress each part's first pivot coordinate on ordinary covariates."""
    if spec.family != "gaussian":
        raise ValidationError("compositional-response models are least-squares only")
    parts_mat = data.parts_matrix(spec.parts)
    cov_mat = _covariate_matrix(data, spec)
    design = design_with_intercept(
        [cov_mat[:, j] for j in range(cov_mat.shape[1])],
        list(spec.covariates),
        n_rows=data.n,
    )
    d = parts_mat.shape[1]
    fits = []
    for pivot in range(d):
        z1 = to_coordinates(parts_mat, pivot, spec.scheme, part_names=spec.parts).values[:, 0]
        fits.append(fit_ols(design, z1, alpha=spec.alpha))
    row_names = ("(Intercept)",) + tuple(spec.covariates)
    est = np.column_stack([f.coefficients for f in fits])
    se = np.column_stack([f.std_errors for f in fits])
    stat = np.column_stack([f.t_values for f in fits])
    pvals = np.column_stack([f.p_values for f in fits])
    return ResponseTable(
        scheme=spec.scheme,
        alpha=spec.alpha,
        parts=tuple(spec.parts),
        row_names=row_names,
        estimates=est,
        std_errors=se,
        statistics=stat,
        p_values=pvals,
        significant=pvals < spec.alpha,
        fits=tuple(fits),
    )


def fit_within_composition(data, target_part, spec):
    """Regress one part's balancing coordinate on the rest of the composition.

    ``target_part`` must belong to the declared part group; the remaining
    parts become the compositional regressors and the model is always
    least squares.
    """
    if target_part not in spec.parts:
        raise ValidationError(f"target part {target_part!r} is not in the part group")
    if spec.family != "gaussian":
        raise ValidationError("within-composition models are least-squares only")
    rest = tuple(p for p in spec.parts if p != target_part)
    if len(rest) < 2:
        raise ValidationError("within-composition model needs at least 3 parts")
    x0 = data.columns[target_part]
    rest_mat = data.parts_matrix(rest)
    z0 = response_coordinate(x0, rest_mat, spec.scheme)
    cov_mat = _covariate_matrix(data, spec)
    return _pivot_fit_loop(
        rest_mat, rest, z0, spec, cov_mat, target_part, "within_composition"
    )


def fit_naive_raw(data, response, regressor_parts, covariates=(), alpha=0.05):
    """Plain least squares on raw part columns; the comparison baseline.

    Flags the constant-sum pathology when the response is itself a part and
    together with the regressors completes a closed composition, in which
    case the 'perfect' fit is an artifact of the sum constraint.
    """
    for name in (response, *regressor_parts, *covariates):
        if name not in data.columns:
            raise ValidationError(f"column {name!r} not found in dataset")
    cols = [data.columns[p] for p in regressor_parts]
    cols += [data.columns[c] for c in covariates]
    design = design_with_intercept(cols, list(regressor_parts) + list(covariates))
    y = data.columns[response]
    fit = fit_ols(design, y, alpha=alpha)

    pathology = False
    if response in data.parts and set(regressor_parts) == set(data.parts) - {response}:
        totals = y + np.sum(np.column_stack(
            [data.columns[p] for p in regressor_parts]), axis=1)
        mean_total = float(np.mean(totals))
        if mean_total > 0 and float(np.max(np.abs(totals - mean_total))) <= 1e-8 * mean_total:
            pathology = True
    return NaiveFit(fit=fit, constant_sum_pathology=pathology)


def _covariate_matrix(data, spec):
    if not spec.covariates:
        return np.empty((data.n, 0))
    return np.column_stack([data.columns[c] for c in spec.covariates])
