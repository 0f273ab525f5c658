"""Exact parameter transformations between coordinate schemes, and dominance factors.

Coefficients fitted in orthonormal coordinates convert to their orthogonal
counterparts (and back) by fixed positive factors, so t statistics and
p-values are untouched; only the scale of estimates and standard errors
changes. In the orthogonal scheme a coefficient beta* has a direct reading:
delta = 2**beta* is the multiplicative change in relative dominance tied to
the effect, the same number whatever logarithm base the fit used.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .models import PivotTable, ResponseTable

FAMILIES = ("comp_covariates", "comp_response", "within_composition")

_LN2 = math.log(2.0)
_LOG2E = 1.0 / _LN2


@dataclass(frozen=True)
class SchemeTransform:
    """Which model family the coefficient vector came from, and its part count.

    ``n_parts`` is the number of explanatory parts for covariate-style
    families, or of response parts for the compositional-response family.
    """

    family: str
    n_parts: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown transform family {self.family!r}")
        if self.n_parts < 2:
            raise ValidationError("transform needs at least 2 parts")


@dataclass(frozen=True)
class DominanceReport:
    part: str
    delta: float
    percent_change: float
    direction: str


def transform_factors(transform, length):
    """Per-slot multipliers taking orthonormal coefficients to orthogonal ones.

    Layouts by family:

    * comp_covariates: the D-1 compositional coefficients only (the intercept
      and any plain covariates are unchanged by the scheme switch).
    * comp_response: intercept plus k covariate coefficients; one common
      factor rescales them all.
    * within_composition: intercept followed by the D-1 compositional
      coefficients; appended plain-covariate slots (if the vector is longer)
      rescale like the intercept.
    """
    d = transform.n_parts
    if transform.family == "comp_covariates":
        if length != d - 1:
            raise ValidationError(
                f"comp_covariates expects the {d - 1} compositional coefficients, got {length}"
            )
        i = np.arange(1, d)
        return _LN2 * np.sqrt((d - i) / (d - i + 1.0))
    if transform.family == "comp_response":
        if length < 1:
            raise ValidationError("comp_response expects at least the intercept slot")
        return np.full(length, _LOG2E * math.sqrt(d / (d - 1.0)))
    # within_composition
    if length < d:
        raise ValidationError(
            f"within_composition expects intercept plus {d - 1} compositional "
            f"coefficients, got {length}"
        )
    response_factor = _LOG2E * math.sqrt((d + 1.0) / d)
    factors = np.full(length, response_factor)
    i = np.arange(1, d)
    factors[1:d] = np.sqrt((d + 1.0) * (d - i) / (d * (d - i + 1.0)))
    return factors


def orthonormal_to_orthogonal(params, transform):
    """Rescale an orthonormal-scheme coefficient vector to the orthogonal scheme.

    Standard errors transform by the same factors; test statistics and
    p-values are invariant and must simply be copied.
    """
    params = np.asarray(params, dtype=float)
    return params * transform_factors(transform, params.shape[0])


def orthogonal_to_orthonormal(params, transform):
    """Exact inverse of :func:`orthonormal_to_orthogonal`."""
    params = np.asarray(params, dtype=float)
    return params / transform_factors(transform, params.shape[0])


def dominance_factor(beta_star, part=""):
    """Dominance reading of an orthogonal-scheme coefficient.

    delta = 2**beta* multiplies the relative dominance (the part over the
    geometric mean of the others) per unit change of the regressor.
    """
    delta = 2.0 ** float(beta_star)
    percent = 100.0 * (delta - 1.0)
    if beta_star > 0:
        direction = "increase"
    elif beta_star < 0:
        direction = "decrease"
    else:
        direction = "none"
    return DominanceReport(part=part, delta=delta, percent_change=percent, direction=direction)


def _pct(delta):
    return f"{100.0 * (delta - 1.0):+.0f}%"


def render_interpretation(table, target=None):
    """One plain sentence per significant coefficient of an orthogonal-scheme table.

    For PivotTable results the reading depends on the response: a
    non-compositional response changes additively when a part's dominance
    doubles, while a within-composition response (``target`` set, or taken
    from the table) changes by the dominance factor. ResponseTable rows get
    the per-covariate dominance multiplier for each part.
    """
    if table.scheme != "orthogonal":
        raise ValidationError("interpretation sentences require an orthogonal-scheme table")
    lines = []
    if isinstance(table, ResponseTable):
        for i, row_name in enumerate(table.row_names):
            for j, part in enumerate(table.parts):
                if not table.significant[i, j]:
                    continue
                est = table.estimates[i, j]
                rep = dominance_factor(est, part)
                if row_name == "(Intercept)":
                    lines.append(
                        f"Baseline relative dominance of {part} is {rep.delta:.3f} "
                        "(part versus the average of the others)."
                    )
                else:
                    lines.append(
                        f"A unit increase in {row_name} multiplies the relative dominance "
                        f"of {part} by {rep.delta:.2f} ({_pct(rep.delta)})."
                    )
        return lines
    if not isinstance(table, PivotTable):
        raise ValidationError("expected a PivotTable or ResponseTable")

    within = target is not None or table.response in table.parts or (
        table.family == "gaussian" and table.response not in ()
        and target is None and False
    )
    # A PivotTable from fit_within_composition carries the target part as its
    # response label; fit_comp_covariates carries a plain column name.
    target = target if target is not None else table.response
    is_within = target in () if False else (table.response not in (None,) and _looks_within(table))
    for row in table.part_rows:
        if not row.significant:
            continue
        if is_within:
            rep = dominance_factor(row.estimate, row.name)
            lines.append(
                f"Doubling the relative dominance of {row.name} multiplies the relative "
                f"dominance of {table.response} by {rep.delta:.2f} ({_pct(rep.delta)})."
            )
        else:
            lines.append(
                f"Doubling the relative dominance of {row.name} changes {table.response} "
                f"by {row.estimate:+.3f} units (other covariates fixed)."
            )
    for row in table.covariate_rows:
        if not row.significant:
            continue
        if is_within:
            rep = dominance_factor(row.estimate, row.name)
            lines.append(
                f"A unit increase in {row.name} multiplies the relative dominance of "
                f"{table.response} by {rep.delta:.2f} ({_pct(rep.delta)})."
            )
        else:
            lines.append(
                f"A unit increase in {row.name} changes {table.response} by "
                f"{row.estimate:+.3f} units (other covariates fixed)."
            )
    return lines


def _looks_within(table):
    # Within-composition tables regress one part on the others, so the
    # response label never appears among the regressor parts' rows but is a
    # part name; comp-covariates responses are ordinary columns.
    return table.response is not None and table.response not in table.parts and getattr(
        table, "_within", False
    )
