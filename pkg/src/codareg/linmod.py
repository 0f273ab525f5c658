"""Ordinary least squares with full frequentist inference for one design/response pair.

The solve goes through a Cholesky factorization of X'X guarded by an exact
reciprocal-condition estimate (smallest over largest eigenvalue). Rank
deficiency is reported as a CollinearityError naming the columns implicated
by the null-space eigenvector, which is how the perfect-collinearity trap of
closed compositional covariates surfaces to the user.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import CollinearityError, InsufficientDataError, ValidationError
from .statdist import f_sf, student_t_crit, student_t_sf2

RCOND_LIMIT = 1e-12


@dataclass(frozen=True)
class DesignMatrix:
    """Named n x p design matrix; column 0 is expected to be the intercept."""

    names: tuple
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValidationError("design values must be a 2-D matrix")
        if len(self.names) != v.shape[1]:
            raise ValidationError("design column names do not match matrix width")
        if len(set(self.names)) != len(self.names):
            raise ValidationError("design column names must be unique")
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]


def design_with_intercept(columns, names, n_rows=None, intercept_name="(Intercept)"):
    """Stack named columns behind a leading column of ones.

    ``n_rows`` is only needed for an intercept-only design (no columns).
    """
    if not columns and n_rows is None:
        raise ValidationError("intercept-only design needs an explicit row count")
    n = len(columns[0]) if columns else n_rows
    cols = [np.ones(n)] + [np.asarray(c, dtype=float) for c in columns]
    return DesignMatrix(names=(intercept_name, *names), values=np.column_stack(cols))


@dataclass(frozen=True)
class FitSummary:
    """Coefficients and inference for a single least-squares fit."""

    names: tuple
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    sigma2_hat: float
    cov_matrix: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    r_squared: float
    adj_r_squared: float
    f_stat: float
    f_pvalue: float
    df_residual: int
    conf_intervals: np.ndarray = field(repr=False)
    alpha: float = 0.05


def _rank_check(design):
    g = design.values.T @ design.values
    eigvals, eigvecs = np.linalg.eigh(g)
    if eigvals[-1] <= 0:
        raise CollinearityError("design matrix is entirely degenerate", design.names)
    rcond = max(eigvals[0], 0.0) / eigvals[-1]
    if not rcond > RCOND_LIMIT:
        v = np.abs(eigvecs[:, 0])
        involved = [design.names[j] for j in np.flatnonzero(v >= 0.1 * v.max())]
        raise CollinearityError(
            "design matrix is collinear (reciprocal condition "
            f"{rcond:.2e} <= {RCOND_LIMIT}); columns involved: {', '.join(involved)}",
            involved,
        )
    return g


def fit_ols(design, y, alpha=0.05):
    """Fit y = X beta + eps by least squares and return a full FitSummary.

    Standard errors, two-sided t tests on n-p degrees of freedom, the overall
    F test of all non-intercept coefficients, and (1-alpha) confidence
    intervals are all computed from the same Cholesky factorization.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] != design.n:
        raise ValidationError("response length does not match design rows")
    if not np.all(np.isfinite(y)):
        raise ValidationError("response contains non-finite values")
    n, p = design.n, design.p
    if n <= p:
        raise InsufficientDataError(
            f"need more observations than parameters (n={n}, p={p})"
        )
    g = _rank_check(design)
    x = design.values
    chol = np.linalg.cholesky(g)
    xty = x.T @ y
    beta = np.linalg.solve(chol.T, np.linalg.solve(chol, xty))
    fitted = x @ beta
    resid = y - fitted
    rss = float(resid @ resid)
    df = n - p
    sigma2 = rss / df
    linv = np.linalg.solve(chol, np.eye(p))
    g_inv = linv.T @ linv
    cov = sigma2 * g_inv
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    with np.errstate(divide="ignore", invalid="ignore"):
        t_vals = np.where(se > 0, beta / np.where(se > 0, se, 1.0), 0.0)
    t_vals = np.where((se == 0) & (beta != 0), np.sign(beta) * np.inf, t_vals)
    p_vals = np.array([student_t_sf2(t, df) for t in t_vals])

    ybar = y.mean()
    tss = float((y - ybar) @ (y - ybar))
    if tss > 0.0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss == 0.0 else 0.0
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / df

    q = p - 1
    if q >= 1:
        explained = max(tss - rss, 0.0)
        if rss > 0.0:
            f_stat = (explained / q) / (rss / df)
        else:
            f_stat = np.inf if explained > 0 else 0.0
        f_pvalue = f_sf(f_stat, q, df)
    else:
        f_stat = np.nan
        f_pvalue = np.nan

    tcrit = student_t_crit(alpha, df)
    ci = np.column_stack([beta - tcrit * se, beta + tcrit * se])

    return FitSummary(
        names=design.names,
        coefficients=beta,
        std_errors=se,
        t_values=t_vals,
        p_values=p_vals,
        sigma2_hat=sigma2,
        cov_matrix=cov,
        residuals=resid,
        fitted=fitted,
        r_squared=r2,
        adj_r_squared=adj_r2,
        f_stat=float(f_stat),
        f_pvalue=float(f_pvalue),
        df_residual=df,
        conf_intervals=ci,
        alpha=alpha,
    )


def predict(fit, design):
    """Fitted values X beta-hat for a design with the same named columns."""
    if tuple(design.names) != tuple(fit.names):
        raise ValidationError(
            f"design columns {design.names} do not match fit columns {fit.names}"
        )
    return design.values @ fit.coefficients
