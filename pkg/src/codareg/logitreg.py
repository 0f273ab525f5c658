"""Binomial (logit) regression via Fisher scoring, with deviance/AIC/Wald inference.

Fisher scoring for the logit link is iteratively reweighted least squares
with weights mu(1-mu). Iteration starts at beta = 0, halves the step (up to
10 times) whenever the deviance would increase, and stops when the relative
deviance change drops to 1e-10 or the score norm to 1e-8. Weights are clipped
at 1e-10 so the weighted normal equations stay solvable near fitted
probabilities of 0 or 1, and any |eta| > 30 is treated as quasi-separation
(logistic(30) is 1 to double precision).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    CollinearityError,
    ConvergenceError,
    InsufficientDataError,
    SeparationError,
    ValidationError,
)
from .linmod import _rank_check
from .statdist import normal_sf2

MAX_ITER = 25
MAX_HALVINGS = 10
DEV_TOL = 1e-10
SCORE_TOL = 1e-8
ETA_LIMIT = 30.0
WEIGHT_FLOOR = 1e-10


@dataclass(frozen=True)
class GlmSummary:
    """Coefficients and inference for one converged logit fit."""

    names: tuple
    coefficients: np.ndarray
    std_errors: np.ndarray
    z_values: np.ndarray
    p_values: np.ndarray
    null_deviance: float
    residual_deviance: float
    aic: float
    df_null: int
    df_residual: int
    iterations: int
    converged: bool
    cov_matrix: np.ndarray
    fitted: np.ndarray


def _expit(eta):
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    e = np.exp(eta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _deviance(y, eta):
    # -2 log-likelihood for 0/1 responses; logaddexp keeps it stable at
    # extreme linear predictors.
    return 2.0 * float(np.sum(np.logaddexp(0.0, (1.0 - 2.0 * y) * eta)))


def _solve_spd(a, rhs):
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise CollinearityError(
            "weighted normal equations are singular; design is collinear"
        ) from exc
    return np.linalg.solve(chol.T, np.linalg.solve(chol, rhs))


def fit_logit(design, y):
    """Maximize the Bernoulli log-likelihood with logit link by Fisher scoring."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] != design.n:
        raise ValidationError("response length does not match design rows")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValidationError("binomial response must contain only 0 and 1")
    n, p = design.n, design.p
    if n <= p:
        raise InsufficientDataError(
            f"need more observations than parameters (n={n}, p={p})"
        )
    n_success = float(y.sum())
    if n_success == 0.0 or n_success == n:
        raise ValidationError("binomial response has a single class; nothing to fit")
    _rank_check(design)

    x = design.values
    beta = np.zeros(p)
    eta = np.zeros(n)
    dev = _deviance(y, eta)
    iterations = 0
    converged = False

    for _ in range(MAX_ITER):
        mu = _expit(eta)
        score = x.T @ (y - mu)
        w = np.clip(mu * (1.0 - mu), WEIGHT_FLOOR, None)
        info = (x * w[:, None]).T @ x
        step = _solve_spd(info, score)

        new_beta = beta + step
        new_eta = x @ new_beta
        new_dev = _deviance(y, new_eta)
        halvings = 0
        while new_dev > dev and halvings < MAX_HALVINGS:
            step *= 0.5
            new_beta = beta + step
            new_eta = x @ new_beta
            new_dev = _deviance(y, new_eta)
            halvings += 1

        beta, eta = new_beta, new_eta
        iterations += 1
        if np.any(np.abs(eta) > ETA_LIMIT):
            raise SeparationError(
                "quasi-separation detected: fitted linear predictor exceeds "
                f"{ETA_LIMIT} in absolute value"
            )
        score_norm = float(np.max(np.abs(x.T @ (y - _expit(eta)))))
        rel_change = abs(dev - new_dev) / (0.1 + abs(new_dev))
        dev = new_dev
        if rel_change <= DEV_TOL or score_norm <= SCORE_TOL:
            converged = True
            break

    if not converged:
        raise ConvergenceError(
            f"Fisher scoring did not converge in {MAX_ITER} iterations",
            last_iterate=beta,
            iterations=iterations,
        )

    mu = _expit(eta)
    w = mu * (1.0 - mu)
    info = (x * w[:, None]).T @ x
    cov = _solve_spd(info, np.eye(p))
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, beta / np.where(se > 0, se, 1.0), 0.0)
    p_vals = np.array([normal_sf2(v) for v in z])

    pbar = n_success / n
    null_dev = -2.0 * (
        n_success * np.log(pbar) + (n - n_success) * np.log(1.0 - pbar)
    )

    return GlmSummary(
        names=design.names,
        coefficients=beta,
        std_errors=se,
        z_values=z,
        p_values=p_vals,
        null_deviance=float(null_dev),
        residual_deviance=float(dev),
        aic=float(dev + 2.0 * p),
        df_null=n - 1,
        df_residual=n - p,
        iterations=iterations,
        converged=True,
        cov_matrix=cov,
        fitted=mu,
    )


def predict_prob(fit, design):
    """Fitted probabilities logistic(X beta-hat) for a matching design."""
    if tuple(design.names) != tuple(fit.names):
        raise ValidationError(
            f"design columns {design.names} do not match fit columns {fit.names}"
        )
    return _expit(design.values @ fit.coefficients)
