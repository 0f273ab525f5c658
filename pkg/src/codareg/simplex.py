"""Aitchison-simplex primitives and pivot logratio coordinate systems.

A composition is a vector of D strictly positive parts carrying only relative
information: rescaling a whole row changes nothing downstream. Two coordinate
schemes are supported, both "pivot" systems in which the first coordinate
collects all relative information about one chosen part:

``orthonormal``
    z_i = sqrt((D-i)/(D-i+1)) * ln( x_i / gmean(x_{i+1}, ..., x_D) )
    for i = 1..D-1, computed on the permutation that moves the pivot part to
    the front and keeps the remaining parts in their original order. Rows of
    the generating logcontrast matrix are orthonormal.

``orthogonal``
    Same logratios but in base-2 logs with the normalizing constants dropped,
    so a unit increment of a coordinate means the part's relative dominance
    (its ratio to the geometric mean of the other parts) doubles. Rows of the
    generating matrix are orthogonal but not unit length.

All functions are pure; arrays are never modified in place.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SCHEMES = ("orthonormal", "orthogonal")

_LN2 = math.log(2.0)


def _check_scheme(scheme):
    if scheme not in SCHEMES:
        raise ValidationError(
            f"unknown coordinate scheme {scheme!r}; expected one of {SCHEMES}"
        )


def _as_parts_matrix(data, min_parts=2):
    """Coerce to a 2-D float array of strictly positive parts."""
    x = np.atleast_2d(np.asarray(data, dtype=float))
    if x.ndim != 2:
        raise ValidationError("compositional data must be a vector or a matrix")
    if x.shape[1] < min_parts:
        raise ValidationError(f"need at least {min_parts} parts, got {x.shape[1]}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("compositional data contains non-finite values")
    if np.any(x <= 0):
        bad = np.argwhere(x <= 0)
        cells = ", ".join(f"(row {r + 1}, part {c + 1})" for r, c in bad[:5])
        raise ValidationError(
            f"compositional parts must be strictly positive; offending cells: {cells}"
        )
    return x


def pivot_order(pivot, n_parts):
    """Permutation placing part ``pivot`` (0-based) first, the rest in original order."""
    if not 0 <= pivot < n_parts:
        raise ValidationError(f"pivot index {pivot} out of range for {n_parts} parts")
    return [pivot] + [j for j in range(n_parts) if j != pivot]


@dataclass(frozen=True)
class CoordinateBlock:
    """Pivot coordinates of n compositions plus the metadata needed to invert them.

    ``values`` is n x (D-1); column 0 is the sole carrier of all relative
    information about the pivot part.
    """

    values: np.ndarray
    scheme: str
    pivot: int
    part_names: tuple

    @property
    def n_parts(self):
        return len(self.part_names)

    @property
    def pivot_part(self):
        return self.part_names[self.pivot]

    def coordinate_names(self):
        order = pivot_order(self.pivot, self.n_parts)
        return [f"z{i + 1}_{self.part_names[order[i]]}" for i in range(self.n_parts - 1)]


def closure(data, total=1.0):
    """Rescale each composition so its parts sum to ``total``.

    Ratios between parts are untouched; the constant sum is a representation
    convenience, not information.
    """
    if not total > 0:
        raise ValidationError(f"closure total must be positive, got {total}")
    x = _as_parts_matrix(data)
    out = x * (total / x.sum(axis=1, keepdims=True))
    return out[0] if np.ndim(data) == 1 else out


def geometric_mean(values):
    """Geometric mean of strictly positive values, via the mean of logs."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValidationError("geometric mean of an empty collection is undefined")
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise ValidationError("geometric mean requires strictly positive finite values")
    return float(np.exp(np.mean(np.log(v))))


def _norm_constants(n_parts, scheme):
    # Multipliers applied to ln(x_i / gmean(rest)) per coordinate.
    i = np.arange(1, n_parts)
    if scheme == "orthonormal":
        return np.sqrt((n_parts - i) / (n_parts - i + 1.0))
    return np.full(n_parts - 1, 1.0 / _LN2)


def to_coordinates(data, pivot, scheme, part_names=None):
    """Transform compositions to pivot coordinates.

    Parameters
    ----------
    data : array_like
        n x D matrix (or a single composition) of strictly positive parts.
    pivot : int
        0-based index of the part whose relative information goes into
        coordinate 1.
    scheme : str
        "orthonormal" or "orthogonal".
    part_names : sequence of str, optional
        Labels stored on the block; defaults to part1..partD.

    Returns
    -------
    CoordinateBlock
        With an n x (D-1) ``values`` matrix.
    """
    _check_scheme(scheme)
    x = _as_parts_matrix(data)
    n, d = x.shape
    order = pivot_order(pivot, d)
    logs = np.log(x[:, order])
    # suffix_sum[:, i] = sum of logs[:, i:]
    suffix_sum = np.cumsum(logs[:, ::-1], axis=1)[:, ::-1]
    tail_counts = np.arange(d - 1, 0, -1, dtype=float)
    tail_means = suffix_sum[:, 1:] / tail_counts
    raw = logs[:, :-1] - tail_means
    values = raw * _norm_constants(d, scheme)
    if part_names is None:
        part_names = tuple(f"part{j + 1}" for j in range(d))
    else:
        part_names = tuple(part_names)
        if len(part_names) != d:
            raise ValidationError("part_names length does not match number of parts")
    return CoordinateBlock(values=values, scheme=scheme, pivot=pivot, part_names=part_names)


def from_coordinates(block, total=1.0):
    """Invert a CoordinateBlock back to compositions closed to ``total``."""
    _check_scheme(block.scheme)
    z = np.atleast_2d(np.asarray(block.values, dtype=float))
    n, m = z.shape
    d = m + 1
    if block.n_parts != d:
        raise ValidationError("coordinate block width does not match its part names")
    raw = z / _norm_constants(d, block.scheme)
    # Rebuild permuted logs from the back: the last log is pinned at 0 and
    # each earlier one is its raw logratio plus the mean of the logs after it.
    logs = np.zeros((n, d))
    tail_sum = np.zeros(n)
    for i in range(d - 2, -1, -1):
        logs[:, i] = raw[:, i] + tail_sum / (d - 1 - i)
        tail_sum += logs[:, i]
    order = pivot_order(block.pivot, d)
    out = np.empty_like(logs)
    out[:, order] = np.exp(logs)
    return closure(out, total)


def response_coordinate(x0, data, scheme):
    """Coordinate carrying the relative information of an extra part ``x0``.

    ``x0`` and the D explanatory parts jointly form a (D+1)-part composition
    row-wise; the result is orthogonal (in the clr sense) to the pivot
    coordinates of the explanatory parts, so it can serve as a regression
    response within the composition.
    """
    _check_scheme(scheme)
    x = _as_parts_matrix(data)
    v = np.asarray(x0, dtype=float)
    if v.ndim != 1 or v.shape[0] != x.shape[0]:
        raise ValidationError("x0 must be a column with one value per row of data")
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise ValidationError("x0 must be strictly positive and finite")
    d = x.shape[1]
    ratio = np.log(v) - np.mean(np.log(x), axis=1)
    if scheme == "orthonormal":
        return math.sqrt(d / (d + 1.0)) * ratio
    return ratio / _LN2


def contrast_matrix(pivot, scheme, n_parts):
    """Logcontrast coefficients generating each coordinate.

    Row i holds zero-sum coefficients c such that coordinate i equals
    c . log(x), with the log taken in the scheme's base (natural for
    orthonormal, base 2 for orthogonal). Rows are pairwise orthogonal;
    orthonormal rows additionally have unit Euclidean norm.
    """
    _check_scheme(scheme)
    if n_parts < 2:
        raise ValidationError("contrast matrix needs at least 2 parts")
    order = pivot_order(pivot, n_parts)
    consts = (
        np.sqrt((n_parts - np.arange(1, n_parts)) / (n_parts - np.arange(1, n_parts) + 1.0))
        if scheme == "orthonormal"
        else np.ones(n_parts - 1)
    )
    m = np.zeros((n_parts - 1, n_parts))
    for i in range(n_parts - 1):
        tail = n_parts - 1 - i
        m[i, order[i]] = consts[i]
        for j in order[i + 1:]:
            m[i, j] = -consts[i] / tail
    return m


def variation_matrix(data):
    """Matrix of sample variances of all pairwise logratios.

    Entry (i, j) is var(ln(x_i/x_j)) over the rows (ddof=1). Small entries
    mark nearly proportional parts; the matrix is symmetric with a zero
    diagonal and is invariant to per-row rescaling and to closure.
    """
    x = _as_parts_matrix(data)
    n, d = x.shape
    if n < 2:
        raise ValidationError("variation matrix needs at least 2 rows")
    logs = np.log(x)
    out = np.zeros((d, d))
    for i in range(d):
        for j in range(i + 1, d):
            v = float(np.var(logs[:, i] - logs[:, j], ddof=1))
            out[i, j] = v
            out[j, i] = v
    return out
