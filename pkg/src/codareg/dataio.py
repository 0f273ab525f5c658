"""Dataset schema, CSV ingestion, validation, and zero handling.

A Dataset is a bag of named float columns with three declared roles: the
ordered compositional part group, numeric covariates, and (optionally) a
response column. Ingestion never closes compositions to a constant sum --
the downstream methods are scale invariant, so rows summing to 7 and to 520
are equally welcome. Zeros in parts are rejected by default; multiplicative
replacement is available as an explicit opt-in because imputation choices
affect inference.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

ZERO_POLICIES = ("reject", "multiplicative")


@dataclass(frozen=True)
class Dataset:
    """Immutable column store with declared column roles."""

    columns: dict
    parts: tuple
    covariates: tuple
    response: str = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "covariates", tuple(self.covariates))
        declared = list(self.parts) + list(self.covariates)
        if self.response is not None:
            declared.append(self.response)
        for name in declared:
            if name not in self.columns:
                raise ValidationError(f"declared column {name!r} is not present")
        if set(self.parts) & set(self.covariates):
            raise ValidationError("a column cannot be both a part and a covariate")
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValidationError("columns have differing lengths")

    @property
    def n(self):
        return len(next(iter(self.columns.values())))

    def parts_matrix(self, parts=None):
        names = self.parts if parts is None else tuple(parts)
        return np.column_stack([self.columns[p] for p in names])

    def covariate_matrix(self):
        if not self.covariates:
            return np.empty((self.n, 0))
        return np.column_stack([self.columns[c] for c in self.covariates])

    def response_vector(self):
        if self.response is None:
            raise ValidationError("dataset has no declared response column")
        return self.columns[self.response]


def load_csv(source, parts, covariates=(), response=None):
    """Read a comma-separated file into a typed Dataset.

    ``source`` is a path or a file-like object. The header must contain every
    declared column (extras are ignored); every declared cell must parse as a
    decimal-point float. Missing values are a hard error, reported with the
    1-based data row and the column name.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("CSV file is empty") from None
    header = [h.strip() for h in header]
    seen = set()
    for h in header:
        if h in seen:
            raise ValidationError(f"duplicate header column {h!r}")
        seen.add(h)

    if set(parts) & set(covariates):
        raise ValidationError("a column cannot be both a part and a covariate")
    declared = list(dict.fromkeys(list(parts) + list(covariates) + ([response] if response else [])))
    missing = [name for name in declared if name not in header]
    if missing:
        raise ValidationError(f"missing columns in CSV header: {', '.join(missing)}")
    idx = {name: header.index(name) for name in declared}

    values = {name: [] for name in declared}
    n = 0
    for row_num, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue
        if len(row) != len(header):
            raise ValidationError(
                f"row {row_num} has {len(row)} cells, header has {len(header)}"
            )
        for name in declared:
            cell = row[idx[name]].strip()
            if cell == "":
                raise ValidationError(f"missing value at row {row_num}, column {name!r}")
            try:
                values[name].append(float(cell))
            except ValueError:
                raise ValidationError(
                    f"cannot parse {cell!r} at row {row_num}, column {name!r}"
                ) from None
        n = row_num
    if n == 0:
        raise ValidationError("CSV file contains a header but no data rows")

    columns = {name: np.asarray(vals, dtype=float) for name, vals in values.items()}
    return Dataset(columns=columns, parts=tuple(parts), covariates=tuple(covariates), response=response)


def validate_composition(data, policy="reject", eps=None):
    """Apply the zero policy to the compositional part group.

    "reject" errors out listing every non-positive cell. "multiplicative"
    replaces each zero with eps times the row total and scales the remaining
    parts of that row down proportionally, preserving the row total exactly
    and the ratios among the originally nonzero parts. Negative parts are
    always fatal.
    """
    if policy not in ZERO_POLICIES:
        raise ValidationError(f"unknown zero policy {policy!r}; expected {ZERO_POLICIES}")
    mat = data.parts_matrix()
    if np.any(~np.isfinite(mat)):
        raise ValidationError("compositional parts contain non-finite values")
    if np.any(mat < 0):
        cells = _cell_list(mat < 0, data.parts)
        raise ValidationError(f"negative compositional parts are not allowed: {cells}")
    zero_mask = mat == 0
    if not zero_mask.any():
        return data
    if policy == "reject":
        cells = _cell_list(zero_mask, data.parts)
        raise ValidationError(
            f"zero compositional parts found (policy 'reject'): {cells}"
        )
    if eps is None or not 0.0 < eps < 0.1:
        raise ValidationError("multiplicative replacement needs eps in (0, 0.1)")
    totals = mat.sum(axis=1)
    n_zero = zero_mask.sum(axis=1)
    if np.any(n_zero * eps >= 1.0):
        raise ValidationError("eps too large for the number of zeros in some row")
    scale = 1.0 - n_zero * eps
    replaced = np.where(zero_mask, eps * totals[:, None], mat * scale[:, None])
    columns = dict(data.columns)
    for j, name in enumerate(data.parts):
        columns[name] = replaced[:, j]
    return Dataset(columns=columns, parts=data.parts, covariates=data.covariates, response=data.response)


def write_csv(columns, names, stream=None):
    """Serialize named columns to CSV text with exact float round-tripping.

    Values are written with repr(), whose shortest-exact form preserves all
    significant digits. Returns the text if no stream is given.
    """
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(names)
    length = len(columns[names[0]])
    for i in range(length):
        writer.writerow([repr(float(columns[name][i])) for name in names])
    if stream is None:
        return out.getvalue()
    return None


def _cell_list(mask, part_names, limit=8):
    rows, cols = np.nonzero(mask)
    cells = [f"(row {r + 1}, {part_names[c]!r})" for r, c in zip(rows, cols)]
    shown = ", ".join(cells[:limit])
    if len(cells) > limit:
        shown += f", ... ({len(cells)} total)"
    return shown
