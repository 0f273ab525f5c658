"""Synthetic compositional datasets with planted regression structure.

Compositions are drawn logistic-normally: coordinate vectors come from a
multivariate normal in pivot-1 coordinate space (the natural distribution
under the logratio methodology), optionally shifted by planted covariate
effects, then mapped back to the simplex and closed to a fixed total.

Randomness is fully deterministic per seed. The source is numpy's Philox
bit generator (a named, counter-based generator with a stable cross-platform
stream), and normal variates are produced from its uniforms by the Marsaglia
polar method -- fixed here so regenerating with the same seed is
byte-identical on any platform. Draw order: covariate columns in declared
order, then the coordinate noise matrix, then response noise.
"""

from dataclasses import dataclass, field

import numpy as np

from .dataio import Dataset
from .errors import ValidationError
from .simplex import CoordinateBlock, from_coordinates, to_coordinates

COVARIATE_KINDS = ("normal", "binary", "signed")


@dataclass(frozen=True)
class ResponseSpec:
    """Optional planted response on top of the generated composition.

    ``coord_effects`` act on the pivot-1 coordinates (in the generator's
    scheme); ``covariate_effects`` act on the named covariate columns.
    """

    name: str = "y"
    family: str = "gaussian"
    intercept: float = 0.0
    coord_effects: tuple = ()
    covariate_effects: dict = field(default_factory=dict)
    noise_sd: float = 1.0


@dataclass(frozen=True)
class GeneratorSpec:
    """Full recipe for one synthetic dataset; the seed determines everything."""

    n: int
    n_parts: int
    seed: int
    mean_coords: tuple = None
    cov_coords: tuple = None
    noise_sd: float = 1.0
    planted_effects: dict = field(default_factory=dict)
    covariates: dict = field(default_factory=dict)
    scheme: str = "orthonormal"
    total: float = 100.0
    response: ResponseSpec = None
    part_names: tuple = None


def _polar_normals(rng, count):
    """Standard normals via the Marsaglia polar method on Philox uniforms."""
    out = np.empty(count)
    filled = 0
    while filled < count:
        need = count - filled
        m = max(need, 64)
        u = rng.uniform(-1.0, 1.0, size=m)
        v = rng.uniform(-1.0, 1.0, size=m)
        s = u * u + v * v
        ok = (s > 0.0) & (s < 1.0)
        factor = np.sqrt(-2.0 * np.log(s[ok]) / s[ok])
        pairs = np.concatenate([u[ok] * factor, v[ok] * factor])
        take = min(len(pairs), need)
        out[filled:filled + take] = pairs[:take]
        filled += take
    return out


def _psd_factor(cov, dim):
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (dim, dim):
        raise ValidationError(f"covariance must be {dim}x{dim}, got {cov.shape}")
    if not np.allclose(cov, cov.T, atol=1e-12):
        raise ValidationError("covariance matrix must be symmetric")
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals.min() < -1e-10 * max(eigvals.max(), 1.0):
        raise ValidationError("covariance matrix is not positive semidefinite")
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def mvn_sample(mean, cov, rng):
    """One multivariate normal draw: mean + L z with L a PSD factor of cov."""
    mean = np.asarray(mean, dtype=float)
    factor = _psd_factor(cov, mean.shape[0])
    z = _polar_normals(rng, mean.shape[0])
    return mean + factor @ z


def generate(spec):
    """Generate a Dataset from a GeneratorSpec.

    Coordinates are mean_coords plus planted covariate effects plus
    noise_sd-scaled multivariate normal noise with covariance cov_coords;
    with noise_sd = 0 and no effects the rows sit exactly at mean_coords.
    """
    if spec.n < 1 or spec.n_parts < 2:
        raise ValidationError("generator needs n >= 1 rows and at least 2 parts")
    if spec.noise_sd < 0:
        raise ValidationError("noise_sd must be nonnegative")
    d = spec.n_parts
    dim = d - 1
    mean = np.zeros(dim) if spec.mean_coords is None else np.asarray(spec.mean_coords, dtype=float)
    if mean.shape != (dim,):
        raise ValidationError(f"mean_coords must have length {dim}")
    cov = np.eye(dim) if spec.cov_coords is None else spec.cov_coords
    factor = _psd_factor(cov, dim)
    for kind in spec.covariates.values():
        if kind not in COVARIATE_KINDS:
            raise ValidationError(f"unknown covariate kind {kind!r}; expected {COVARIATE_KINDS}")
    unknown = set(spec.planted_effects) - set(spec.covariates)
    if unknown:
        raise ValidationError(f"planted effects reference undeclared covariates: {sorted(unknown)}")

    rng = np.random.Generator(np.random.Philox(spec.seed))

    cov_columns = {}
    for name, kind in spec.covariates.items():
        if kind == "normal":
            cov_columns[name] = _polar_normals(rng, spec.n)
        elif kind == "binary":
            cov_columns[name] = (rng.uniform(size=spec.n) < 0.5).astype(float)
        else:
            cov_columns[name] = np.where(rng.uniform(size=spec.n) < 0.5, -1.0, 1.0)

    coords = np.tile(mean, (spec.n, 1))
    for name, effect in spec.planted_effects.items():
        effect = np.asarray(effect, dtype=float)
        if effect.shape != (dim,):
            raise ValidationError(f"planted effect for {name!r} must have length {dim}")
        coords = coords + np.outer(cov_columns[name], effect)
    if spec.noise_sd > 0:
        noise = _polar_normals(rng, spec.n * dim).reshape(spec.n, dim)
        coords = coords + spec.noise_sd * (noise @ factor.T)

    part_names = (
        tuple(f"part{j + 1}" for j in range(d)) if spec.part_names is None else tuple(spec.part_names)
    )
    if len(part_names) != d:
        raise ValidationError("part_names length does not match n_parts")
    block = CoordinateBlock(values=coords, scheme=spec.scheme, pivot=0, part_names=part_names)
    parts = from_coordinates(block, total=spec.total)

    columns = {name: parts[:, j] for j, name in enumerate(part_names)}
    columns.update(cov_columns)

    response = None
    if spec.response is not None:
        r = spec.response
        if r.family not in ("gaussian", "binomial"):
            raise ValidationError(f"unknown response family {r.family!r}")
        eta = np.full(spec.n, float(r.intercept))
        if r.coord_effects:
            eff = np.asarray(r.coord_effects, dtype=float)
            if eff.shape != (dim,):
                raise ValidationError(f"coord_effects must have length {dim}")
            z = to_coordinates(parts, 0, spec.scheme).values
            eta = eta + z @ eff
        for name, coef in r.covariate_effects.items():
            if name not in cov_columns:
                raise ValidationError(f"response effect references undeclared covariate {name!r}")
            eta = eta + coef * cov_columns[name]
        if r.family == "gaussian":
            if r.noise_sd > 0:
                eta = eta + r.noise_sd * _polar_normals(rng, spec.n)
            columns[r.name] = eta
        else:
            prob = 1.0 / (1.0 + np.exp(-eta))
            columns[r.name] = (rng.uniform(size=spec.n) < prob).astype(float)
        response = r.name

    return Dataset(
        columns=columns,
        parts=part_names,
        covariates=tuple(spec.covariates),
        response=response,
    )
