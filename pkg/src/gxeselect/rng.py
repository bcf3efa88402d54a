"""Seedable random generation for every distribution the sampler draws from.

Streams are derived from a master seed by a counter-based scheme: each
(seed, stream_id) pair names an independent Philox sub-stream, so chains and
replicates can run in parallel and still reproduce bit-for-bit.

Parameterizations used throughout the package:

* Gamma(shape, rate): mean shape / rate.
* Inverse-Gamma(shape, scale): the reciprocal of a Gamma(shape, rate=scale)
  draw; mean scale / (shape - 1) for shape > 1.
* Inverse-Gaussian(mu, lam): mean mu, shape lam, density proportional to
  x^{-3/2} exp(-lam (x - mu)^2 / (2 mu^2 x)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import NumericalError

DEFAULT_SEED = 20240811


@dataclass
class RngStream:
    """One independent random stream, owned by a single worker at a time."""

    seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.generator = make_generator(self.seed, self.stream_id)


def make_generator(seed: int, stream_id=0) -> np.random.Generator:
    """Philox generator for sub-stream ``stream_id`` of master ``seed``.

    ``stream_id`` may be an integer or a tuple of integers (e.g. one counter
    per replicate and one per chain).
    """
    key = (stream_id,) if isinstance(stream_id, int) else tuple(stream_id)
    ss = np.random.SeedSequence(seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def sample_mvn(
    mean: np.ndarray,
    mat: np.ndarray,
    mode: str = "covariance",
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Draw from N(mean, Sigma) given Sigma or its inverse.

    In ``precision`` mode ``mat`` is the precision matrix and the draw is
    realized through triangular solves against its Cholesky factor; the
    matrix is never inverted explicitly.
    """
    if mode not in ("covariance", "precision"):
        raise ValueError(f"unknown mode {mode!r}")
    mean = np.asarray(mean, dtype=float)
    mat = np.asarray(mat, dtype=float)
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Cholesky failed in sample_mvn: {exc}") from exc
    z = rng.standard_normal(mean.shape[0])
    if mode == "covariance":
        return mean + chol @ z
    # precision: x = L^{-T} z has covariance (L L^T)^{-1}
    return mean + _solve_upper(chol.T, z)


def _solve_upper(upper: np.ndarray, b: np.ndarray) -> np.ndarray:
    from scipy.linalg import solve_triangular

    return solve_triangular(upper, b, lower=False)


@njit(cache=True)
def _invgauss_one(mu: float, lam: float, rng) -> float:
    # Michael-Schucany-Haas: transform a chi-square draw, then pick the
    # root with the correct probability.  The smaller root is computed in a
    # cancellation-free form.
    nu = rng.standard_normal() ** 2
    mnu = mu * nu
    w = 1.0 - 2.0 * mnu / (mnu + np.sqrt(mnu * (mnu + 4.0 * lam)))
    x1 = mu * w
    if rng.random() <= mu / (mu + x1):
        return x1
    return mu * mu / x1


@njit(cache=True)
def _invgauss_fill(mu: float, lam: float, out: np.ndarray, rng) -> None:
    for i in range(out.shape[0]):
        out[i] = _invgauss_one(mu, lam, rng)


def sample_inverse_gaussian(mu, lam, rng, size: int | None = None):
    """Inverse-Gaussian draws with mean ``mu`` and shape ``lam``."""
    if np.any(np.asarray(mu) <= 0) or np.any(np.asarray(lam) <= 0):
        raise ValueError("inverse-Gaussian parameters must be positive")
    if size is None:
        return _invgauss_one(float(mu), float(lam), rng)
    out = np.empty(size)
    _invgauss_fill(float(mu), float(lam), out, rng)
    return out


def sample_gamma(shape, rate, rng, size: int | None = None):
    """Gamma draws in the shape/rate parameterization (mean shape/rate)."""
    if np.any(np.asarray(shape) <= 0) or np.any(np.asarray(rate) <= 0):
        raise ValueError("gamma parameters must be positive")
    return rng.gamma(shape, 1.0 / rate, size=size)


def sample_inverse_gamma(shape, scale, rng, size: int | None = None):
    """Inverse-Gamma draws (mean scale / (shape - 1) for shape > 1)."""
    if np.any(np.asarray(shape) <= 0) or np.any(np.asarray(scale) <= 0):
        raise ValueError("inverse-gamma parameters must be positive")
    return 1.0 / rng.gamma(shape, 1.0 / scale, size=size)


def sample_beta(a, b, rng, size: int | None = None):
    if np.any(np.asarray(a) <= 0) or np.any(np.asarray(b) <= 0):
        raise ValueError("beta parameters must be positive")
    return rng.beta(a, b, size=size)


def sample_bernoulli(p, rng, size: int | None = None):
    if np.any((np.asarray(p) < 0) | (np.asarray(p) > 1)):
        raise ValueError("bernoulli probability must lie in [0, 1]")
    if size is None:
        return int(rng.random() < p)
    return (rng.random(size) < p).astype(np.int64)
