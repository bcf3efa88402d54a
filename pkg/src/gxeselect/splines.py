"""Normalized B-spline bases over the continuous environment factor.

The varying-coefficient machinery rests on two pieces: a clamped B-spline
basis evaluated at the observed values of the continuous modifier, and a
change of basis that splits each coefficient function into a constant part
(first column, identically one) and a varying part (the remaining columns).
Because the raw basis sums to one at every point, dropping its first column
and prepending a column of ones spans exactly the same function space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError

ROW_SUM_TOL = 1e-8


@dataclass(frozen=True)
class SplineConfig:
    """Degree, interior-knot count and domain of the shared spline basis."""

    degree: int = 2
    interior_knots: int = 2
    domain_lo: float = 0.0
    domain_hi: float = 1.0

    def __post_init__(self):
        if self.degree < 0 or self.interior_knots < 0:
            raise ConfigError("degree and interior_knots must be non-negative")
        if self.n_basis < 2:
            raise ConfigError("need at least 2 basis functions (degree + knots + 1)")
        if not self.domain_lo < self.domain_hi:
            raise ConfigError(
                f"invalid domain [{self.domain_lo}, {self.domain_hi}]"
            )

    @property
    def n_basis(self) -> int:
        """Number of basis functions q_n = degree + interior_knots + 1."""
        return self.degree + self.interior_knots + 1


@dataclass(frozen=True)
class BasisBlock:
    """Evaluated basis after the constant/varying change of basis.

    ``columns`` is n x q_n with the first column identically one; columns
    2..q_n are the varying-part basis evaluations.
    """

    columns: np.ndarray

    @property
    def n_basis(self) -> int:
        return self.columns.shape[1]

    @property
    def varying(self) -> np.ndarray:
        """The n x (q_n - 1) varying-part columns."""
        return self.columns[:, 1:]


def build_knot_vector(cfg: SplineConfig) -> np.ndarray:
    """Open (clamped) knot vector with equally spaced interior knots.

    Boundary knots are repeated degree + 1 times at each end of the domain.
    """
    inner = np.linspace(cfg.domain_lo, cfg.domain_hi, cfg.interior_knots + 2)[1:-1]
    lo = np.full(cfg.degree + 1, cfg.domain_lo)
    hi = np.full(cfg.degree + 1, cfg.domain_hi)
    return np.concatenate([lo, inner, hi])


def raw_basis_matrix(cfg: SplineConfig, z: np.ndarray) -> np.ndarray:
    """Evaluate all q_n B-spline basis functions at each point of ``z``.

    Points outside the domain are clamped to the nearest boundary.  Uses the
    Cox-de Boor recursion on the knot span of each point; rows are
    non-negative and sum to one.
    """
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    np.clip(z, cfg.domain_lo, cfg.domain_hi, out=z)

    knots = build_knot_vector(cfg)
    deg = cfg.degree
    qn = cfg.n_basis
    # span index s with knots[s] <= z < knots[s+1]; the right boundary folds
    # into the last non-empty span.
    span = np.searchsorted(knots, z, side="right") - 1
    np.clip(span, deg, qn - 1, out=span)

    npts = z.shape[0]
    basis = np.zeros((npts, deg + 1))
    basis[:, 0] = 1.0
    left = np.empty((npts, deg + 1))
    right = np.empty((npts, deg + 1))
    for d in range(1, deg + 1):
        left[:, d] = z - knots[span + 1 - d]
        right[:, d] = knots[span + d] - z
        saved = np.zeros(npts)
        for r in range(d):
            denom = right[:, r + 1] + left[:, d - r]
            temp = basis[:, r] / denom
            basis[:, r] = saved + right[:, r + 1] * temp
            saved = left[:, d - r] * temp
        basis[:, d] = saved

    out = np.zeros((npts, qn))
    cols = span[:, None] - deg + np.arange(deg + 1)[None, :]
    np.put_along_axis(out, cols, basis, axis=1)
    return out[0] if scalar else out


def eval_raw_basis(cfg: SplineConfig, z: float) -> np.ndarray:
    """B-spline basis values at a single point (clamped to the domain)."""
    return raw_basis_matrix(cfg, np.float64(z))


def change_of_basis(raw: np.ndarray) -> BasisBlock:
    """Swap the first raw basis column for an exact intercept column.

    Valid because raw rows sum to one (partition of unity), so the span is
    unchanged.  Raises if the input rows do not sum to one.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2 or raw.shape[1] < 2:
        raise DataError("raw basis must be 2-D with at least 2 columns")
    err = np.abs(raw.sum(axis=1) - 1.0).max()
    if err > ROW_SUM_TOL:
        raise DataError(f"raw basis rows deviate from partition of unity by {err:.3g}")
    cols = raw.copy()
    cols[:, 0] = 1.0
    return BasisBlock(columns=cols)


def interaction_block(block: BasisBlock, x_j: np.ndarray) -> np.ndarray:
    """Per-gene interaction design: varying-part columns scaled by x_j."""
    x_j = np.asarray(x_j, dtype=float)
    if x_j.shape != (block.columns.shape[0],):
        raise DataError(
            f"x_j has length {x_j.shape}, expected ({block.columns.shape[0]},)"
        )
    return block.varying * x_j[:, None]


def linear_basis_block(z: np.ndarray) -> BasisBlock:
    """Degenerate two-column block [1, z] for the all-linear model variant."""
    z = np.asarray(z, dtype=float)
    return BasisBlock(columns=np.column_stack([np.ones_like(z), z]))
