"""Dataset container, hyperparameters, sampler state and design caching.

The regression mean decomposes into an intercept-function block, clinical
covariates, the discrete-exposure main effect, and three per-gene blocks
(constant genetic effect, varying-part interaction with the continuous
exposure, linear interaction with the discrete exposure).  A running
residual r = y - mean is maintained incrementally across block updates and
re-synchronized periodically to bound float drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np
import pandas as pd

from .errors import ConfigError, DataError
from .splines import BasisBlock, SplineConfig, change_of_basis, raw_basis_matrix


@dataclass
class GxEDataset:
    """Response, genetic matrix, exposures and clinical covariates."""

    y: np.ndarray  # (n,)
    x: np.ndarray  # (n, p) genetic factors
    z: np.ndarray  # (n,) continuous environment factor
    e: np.ndarray  # (n,) discrete environment factor, coded real
    w: np.ndarray  # (n, q) clinical covariates

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.z = np.asarray(self.z, dtype=float)
        self.e = np.asarray(self.e, dtype=float)
        self.w = np.asarray(self.w, dtype=float)
        if self.x.ndim != 2 or self.w.ndim != 2:
            raise DataError("x and w must be 2-D")
        n = self.y.shape[0]
        if not (self.x.shape[0] == self.z.shape[0] == self.e.shape[0] == self.w.shape[0] == n):
            raise DataError("row counts of y, x, z, e, w disagree")
        if self.x.shape[1] < 0 or n == 0:
            raise DataError("empty dataset")
        for name in ("y", "x", "z", "e", "w"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise DataError(f"non-finite values in {name}")

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    @property
    def q(self) -> int:
        return self.w.shape[1]


@dataclass(frozen=True)
class Hyperparameters:
    """Prior hyperparameters; all default to the weakly informative choices."""

    a_v: float = 1.0
    b_v: float = 1.0
    a_c: float = 1.0
    b_c: float = 1.0
    a_e: float = 1.0
    b_e: float = 1.0
    r_v: float = 1.0
    w_v: float = 1.0
    r_c: float = 1.0
    w_c: float = 1.0
    r_e: float = 1.0
    w_e: float = 1.0
    s: float = 1.0
    h: float = 1.0
    prior_var_eta: float = 1e4
    prior_var_alpha: float = 1e4
    prior_var_zeta0: float = 1e4

    def __post_init__(self):
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name in ("s", "h"):
                if val < 0:
                    raise ConfigError(f"{f.name} must be non-negative")
            elif val <= 0:
                raise ConfigError(f"{f.name} must be strictly positive")


@dataclass
class ModelState:
    """All sampled parameters at one MCMC iteration.

    ``gamma_star`` rows hold the group coefficients; their width is the
    group size (q_n - 1 with the constant/varying split, q_n without it,
    1 for the all-linear variant).  Zero blocks are exact zeros, mirrored in
    the phi indicators.
    """

    eta: np.ndarray
    alpha: np.ndarray
    zeta0: float
    gamma1: np.ndarray       # (p,)
    gamma_star: np.ndarray   # (p, L)
    zeta: np.ndarray         # (p,)
    tau_c2: np.ndarray
    tau_v2: np.ndarray
    tau_e2: np.ndarray
    lambda_c2: float
    lambda_v2: float
    lambda_e2: float
    pi_c: float
    pi_v: float
    pi_e: float
    sigma2: float
    phi_c: np.ndarray
    phi_v: np.ndarray
    phi_e: np.ndarray

    @property
    def group_size(self) -> int:
        return self.gamma_star.shape[1]

    def check_consistency(self) -> None:
        """Indicator/coefficient consistency and positivity invariants."""
        if not (
            np.array_equal(self.phi_c, (self.gamma1 != 0).astype(self.phi_c.dtype))
            and np.array_equal(
                self.phi_v, (np.abs(self.gamma_star).sum(axis=1) != 0).astype(self.phi_v.dtype)
            )
            and np.array_equal(self.phi_e, (self.zeta != 0).astype(self.phi_e.dtype))
        ):
            raise AssertionError("indicator/coefficient consistency violated")
        if not (
            np.all(self.tau_c2 > 0)
            and np.all(self.tau_v2 > 0)
            and np.all(self.tau_e2 > 0)
            and self.sigma2 > 0
            and min(self.lambda_c2, self.lambda_v2, self.lambda_e2) > 0
        ):
            raise AssertionError("scale parameters must stay positive")


def initial_state(
    n_basis: int, q: int, p: int, group_size: int, var_y: float = 1.0
) -> ModelState:
    """Neutral starting point: all coefficient blocks at zero."""
    return ModelState(
        eta=np.zeros(n_basis),
        alpha=np.zeros(q),
        zeta0=0.0,
        gamma1=np.zeros(p),
        gamma_star=np.zeros((p, group_size)),
        zeta=np.zeros(p),
        tau_c2=np.ones(p),
        tau_v2=np.ones(p),
        tau_e2=np.ones(p),
        lambda_c2=1.0,
        lambda_v2=1.0,
        lambda_e2=1.0,
        pi_c=0.5,
        pi_v=0.5,
        pi_e=0.5,
        sigma2=max(var_y, 1e-8),
        phi_c=np.zeros(p, dtype=np.int8),
        phi_v=np.zeros(p, dtype=np.int8),
        phi_e=np.zeros(p, dtype=np.int8),
    )


@dataclass
class DesignCache:
    """Immutable design blocks and Gram quantities, shared across chains.

    ``ut`` stores each gene's interaction block transposed and contiguous,
    (p, L, n), so the per-gene matvec against the residual is a single BLAS
    call.  ``t`` holds the discrete-exposure interaction columns x_j * e.
    """

    b0: np.ndarray                 # (n, q_n) intercept basis, first column ones
    xt: np.ndarray                 # (p, n) gene columns, transposed
    ut: np.ndarray                 # (p, L, n)
    tt: np.ndarray                 # (p, n) x_j * e columns, transposed
    w: np.ndarray                  # (n, q)
    e: np.ndarray                  # (n,)
    b0tb0: np.ndarray              # (q_n, q_n)
    wtw: np.ndarray                # (q, q)
    ete: float
    xtx: np.ndarray                # (p,)
    utu: np.ndarray                # (p, L, L)
    ttt: np.ndarray                # (p,)
    block: BasisBlock = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.b0.shape[0]

    @property
    def p(self) -> int:
        return self.xt.shape[0]

    @property
    def group_size(self) -> int:
        return self.ut.shape[1]


def assemble_designs(
    data: GxEDataset,
    block: BasisBlock,
    group_includes_constant: bool = False,
) -> DesignCache:
    """Precompute all design blocks and Gram matrices for one dataset.

    ``block`` is the evaluated basis at the observed z (first column ones).
    With ``group_includes_constant`` the per-gene group block keeps the
    constant basis column, i.e. the gene's entire coefficient function is
    treated as one group.
    """
    n, p = data.n, data.p
    if block.columns.shape[0] != n:
        raise DataError("basis block and dataset row counts disagree")
    basis_cols = block.columns if group_includes_constant else block.varying
    L = basis_cols.shape[1]
    ut = np.empty((p, L, n))
    for j in range(p):
        ut[j] = basis_cols.T * data.x[:, j]
    t_cols = data.x * data.e[:, None]

    utu = np.einsum("jln,jmn->jlm", ut, ut)
    return DesignCache(
        b0=np.ascontiguousarray(block.columns),
        xt=np.ascontiguousarray(data.x.T),
        ut=ut,
        tt=np.ascontiguousarray(t_cols.T),
        w=data.w,
        e=data.e,
        b0tb0=block.columns.T @ block.columns,
        wtw=data.w.T @ data.w,
        ete=float(data.e @ data.e),
        xtx=np.einsum("ij,ij->j", data.x, data.x),
        utu=utu,
        ttt=np.einsum("ij,ij->j", t_cols, t_cols),
        block=block,
    )


def spline_block_for(data: GxEDataset, cfg: SplineConfig) -> BasisBlock:
    """Evaluate the shared spline basis at the observed z, post change of basis."""
    return change_of_basis(raw_basis_matrix(cfg, data.z))


def assemble_mean(state: ModelState, cache: DesignCache) -> np.ndarray:
    """Full model mean rebuilt from scratch (the slow, authoritative path)."""
    mu = cache.b0 @ state.eta
    if state.alpha.size:
        mu = mu + cache.w @ state.alpha
    mu = mu + state.zeta0 * cache.e
    active_c = np.flatnonzero(state.gamma1)
    for j in active_c:
        mu = mu + state.gamma1[j] * cache.xt[j]
    active_v = np.flatnonzero(np.abs(state.gamma_star).sum(axis=1))
    for j in active_v:
        mu = mu + cache.ut[j].T @ state.gamma_star[j]
    active_e = np.flatnonzero(state.zeta)
    for j in active_e:
        mu = mu + state.zeta[j] * cache.tt[j]
    return mu


class Residual:
    """Running residual r = y - mean with periodic full re-synchronization."""

    def __init__(self, y: np.ndarray, state: ModelState, cache: DesignCache):
        self.y = y
        self.r = y - assemble_mean(state, cache)

    def resync(self, state: ModelState, cache: DesignCache) -> float:
        """Recompute r from scratch; returns the drift that had accumulated."""
        fresh = self.y - assemble_mean(state, cache)
        drift = float(np.abs(self.r - fresh).max()) if self.r.size else 0.0
        self.r = fresh
        return drift


_BLOCK_IDS = ("eta", "alpha", "zeta0", "gamma1", "gamma_star", "zeta")


def residual_exclude(
    block_id: str,
    state: ModelState,
    cache: DesignCache,
    r: np.ndarray,
    j: int | None = None,
) -> np.ndarray:
    """Partial residual y - mean_without(block): r plus the block's own term.

    ``r`` itself is left untouched.  Per-gene blocks take the gene index
    ``j``; blocks currently at zero return a copy of r unchanged.
    """
    if block_id not in _BLOCK_IDS:
        raise KeyError(f"unknown block {block_id!r}")
    if block_id == "eta":
        return r + cache.b0 @ state.eta
    if block_id == "alpha":
        return r + cache.w @ state.alpha if state.alpha.size else r.copy()
    if block_id == "zeta0":
        return r + state.zeta0 * cache.e
    if j is None:
        raise KeyError(f"block {block_id!r} needs a gene index")
    if block_id == "gamma1":
        return r + state.gamma1[j] * cache.xt[j] if state.gamma1[j] != 0 else r.copy()
    if block_id == "gamma_star":
        g = state.gamma_star[j]
        return r + cache.ut[j].T @ g if np.any(g) else r.copy()
    return r + state.zeta[j] * cache.tt[j] if state.zeta[j] != 0 else r.copy()


def log_likelihood(state: ModelState, data: GxEDataset, cache: DesignCache) -> float:
    """Gaussian log density of y under the current state."""
    if state.sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    r = data.y - assemble_mean(state, cache)
    return float(
        -0.5 * data.n * np.log(2.0 * np.pi * state.sigma2) - 0.5 * (r @ r) / state.sigma2
    )


# ---------------------------------------------------------------------------
# dataset CSV schema: header row y, z, e, w1..wq, x1..xp (UTF-8)

def write_dataset_csv(data: GxEDataset, path) -> None:
    cols = {"y": data.y, "z": data.z, "e": data.e}
    for k in range(data.q):
        cols[f"w{k + 1}"] = data.w[:, k]
    for j in range(data.p):
        cols[f"x{j + 1}"] = data.x[:, j]
    # %.17g keeps the round trip bit-exact
    pd.DataFrame(cols).to_csv(path, index=False, float_format="%.17g")


def read_dataset_csv(path) -> GxEDataset:
    try:
        df = pd.read_csv(path, float_precision="round_trip")
    except Exception as exc:
        raise DataError(f"cannot parse dataset CSV {path}: {exc}") from exc
    for required in ("y", "z", "e"):
        if required not in df.columns:
            raise DataError(f"dataset CSV missing column {required!r}")
    w_names = sorted(
        (c for c in df.columns if c.startswith("w") and c[1:].isdigit()),
        key=lambda c: int(c[1:]),
    )
    x_names = sorted(
        (c for c in df.columns if c.startswith("x") and c[1:].isdigit()),
        key=lambda c: int(c[1:]),
    )
    if not x_names:
        raise DataError("dataset CSV has no genetic columns x1..xp")
    w = df[w_names].to_numpy(float) if w_names else np.empty((len(df), 0))
    try:
        return GxEDataset(
            y=df["y"].to_numpy(float),
            x=df[x_names].to_numpy(float),
            z=df["z"].to_numpy(float),
            e=df["e"].to_numpy(float),
            w=w,
        )
    except ValueError as exc:
        raise DataError(str(exc)) from exc
