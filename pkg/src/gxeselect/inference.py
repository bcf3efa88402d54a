"""Posterior summaries: selection rules, curve reconstruction, diagnostics.

Two selection rules are provided.  The median-probability rule keeps a block
when its posterior inclusion probability is at least one half (spike
variants, whose draws carry exact zeros).  The credible-interval rule keeps
a block when an equal-tailed 95% interval of at least one of its
coefficients excludes zero (pure-shrinkage variants, whose draws are never
exactly zero).  Point estimates are coordinate-wise posterior medians
throughout; quantiles are the linear-interpolation (type 7) convention.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import ConfigError, DataError
from .gibbs import ChainOutput, group_basis_columns, intercept_basis_columns

PSRF_THRESHOLD = 1.1


@dataclass
class CurveGrid:
    z: np.ndarray
    median: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"z": self.z, "median": self.median, "lo95": self.lo, "hi95": self.hi}
        )


@dataclass
class SelectionReport:
    """Per-gene classification with supporting posterior summaries."""

    variant: str
    rule: str                             # "mpm" or "ci"
    threshold: float                      # MPM cut or CI level
    selected_varying: np.ndarray          # (p,) bool
    selected_constant: np.ndarray
    selected_linear_e: np.ndarray
    p_varying: np.ndarray | None          # inclusion probabilities (MPM only)
    p_constant: np.ndarray | None
    p_linear_e: np.ndarray | None
    gamma1_median: np.ndarray
    zeta_median: np.ndarray
    curves: dict[int, CurveGrid] = field(default_factory=dict)
    intercept_curve: CurveGrid | None = None

    def frame(self) -> pd.DataFrame:
        p = self.selected_varying.shape[0]
        nan = np.full(p, np.nan)
        return pd.DataFrame(
            {
                "gene": np.arange(1, p + 1),
                "p_varying": nan if self.p_varying is None else self.p_varying,
                "p_constant": nan if self.p_constant is None else self.p_constant,
                "p_linear_e": nan if self.p_linear_e is None else self.p_linear_e,
                "selected_varying": self.selected_varying,
                "selected_constant": self.selected_constant,
                "selected_linear_e": self.selected_linear_e,
                "gamma1_median": self.gamma1_median,
                "zeta_median": self.zeta_median,
            }
        )


def inclusion_probabilities(chain: ChainOutput) -> dict[str, np.ndarray]:
    """Mean of the binary inclusion indicators over retained draws."""
    if chain.n_retained == 0:
        raise DataError("chain holds no retained draws")
    return {
        "varying": chain.phi_v.mean(axis=0),
        "constant": chain.phi_c.mean(axis=0),
        "linear_e": chain.phi_e.mean(axis=0),
    }


def posterior_median_report(chain: ChainOutput):
    gamma1_med = np.median(chain.gamma1, axis=0)
    zeta_med = np.median(chain.zeta, axis=0)
    return gamma1_med, zeta_med


def mpm_select(
    chain: ChainOutput,
    threshold: float = 0.5,
    grid: np.ndarray | None = None,
    curve_genes: str = "selected",
) -> SelectionReport:
    """Median-probability selection: keep blocks with inclusion >= threshold."""
    probs = inclusion_probabilities(chain)
    method = chain.method
    sel_v = probs["varying"] >= threshold
    sel_c = (probs["constant"] >= threshold) if method.split else np.zeros(chain.p, bool)
    sel_e = probs["linear_e"] >= threshold
    gamma1_med, zeta_med = posterior_median_report(chain)
    report = SelectionReport(
        variant=chain.variant,
        rule="mpm",
        threshold=threshold,
        selected_varying=sel_v,
        selected_constant=sel_c,
        selected_linear_e=sel_e,
        p_varying=probs["varying"],
        p_constant=probs["constant"] if method.split else None,
        p_linear_e=probs["linear_e"],
        gamma1_median=gamma1_med,
        zeta_median=zeta_med,
    )
    _attach_curves(report, chain, grid, curve_genes)
    return report


def ci_select(
    chain: ChainOutput,
    level: float = 0.95,
    grid: np.ndarray | None = None,
    curve_genes: str = "selected",
) -> SelectionReport:
    """Credible-interval selection for the pure-shrinkage variants.

    A varying effect enters when any of its group-coefficient equal-tailed
    intervals excludes zero; scalar effects when their own interval does.
    """
    lo_q, hi_q = 0.5 * (1 - level), 1 - 0.5 * (1 - level)

    def excludes_zero(draws: np.ndarray) -> np.ndarray:
        lo = np.quantile(draws, lo_q, axis=0)
        hi = np.quantile(draws, hi_q, axis=0)
        return (lo > 0) | (hi < 0)

    sel_v = excludes_zero(chain.gamma_star).any(axis=1)
    sel_c = excludes_zero(chain.gamma1) if chain.method.split else np.zeros(chain.p, bool)
    sel_e = excludes_zero(chain.zeta)
    gamma1_med, zeta_med = posterior_median_report(chain)
    report = SelectionReport(
        variant=chain.variant,
        rule="ci",
        threshold=level,
        selected_varying=sel_v,
        selected_constant=sel_c,
        selected_linear_e=sel_e,
        p_varying=None,
        p_constant=None,
        p_linear_e=None,
        gamma1_median=gamma1_med,
        zeta_median=zeta_med,
    )
    _attach_curves(report, chain, grid, curve_genes)
    return report


def select(chain: ChainOutput, grid: np.ndarray | None = None, **kwargs) -> SelectionReport:
    """Variant-appropriate rule: median-probability when draws carry exact
    zeros, credible intervals otherwise."""
    if chain.method.spike:
        return mpm_select(chain, grid=grid, **kwargs)
    return ci_select(chain, grid=grid, **kwargs)


def _attach_curves(report, chain, grid, curve_genes) -> None:
    if grid is None:
        return
    grid = np.asarray(grid, dtype=float)
    report.intercept_curve = _curve(chain.intercept_draws(grid), grid)
    if curve_genes == "selected":
        genes = np.flatnonzero(report.selected_varying)
    elif curve_genes == "all":
        genes = np.arange(chain.p)
    else:
        genes = np.asarray(curve_genes, dtype=int)
    for j in genes:
        report.curves[int(j)] = reconstruct_beta(chain, int(j), grid)


def _curve(draws: np.ndarray, grid: np.ndarray) -> CurveGrid:
    lo, med, hi = np.quantile(draws, [0.025, 0.5, 0.975], axis=0)
    return CurveGrid(z=grid, median=med, lo=lo, hi=hi)


def reconstruct_beta(chain: ChainOutput, j: int, grid: np.ndarray) -> CurveGrid:
    """Pointwise median and 95% band of gene j's coefficient function."""
    grid = np.asarray(grid, dtype=float)
    if grid.min() < chain.domain[0] or grid.max() > chain.domain[1]:
        warnings.warn("curve grid extends beyond the fitted domain; clamping")
    return _curve(chain.beta_draws(j, grid), grid)


# ---------------------------------------------------------------------------
# point estimates and prediction

@dataclass
class PointEstimates:
    """Coordinate-wise posterior medians plus what is needed to predict."""

    variant: str
    split: bool
    spline: object
    domain: tuple[float, float]
    eta: np.ndarray
    alpha: np.ndarray
    zeta0: float
    gamma1: np.ndarray
    gamma_star: np.ndarray
    zeta: np.ndarray
    sigma2: float

    @classmethod
    def from_chain(cls, chain: ChainOutput) -> "PointEstimates":
        return cls(
            variant=chain.variant,
            split=chain.method.split,
            spline=chain.spline,
            domain=chain.domain,
            eta=np.median(chain.eta, axis=0),
            alpha=np.median(chain.alpha, axis=0),
            zeta0=float(np.median(chain.zeta0)),
            gamma1=np.median(chain.gamma1, axis=0),
            gamma_star=np.median(chain.gamma_star, axis=0),
            zeta=np.median(chain.zeta, axis=0),
            sigma2=float(np.median(chain.sigma2)),
        )

    def intercept_curve(self, zgrid: np.ndarray) -> np.ndarray:
        return intercept_basis_columns(self.spline, self.domain, zgrid) @ self.eta

    def beta_curve(self, j: int, zgrid: np.ndarray) -> np.ndarray:
        basis = group_basis_columns(self.spline, self.domain, self.split, zgrid)
        return self.gamma1[j] + basis @ self.gamma_star[j]

    def predict(self, data) -> np.ndarray:
        """Model mean at new observations (z clamped to the fitted domain)."""
        z = np.asarray(data.z, dtype=float)
        if z.min() < self.domain[0] or z.max() > self.domain[1]:
            warnings.warn("prediction points outside fitted domain; clamping")
        icols = intercept_basis_columns(self.spline, self.domain, z)
        gcols = group_basis_columns(self.spline, self.domain, self.split, z)
        beta = self.gamma1[None, :] + gcols @ self.gamma_star.T   # (n, p)
        mu = icols @ self.eta
        if self.alpha.size:
            mu = mu + data.w @ self.alpha
        mu = mu + self.zeta0 * data.e
        mu = mu + np.einsum("np,np->n", beta, data.x)
        mu = mu + (data.x * data.e[:, None]) @ self.zeta
        return mu


# ---------------------------------------------------------------------------
# convergence diagnostic

@dataclass
class PsrfReport:
    names: list[str]
    values: np.ndarray
    gated: np.ndarray            # bool mask of parameters the gate applies to
    max_gated: float
    converged: bool
    threshold: float = PSRF_THRESHOLD

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"parameter": self.names, "psrf": self.values, "gated": self.gated}
        )


def psrf_values(stacked: np.ndarray) -> np.ndarray:
    """Potential scale reduction factor per parameter.

    ``stacked`` is (n_chains, G, k).  Identical chains give
    sqrt((G - 1) / G); parameters constant in every chain give exactly 1.
    """
    m, G, _ = stacked.shape
    if m < 2:
        raise ConfigError("PSRF needs at least 2 chains")
    if G < 10:
        raise ConfigError("PSRF needs at least 10 retained draws per chain")
    within = stacked.var(axis=1, ddof=1).mean(axis=0)
    chain_means = stacked.mean(axis=1)
    between_over_g = chain_means.var(axis=0, ddof=1)
    vhat = (G - 1) / G * within + between_over_g
    out = np.empty(within.shape)
    zero_w = within == 0
    out[~zero_w] = np.sqrt(vhat[~zero_w] / within[~zero_w])
    out[zero_w] = np.where(between_over_g[zero_w] == 0, 1.0, np.inf)
    return out


def psrf(chains: list[ChainOutput], threshold: float = PSRF_THRESHOLD) -> PsrfReport:
    """Gelman-Rubin diagnostic over all stored scalar parameters.

    The convergence gate applies to the always-continuous parameters plus
    the coefficient chains of blocks that the pooled draws select; point-mass
    mixtures of unselected blocks are reported but not gated.
    """
    if len(chains) < 2:
        raise ConfigError("PSRF needs at least 2 chains")
    G = min(c.n_retained for c in chains)
    method = chains[0].method
    names: list[str] = []
    gated: list[bool] = []
    columns: list[np.ndarray] = []

    pooled_v = np.mean([c.phi_v.mean(axis=0) for c in chains], axis=0)
    pooled_c = np.mean([c.phi_c.mean(axis=0) for c in chains], axis=0)
    pooled_e = np.mean([c.phi_e.mean(axis=0) for c in chains], axis=0)
    active_v = pooled_v >= 0.5 if method.spike else np.ones(chains[0].p, bool)
    active_c = pooled_c >= 0.5 if method.spike else np.ones(chains[0].p, bool)
    active_e = pooled_e >= 0.5 if method.spike else np.ones(chains[0].p, bool)

    def add(name, arrs, gate):
        names.append(name)
        gated.append(gate)
        columns.append(np.stack([a[:G] for a in arrs]))

    for k in range(chains[0].eta.shape[1]):
        add(f"eta[{k + 1}]", [c.eta[:, k] for c in chains], True)
    for k in range(chains[0].alpha.shape[1]):
        add(f"alpha[{k + 1}]", [c.alpha[:, k] for c in chains], True)
    add("zeta0", [c.zeta0 for c in chains], True)
    add("sigma2", [c.sigma2 for c in chains], True)
    add("lambda_v2", [c.lambda_v2 for c in chains], True)
    add("lambda_e2", [c.lambda_e2 for c in chains], True)
    if method.split:
        add("lambda_c2", [c.lambda_c2 for c in chains], True)
    if method.spike:
        add("pi_v", [c.pi_v for c in chains], True)
        add("pi_e", [c.pi_e for c in chains], True)
        if method.split:
            add("pi_c", [c.pi_c for c in chains], True)
    for j in range(chains[0].p):
        if method.split:
            add(f"gamma1[{j + 1}]", [c.gamma1[:, j] for c in chains], bool(active_c[j]))
        for k in range(chains[0].gamma_star.shape[2]):
            add(
                f"gamma_star[{j + 1},{k + 1}]",
                [c.gamma_star[:, j, k] for c in chains],
                bool(active_v[j]),
            )
        add(f"zeta[{j + 1}]", [c.zeta[:, j] for c in chains], bool(active_e[j]))

    stacked = np.stack(columns, axis=-1)  # (m, G, k)
    values = psrf_values(stacked)
    gated_arr = np.array(gated)
    max_gated = float(values[gated_arr].max()) if gated_arr.any() else float("nan")
    return PsrfReport(
        names=names,
        values=values,
        gated=gated_arr,
        max_gated=max_gated,
        converged=bool(max_gated <= threshold),
        threshold=threshold,
    )
