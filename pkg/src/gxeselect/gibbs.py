"""Exact Gibbs sampler for the five method variants.

Every full conditional has a closed form.  A sweep updates, in order: the
intercept-function coefficients, clinical coefficients, discrete-exposure
main effect; then per gene the constant effect, the varying-part group, the
linear interaction and the three latent scales; then the shrinkage rates,
the inclusion rates (spike variants only) and the noise variance.

Variant differences:

* the structural-identification variants split each gene's coefficient
  function into a constant scalar plus a varying group; the others treat
  the whole basis expansion as one group,
* the spike variants mix every genetic conditional with a point mass at
  zero, so draws are exactly sparse and carry binary inclusion indicators,
* the all-linear variant replaces the basis expansion with the raw
  continuous exposure, giving one slope per gene.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import pandas as pd

from . import _kernels
from .errors import ConfigError, NumericalError
from .model import (
    DesignCache,
    GxEDataset,
    Hyperparameters,
    ModelState,
    Residual,
    assemble_designs,
    initial_state,
    spline_block_for,
)
from .rng import (
    DEFAULT_SEED,
    make_generator,
    sample_beta,
    sample_gamma,
    sample_inverse_gamma,
    sample_mvn,
)
from .splines import SplineConfig, change_of_basis, linear_basis_block, raw_basis_matrix

RESYNC_EVERY = 500


class MethodVariant(Enum):
    """The five sampler variants; values are the CLI / file labels."""

    BSSVC_SI = "BSSVC-SI"
    BSSVC = "BSSVC"
    BVC_SI = "BVC-SI"
    BVC = "BVC"
    BL = "BL"

    @property
    def split(self) -> bool:
        """Constant effect separated from the varying group."""
        return self in (MethodVariant.BSSVC_SI, MethodVariant.BVC_SI, MethodVariant.BL)

    @property
    def spike(self) -> bool:
        """Point mass at zero mixed into the genetic conditionals."""
        return self in (MethodVariant.BSSVC_SI, MethodVariant.BSSVC)

    @property
    def linear(self) -> bool:
        return self is MethodVariant.BL

    @classmethod
    def parse(cls, label: str) -> "MethodVariant":
        key = label.strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            raise ConfigError(f"unknown method variant {label!r}") from None


@dataclass(frozen=True)
class ChainSettings:
    iterations: int = 10_000
    burn_in: int = 5_000
    thin: int = 1
    seed: int = DEFAULT_SEED
    n_chains: int = 3

    def __post_init__(self):
        if self.burn_in >= self.iterations:
            raise ConfigError("burn_in must be smaller than iterations")
        if self.thin < 1 or self.n_chains < 1 or self.burn_in < 0:
            raise ConfigError("thin and n_chains must be >= 1, burn_in >= 0")

    @property
    def n_retained(self) -> int:
        return (self.iterations - self.burn_in) // self.thin


# ---------------------------------------------------------------------------
# full-conditional updates (the compiled kernels do the per-gene work)

def update_eta(state: ModelState, cache: DesignCache, resid: Residual,
               hyper: Hyperparameters, rng) -> None:
    """Draw the intercept-function coefficients from their normal conditional."""
    _dense_normal_update(
        state, cache, resid, rng,
        design=cache.b0, gram=cache.b0tb0,
        prior_var=hyper.prior_var_eta, attr="eta",
    )


def update_alpha(state: ModelState, cache: DesignCache, resid: Residual,
                 hyper: Hyperparameters, rng) -> None:
    if state.alpha.size == 0:
        return
    _dense_normal_update(
        state, cache, resid, rng,
        design=cache.w, gram=cache.wtw,
        prior_var=hyper.prior_var_alpha, attr="alpha",
    )


def _dense_normal_update(state, cache, resid, rng, design, gram, prior_var, attr):
    old = getattr(state, attr)
    v = design.T @ resid.r + gram @ old
    prec = gram / state.sigma2
    prec = prec + np.diag(np.full(old.shape[0], 1.0 / prior_var))
    try:
        mean = np.linalg.solve(prec, v / state.sigma2)
        new = sample_mvn(mean, prec, mode="precision", rng=rng)
    except (np.linalg.LinAlgError, NumericalError) as exc:
        raise NumericalError(f"degenerate conditional for {attr}", block=attr) from exc
    setattr(state, attr, new)
    resid.r -= design @ (new - old)


def update_zeta0(state: ModelState, cache: DesignCache, resid: Residual,
                 hyper: Hyperparameters, rng) -> None:
    old = state.zeta0
    v = cache.e @ resid.r + cache.ete * old
    prec = 1.0 / hyper.prior_var_zeta0 + cache.ete / state.sigma2
    mean = v / state.sigma2 / prec
    new = mean + rng.standard_normal() / np.sqrt(prec)
    state.zeta0 = new
    resid.r -= (new - old) * cache.e


def update_gamma1_j(j: int, state: ModelState, cache: DesignCache, resid: Residual,
                    rng, spike: bool = True) -> None:
    """Constant genetic effect of gene j (split variants)."""
    _kernels.scalar_effect_update(
        j, state.gamma1, state.phi_c, state.tau_c2, resid.r,
        cache.xt[j], cache.xtx[j], state.sigma2, state.pi_c, spike, rng,
    )


def update_gamma_star_j(j: int, state: ModelState, cache: DesignCache, resid: Residual,
                        rng, spike: bool = True) -> None:
    """Varying-part (or whole-basis) coefficient group of gene j."""
    try:
        _kernels.group_effect_update(
            j, state.gamma_star, state.phi_v, state.tau_v2, resid.r,
            cache.ut[j], cache.utu[j], state.sigma2, state.pi_v, spike, rng,
        )
    except Exception as exc:  # numba raises LinAlgError on non-PD
        raise NumericalError("degenerate group conditional", block=("gamma_star", j)) from exc


def update_zeta_j(j: int, state: ModelState, cache: DesignCache, resid: Residual,
                  rng, spike: bool = True) -> None:
    """Linear discrete-exposure interaction of gene j."""
    _kernels.scalar_effect_update(
        j, state.zeta, state.phi_e, state.tau_e2, resid.r,
        cache.tt[j], cache.ttt[j], state.sigma2, state.pi_e, spike, rng,
    )


def update_tau(family: str, j: int, state: ModelState, rng) -> None:
    """Latent scale for one coefficient block of gene j."""
    if family == "c":
        state.tau_c2[j] = _kernels.tau2_update(
            state.gamma1[j] ** 2, state.phi_c[j] == 1, 1.0,
            state.lambda_c2, state.sigma2, rng,
        )
    elif family == "v":
        g = state.gamma_star[j]
        state.tau_v2[j] = _kernels.tau2_update(
            float(g @ g), state.phi_v[j] == 1, float(g.shape[0]),
            state.lambda_v2, state.sigma2, rng,
        )
    elif family == "e":
        state.tau_e2[j] = _kernels.tau2_update(
            state.zeta[j] ** 2, state.phi_e[j] == 1, 1.0,
            state.lambda_e2, state.sigma2, rng,
        )
    else:
        raise KeyError(f"unknown tau family {family!r}")


def lambda2_posterior(family: str, state: ModelState, hyper: Hyperparameters):
    """(shape, rate) of the Gamma conditional for one shrinkage rate."""
    p = state.gamma1.shape[0]
    if family == "v":
        L = state.group_size
        return (
            hyper.a_v + 0.5 * p * (L + 1),
            hyper.b_v + 0.5 * L * float(state.tau_v2.sum()),
        )
    if family == "c":
        return hyper.a_c + p, hyper.b_c + 0.5 * float(state.tau_c2.sum())
    if family == "e":
        return hyper.a_e + p, hyper.b_e + 0.5 * float(state.tau_e2.sum())
    raise KeyError(f"unknown lambda family {family!r}")


def update_lambda(family: str, state: ModelState, hyper: Hyperparameters, rng) -> None:
    shape, rate = lambda2_posterior(family, state, hyper)
    value = float(sample_gamma(shape, rate, rng))
    setattr(state, f"lambda_{family}2", value)


def pi_posterior(family: str, state: ModelState, hyper: Hyperparameters):
    """(a, b) of the Beta conditional: the slab carries the inclusion rate,
    so the first argument counts the nonzero blocks."""
    p = state.gamma1.shape[0]
    counts = {"c": state.phi_c, "v": state.phi_v, "e": state.phi_e}[family]
    k = int(counts.sum())
    r = getattr(hyper, f"r_{family}")
    w = getattr(hyper, f"w_{family}")
    return r + k, w + (p - k)


def update_pi(family: str, state: ModelState, hyper: Hyperparameters, rng) -> None:
    a, b = pi_posterior(family, state, hyper)
    setattr(state, f"pi_{family}", float(sample_beta(a, b, rng)))


def sigma2_posterior(state: ModelState, resid: Residual, hyper: Hyperparameters):
    """(shape, scale) of the inverse-Gamma conditional for the noise variance."""
    n = resid.r.shape[0]
    L = state.group_size
    n_active = (
        int(state.phi_c.sum()) + L * int(state.phi_v.sum()) + int(state.phi_e.sum())
    )
    shape = hyper.s + 0.5 * (n + n_active)
    penalty = float(
        np.sum(state.gamma1**2 / state.tau_c2)
        + np.sum((state.gamma_star**2).sum(axis=1) / state.tau_v2)
        + np.sum(state.zeta**2 / state.tau_e2)
    )
    scale = hyper.h + 0.5 * (float(resid.r @ resid.r) + penalty)
    return shape, scale


def update_sigma2(state: ModelState, resid: Residual, hyper: Hyperparameters, rng) -> None:
    shape, scale = sigma2_posterior(state, resid, hyper)
    state.sigma2 = float(sample_inverse_gamma(shape, max(scale, 1e-300), rng))


def sweep(state: ModelState, cache: DesignCache, resid: Residual,
          hyper: Hyperparameters, variant: MethodVariant, rng) -> None:
    """One full Gibbs sweep in the fixed update order."""
    update_eta(state, cache, resid, hyper, rng)
    update_alpha(state, cache, resid, hyper, rng)
    update_zeta0(state, cache, resid, hyper, rng)
    _kernels.sweep_genes(
        resid.r,
        state.gamma1, state.gamma_star, state.zeta,
        state.phi_c, state.phi_v, state.phi_e,
        state.tau_c2, state.tau_v2, state.tau_e2,
        cache.xt, cache.xtx, cache.ut, cache.utu, cache.tt, cache.ttt,
        state.sigma2, state.pi_c, state.pi_v, state.pi_e,
        state.lambda_c2, state.lambda_v2, state.lambda_e2,
        variant.split, variant.spike,
        rng,
    )
    if variant.split:
        update_lambda("c", state, hyper, rng)
    update_lambda("v", state, hyper, rng)
    update_lambda("e", state, hyper, rng)
    if variant.spike:
        if variant.split:
            update_pi("c", state, hyper, rng)
        update_pi("v", state, hyper, rng)
        update_pi("e", state, hyper, rng)
    update_sigma2(state, resid, hyper, rng)


def slab_probabilities(
    state: ModelState, cache: DesignCache, resid: Residual, family: str
) -> np.ndarray:
    """Diagnostic: the slab probability of every gene's block, one family.

    This is a direct numpy transcription of the conditional mixture weight
    (computed in log space); tests compare the compiled kernels' empirical
    inclusion frequencies against it.
    """
    p = state.gamma1.shape[0]
    out = np.empty(p)
    for j in range(p):
        if family == "v":
            g = state.gamma_star[j]
            v = cache.ut[j] @ resid.r
            if state.phi_v[j]:
                v = v + cache.utu[j] @ g
            L = g.shape[0]
            prec = cache.utu[j] + np.eye(L) / state.tau_v2[j]
            chol = np.linalg.cholesky(prec)
            half = np.linalg.solve(chol, v)
            quad = float(half @ half)
            logdet_prec = 2.0 * float(np.log(np.diag(chol)).sum())
            log_ratio = (
                0.5 * L * np.log(state.tau_v2[j])
                + 0.5 * logdet_prec
                - 0.5 * quad / state.sigma2
            )
            pi = state.pi_v
        else:
            coef, phi, tau2, cols, gram, pi = {
                "c": (state.gamma1, state.phi_c, state.tau_c2, cache.xt, cache.xtx, state.pi_c),
                "e": (state.zeta, state.phi_e, state.tau_e2, cache.tt, cache.ttt, state.pi_e),
            }[family]
            v = float(cols[j] @ resid.r) + (gram[j] * coef[j] if phi[j] else 0.0)
            prec = gram[j] + 1.0 / tau2[j]
            log_ratio = 0.5 * np.log(tau2[j] * prec) - 0.5 * v * v / (state.sigma2 * prec)
        out[j] = _kernels.slab_probability(pi, log_ratio)
    return out


# ---------------------------------------------------------------------------
# chain driver and retained-draw storage

@dataclass
class ChainOutput:
    """Post-burn-in draws of all coefficient blocks and indicators."""

    variant: str
    settings: ChainSettings
    chain_id: int
    spline: SplineConfig | None      # None for the all-linear variant
    domain: tuple[float, float]
    eta: np.ndarray                  # (G, q_n)
    alpha: np.ndarray                # (G, q)
    zeta0: np.ndarray                # (G,)
    gamma1: np.ndarray               # (G, p)
    gamma_star: np.ndarray           # (G, p, L)
    zeta: np.ndarray                 # (G, p)
    sigma2: np.ndarray
    lambda_c2: np.ndarray
    lambda_v2: np.ndarray
    lambda_e2: np.ndarray
    pi_c: np.ndarray
    pi_v: np.ndarray
    pi_e: np.ndarray
    phi_c: np.ndarray                # (G, p) uint8
    phi_v: np.ndarray
    phi_e: np.ndarray
    seconds_total: float
    seconds_per_sweep: float
    resync_drift_max: float

    @property
    def n_retained(self) -> int:
        return self.sigma2.shape[0]

    @property
    def p(self) -> int:
        return self.gamma1.shape[1]

    @property
    def method(self) -> MethodVariant:
        return MethodVariant(self.variant)

    def intercept_basis(self, zgrid: np.ndarray) -> np.ndarray:
        """Basis columns for the intercept function at the given grid."""
        return intercept_basis_columns(self.spline, self.domain, zgrid)

    def group_basis(self, zgrid: np.ndarray) -> np.ndarray:
        """Basis columns matching the per-gene group coefficients."""
        return group_basis_columns(self.spline, self.domain, self.method.split, zgrid)

    def beta_draws(self, j: int, zgrid: np.ndarray) -> np.ndarray:
        """Coefficient-function draws for gene j at the grid, (G, m)."""
        basis = self.group_basis(zgrid)
        return self.gamma1[:, j][:, None] + self.gamma_star[:, j, :] @ basis.T

    def intercept_draws(self, zgrid: np.ndarray) -> np.ndarray:
        return self.eta @ self.intercept_basis(zgrid).T

    # -- persistence ---------------------------------------------------
    def save(self, path) -> None:
        """Columnar binary file (npz) with a JSON metadata record."""
        meta = {
            "variant": self.variant,
            "chain_id": self.chain_id,
            "domain": list(self.domain),
            "spline": None if self.spline is None else {
                "degree": self.spline.degree,
                "interior_knots": self.spline.interior_knots,
                "domain_lo": self.spline.domain_lo,
                "domain_hi": self.spline.domain_hi,
            },
            "settings": {
                "iterations": self.settings.iterations,
                "burn_in": self.settings.burn_in,
                "thin": self.settings.thin,
                "seed": self.settings.seed,
                "n_chains": self.settings.n_chains,
            },
            "seconds_total": self.seconds_total,
            "seconds_per_sweep": self.seconds_per_sweep,
            "resync_drift_max": self.resync_drift_max,
        }
        arrays = {
            name: getattr(self, name)
            for name in (
                "eta", "alpha", "zeta0", "gamma1", "gamma_star", "zeta",
                "sigma2", "lambda_c2", "lambda_v2", "lambda_e2",
                "pi_c", "pi_v", "pi_e", "phi_c", "phi_v", "phi_e",
            )
        }
        np.savez_compressed(path, meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8), **arrays)

    @classmethod
    def load(cls, path) -> "ChainOutput":
        with np.load(path) as data:
            meta = json.loads(bytes(data["meta"]).decode())
            spline = None
            if meta["spline"] is not None:
                spline = SplineConfig(**meta["spline"])
            return cls(
                variant=meta["variant"],
                settings=ChainSettings(**meta["settings"]),
                chain_id=meta["chain_id"],
                spline=spline,
                domain=tuple(meta["domain"]),
                seconds_total=meta["seconds_total"],
                seconds_per_sweep=meta["seconds_per_sweep"],
                resync_drift_max=meta["resync_drift_max"],
                **{
                    name: data[name]
                    for name in (
                        "eta", "alpha", "zeta0", "gamma1", "gamma_star", "zeta",
                        "sigma2", "lambda_c2", "lambda_v2", "lambda_e2",
                        "pi_c", "pi_v", "pi_e", "phi_c", "phi_v", "phi_e",
                    )
                },
            )

    def summary_frame(self) -> pd.DataFrame:
        """Per-parameter median, 2.5%/97.5% quantiles and inclusion rate."""
        rows = []

        def add(name, draws, incl=None):
            lo, med, hi = np.quantile(draws, [0.025, 0.5, 0.975])
            rows.append(
                {"parameter": name, "median": med, "q025": lo, "q975": hi,
                 "inclusion": np.nan if incl is None else incl}
            )

        for k in range(self.eta.shape[1]):
            add(f"eta[{k + 1}]", self.eta[:, k])
        for k in range(self.alpha.shape[1]):
            add(f"alpha[{k + 1}]", self.alpha[:, k])
        add("zeta0", self.zeta0)
        spike = self.method.spike
        for j in range(self.p):
            if self.method.split:
                add(f"gamma1[{j + 1}]", self.gamma1[:, j],
                    self.phi_c[:, j].mean() if spike else None)
            for k in range(self.gamma_star.shape[2]):
                add(f"gamma_star[{j + 1},{k + 1}]", self.gamma_star[:, j, k],
                    self.phi_v[:, j].mean() if spike else None)
            add(f"zeta[{j + 1}]", self.zeta[:, j],
                self.phi_e[:, j].mean() if spike else None)
        for name in ("sigma2", "lambda_c2", "lambda_v2", "lambda_e2"):
            add(name, getattr(self, name))
        if spike:
            for name in ("pi_c", "pi_v", "pi_e"):
                add(name, getattr(self, name))
        return pd.DataFrame(rows)


def intercept_basis_columns(spline, domain, zgrid) -> np.ndarray:
    """Intercept-function basis evaluated on a grid, clamped to the domain."""
    z = np.clip(np.asarray(zgrid, dtype=float), domain[0], domain[1])
    if spline is None:
        return np.column_stack([np.ones_like(z), z])
    return change_of_basis(raw_basis_matrix(spline, z)).columns


def group_basis_columns(spline, domain, split, zgrid) -> np.ndarray:
    """Basis columns matching the per-gene group coefficient layout."""
    cols = intercept_basis_columns(spline, domain, zgrid)
    return cols[:, 1:] if split else cols


def concat_chains(chains: list[ChainOutput]) -> ChainOutput:
    """Pool retained draws of several chains of the same run."""
    first = chains[0]
    merged = {
        name: np.concatenate([getattr(c, name) for c in chains], axis=0)
        for name in (
            "eta", "alpha", "zeta0", "gamma1", "gamma_star", "zeta",
            "sigma2", "lambda_c2", "lambda_v2", "lambda_e2",
            "pi_c", "pi_v", "pi_e", "phi_c", "phi_v", "phi_e",
        )
    }
    return replace(
        first,
        seconds_total=sum(c.seconds_total for c in chains),
        **merged,
    )


def basis_block_for(data: GxEDataset, spline: SplineConfig | None, variant: MethodVariant):
    if variant.linear:
        return linear_basis_block(data.z)
    return spline_block_for(data, spline)


def run_chain(
    variant: MethodVariant,
    data: GxEDataset,
    spline: SplineConfig | None,
    hyper: Hyperparameters,
    settings: ChainSettings,
    chain_id: int = 0,
    cache: DesignCache | None = None,
) -> ChainOutput:
    """Run one Gibbs chain and return the retained draws.

    ``chain_id`` selects the independent random sub-stream, so chains of the
    same seed are reproducible individually and jointly.
    """
    if variant.linear:
        spline = None
    elif spline is None:
        raise ConfigError("spline configuration required for basis-expansion variants")
    if cache is None:
        block = basis_block_for(data, spline, variant)
        cache = assemble_designs(data, block, group_includes_constant=not variant.split)
    domain = (
        (float(np.min(data.z)), float(np.max(data.z)))
        if spline is None
        else (spline.domain_lo, spline.domain_hi)
    )

    rng = make_generator(settings.seed, stream_id=chain_id)
    state = initial_state(
        cache.b0.shape[1], data.q, data.p, cache.group_size,
        var_y=float(np.var(data.y)),
    )
    resid = Residual(data.y, state, cache)

    G = settings.n_retained
    p, L, qn, q = data.p, cache.group_size, cache.b0.shape[1], data.q
    out = {
        "eta": np.empty((G, qn)), "alpha": np.empty((G, q)), "zeta0": np.empty(G),
        "gamma1": np.empty((G, p)), "gamma_star": np.empty((G, p, L)),
        "zeta": np.empty((G, p)), "sigma2": np.empty(G),
        "lambda_c2": np.empty(G), "lambda_v2": np.empty(G), "lambda_e2": np.empty(G),
        "pi_c": np.empty(G), "pi_v": np.empty(G), "pi_e": np.empty(G),
        "phi_c": np.empty((G, p), dtype=np.uint8),
        "phi_v": np.empty((G, p), dtype=np.uint8),
        "phi_e": np.empty((G, p), dtype=np.uint8),
    }

    drift_max = 0.0
    g = 0
    t0 = time.perf_counter()
    for t in range(settings.iterations):
        try:
            sweep(state, cache, resid, hyper, variant, rng)
        except NumericalError as exc:
            raise NumericalError(f"sweep {t}: {exc}", block=exc.block) from exc
        if (t + 1) % RESYNC_EVERY == 0:
            drift_max = max(drift_max, resid.resync(state, cache))
        if t >= settings.burn_in and (t - settings.burn_in) % settings.thin == settings.thin - 1:
            out["eta"][g] = state.eta
            out["alpha"][g] = state.alpha
            out["zeta0"][g] = state.zeta0
            out["gamma1"][g] = state.gamma1
            out["gamma_star"][g] = state.gamma_star
            out["zeta"][g] = state.zeta
            out["sigma2"][g] = state.sigma2
            out["lambda_c2"][g] = state.lambda_c2
            out["lambda_v2"][g] = state.lambda_v2
            out["lambda_e2"][g] = state.lambda_e2
            out["pi_c"][g] = state.pi_c
            out["pi_v"][g] = state.pi_v
            out["pi_e"][g] = state.pi_e
            out["phi_c"][g] = state.phi_c
            out["phi_v"][g] = state.phi_v
            out["phi_e"][g] = state.phi_e
            g += 1
    elapsed = time.perf_counter() - t0

    return ChainOutput(
        variant=variant.value,
        settings=settings,
        chain_id=chain_id,
        spline=spline,
        domain=domain,
        seconds_total=elapsed,
        seconds_per_sweep=elapsed / settings.iterations,
        resync_drift_max=drift_max,
        **out,
    )


# ---------------------------------------------------------------------------
# successive-conditional correctness harness

def geweke_prior_check(
    variant: MethodVariant,
    hyper: Hyperparameters,
    n: int = 15,
    p: int = 3,
    spline: SplineConfig | None = None,
    sweeps: int = 60_000,
    burn_in: int = 2_000,
    thin: int = 20,
    seed: int = DEFAULT_SEED,
) -> dict[str, tuple[float, float]]:
    """Alternate Gibbs updates with re-drawing y from the likelihood.

    If every conditional is correct, the parameter marginals of the
    resulting chain equal the prior.  Returns per-statistic
    (KS statistic, p-value) against direct prior draws.
    """
    from scipy.stats import ks_2samp

    if spline is None and not variant.linear:
        spline = SplineConfig(degree=2, interior_knots=0, domain_lo=0.0, domain_hi=1.0)
    rng = make_generator(seed, stream_id=0)
    prior_rng = make_generator(seed, stream_id=1)

    covariate_rng = make_generator(seed, stream_id=2)
    data = GxEDataset(
        y=np.zeros(n),
        x=covariate_rng.standard_normal((n, p)),
        z=covariate_rng.uniform(0.0, 1.0, n),
        e=(covariate_rng.random(n) < 0.5).astype(float),
        w=covariate_rng.standard_normal((n, 2)),
    )
    block = basis_block_for(data, spline, variant)
    cache = assemble_designs(data, block, group_includes_constant=not variant.split)
    L = cache.group_size
    qn = cache.b0.shape[1]

    state = _prior_state(variant, hyper, qn, data.q, p, L, rng)
    data.y = _draw_response(state, cache, rng)
    resid = Residual(data.y, state, cache)

    kept = []
    for t in range(sweeps):
        data.y = _draw_response(state, cache, rng)
        resid.y = data.y
        resid.resync(state, cache)
        sweep(state, cache, resid, hyper, variant, rng)
        if t >= burn_in and (t - burn_in) % thin == thin - 1:
            kept.append(_stats_vector(state))
    chain = np.array(kept)

    prior = np.array([
        _stats_vector(_prior_state(variant, hyper, qn, data.q, p, L, prior_rng))
        for _ in range(chain.shape[0])
    ])

    results = {}
    for idx, name in enumerate(_STAT_NAMES):
        if not variant.split and name in ("gamma1", "tau_c2", "lambda_c2", "pi_c"):
            continue
        if not variant.spike and name in ("pi_c", "pi_v", "pi_e"):
            continue
        stat, pval = ks_2samp(chain[:, idx], prior[:, idx])
        results[name] = (float(stat), float(pval))
    return results


_STAT_NAMES = (
    "eta1", "alpha1", "zeta0", "gamma1", "gamma_star1", "zeta",
    "tau_c2", "tau_v2", "tau_e2", "lambda_c2", "lambda_v2", "lambda_e2",
    "pi_c", "pi_v", "pi_e", "sigma2",
)


def _stats_vector(state: ModelState) -> list[float]:
    return [
        state.eta[0], state.alpha[0], state.zeta0,
        state.gamma1[0], state.gamma_star[0, 0], state.zeta[0],
        state.tau_c2[0], state.tau_v2[0], state.tau_e2[0],
        state.lambda_c2, state.lambda_v2, state.lambda_e2,
        state.pi_c, state.pi_v, state.pi_e, state.sigma2,
    ]


def _prior_state(variant, hyper, qn, q, p, L, rng) -> ModelState:
    """Exact draw of all parameters from the prior."""
    state = initial_state(qn, q, p, L)
    state.sigma2 = float(sample_inverse_gamma(hyper.s, hyper.h, rng))
    sigma = np.sqrt(state.sigma2)
    state.eta = rng.standard_normal(qn) * np.sqrt(hyper.prior_var_eta)
    state.alpha = rng.standard_normal(q) * np.sqrt(hyper.prior_var_alpha)
    state.zeta0 = float(rng.standard_normal() * np.sqrt(hyper.prior_var_zeta0))
    state.lambda_c2 = float(sample_gamma(hyper.a_c, hyper.b_c, rng))
    state.lambda_v2 = float(sample_gamma(hyper.a_v, hyper.b_v, rng))
    state.lambda_e2 = float(sample_gamma(hyper.a_e, hyper.b_e, rng))
    state.pi_c = float(sample_beta(hyper.r_c, hyper.w_c, rng)) if variant.spike else 1.0
    state.pi_v = float(sample_beta(hyper.r_v, hyper.w_v, rng)) if variant.spike else 1.0
    state.pi_e = float(sample_beta(hyper.r_e, hyper.w_e, rng)) if variant.spike else 1.0
    for j in range(p):
        state.tau_c2[j] = sample_gamma(1.0, 0.5 * state.lambda_c2, rng)
        state.tau_v2[j] = sample_gamma(0.5 * (L + 1), 0.5 * L * state.lambda_v2, rng)
        state.tau_e2[j] = sample_gamma(1.0, 0.5 * state.lambda_e2, rng)
        if variant.split and rng.random() < state.pi_c:
            state.gamma1[j] = sigma * np.sqrt(state.tau_c2[j]) * rng.standard_normal()
            state.phi_c[j] = 1
        if rng.random() < state.pi_v:
            state.gamma_star[j] = sigma * np.sqrt(state.tau_v2[j]) * rng.standard_normal(L)
            state.phi_v[j] = 1
        if rng.random() < state.pi_e:
            state.zeta[j] = sigma * np.sqrt(state.tau_e2[j]) * rng.standard_normal()
            state.phi_e[j] = 1
    return state


def _draw_response(state: ModelState, cache: DesignCache, rng) -> np.ndarray:
    from .model import assemble_mean

    mu = assemble_mean(state, cache)
    return mu + np.sqrt(state.sigma2) * rng.standard_normal(mu.shape[0])
