"""Benchmark data generators with known ground-truth coefficients.

Four designs share one coefficient configuration and differ only in how the
genetic matrix arises: correlated continuous expressions, expressions
trichotomized into genotype codes, genotypes chained under pairwise linkage
disequilibrium, and genotypes subsampled from a user-supplied file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd

from .errors import ConfigError, DataError
from .model import GxEDataset

# named coefficient functions, reusable for truth serialization
CURVES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sine2pi": lambda z: 2.0 * np.sin(2.0 * np.pi * z),
    "exp_growth": lambda z: 2.0 * np.exp(2.0 * z - 1.0),
    "parabola": lambda z: -6.0 * z * (1.0 - z),
    "neg_cubic": lambda z: -4.0 * z**3,
    "zero": lambda z: np.zeros_like(z),
}


@dataclass(frozen=True)
class TruthSpec:
    """Generating coefficients: evaluable at any z in [0, 1].

    Gene indices are 0-based.  Genes absent from ``varying`` and
    ``constants`` have zero coefficient functions; genes absent from
    ``zeta`` have no discrete-exposure interaction.
    """

    p: int
    intercept: str = "sine2pi"
    varying: dict[int, str] = field(
        default_factory=lambda: {0: "exp_growth", 1: "parabola", 2: "neg_cubic"}
    )
    constants: dict[int, float] = field(
        default_factory=lambda: {3: 0.5, 4: 0.8, 5: -1.2, 6: 0.7, 7: -1.1}
    )
    alpha: tuple[float, ...] = (-0.5, 1.0)
    zeta0: float = 1.5
    zeta: dict[int, float] = field(
        default_factory=lambda: {0: 0.6, 1: 1.5, 2: -1.3, 3: 1.0, 4: -0.8}
    )
    noise_sd: float = 1.0

    def __post_init__(self):
        named = set(self.varying) | set(self.constants) | set(self.zeta)
        if named and (min(named) < 0 or max(named) >= self.p):
            raise ConfigError("truth references a gene outside 0..p-1")
        if set(self.varying) & set(self.constants):
            raise ConfigError("a gene cannot be both varying and constant")

    def intercept_at(self, z) -> np.ndarray:
        return CURVES[self.intercept](np.asarray(z, dtype=float))

    def beta(self, j: int, z) -> np.ndarray:
        """Coefficient function of gene j evaluated at z."""
        z = np.asarray(z, dtype=float)
        if j in self.varying:
            return CURVES[self.varying[j]](z)
        return np.full_like(z, self.constants.get(j, 0.0))

    def zeta_vector(self) -> np.ndarray:
        out = np.zeros(self.p)
        for j, v in self.zeta.items():
            out[j] = v
        return out

    def mean(self, x: np.ndarray, z: np.ndarray, e: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Model mean for given covariates."""
        mu = self.intercept_at(z)
        for j in self.varying:
            mu = mu + self.beta(j, z) * x[:, j]
        for j, c in self.constants.items():
            mu = mu + c * x[:, j]
        mu = mu + w @ np.asarray(self.alpha)
        mu = mu + self.zeta0 * e
        mu = mu + (x * e[:, None]) @ self.zeta_vector()
        return mu


def standard_truth(p: int, noise_sd: float = 1.0) -> TruthSpec:
    """The benchmark coefficient configuration, trimmed to the genes present."""
    base = TruthSpec.__dataclass_fields__
    varying = {j: n for j, n in base["varying"].default_factory().items() if j < p}
    constants = {j: v for j, v in base["constants"].default_factory().items() if j < p}
    zeta = {j: v for j, v in base["zeta"].default_factory().items() if j < p}
    return TruthSpec(
        p=p, varying=varying, constants=constants, zeta=zeta, noise_sd=noise_sd
    )


def _attach_environment(x: np.ndarray, truth: TruthSpec, rng, e_prob: float):
    """Draw z, e, w and the response for a given genetic matrix."""
    n = x.shape[0]
    z = rng.uniform(0.0, 1.0, n)
    e = (rng.random(n) < e_prob).astype(float)
    w1 = rng.standard_normal(n)
    w2 = 0.5 * w1 + np.sqrt(0.75) * rng.standard_normal(n)
    w = np.column_stack([w1, w2])
    y = truth.mean(x, z, e, w) + truth.noise_sd * rng.standard_normal(n)
    return GxEDataset(y=y, x=x, z=z, e=e, w=w), truth


def _ar_expressions(n: int, p: int, rho: float, rng) -> np.ndarray:
    """Zero-mean unit-variance matrix with corr(j, k) = rho^|j-k|."""
    x = np.empty((n, p))
    x[:, 0] = rng.standard_normal(n)
    scale = np.sqrt(1.0 - rho * rho)
    for j in range(1, p):
        x[:, j] = rho * x[:, j - 1] + scale * rng.standard_normal(n)
    return x


def gen_example1(
    n: int = 500, p: int = 100, rho: float = 0.5, rng=None,
    noise_sd: float = 1.0, e_prob: float = 0.5,
):
    """Correlated gene-expression design."""
    if n < 1 or p < 1 or not abs(rho) < 1:
        raise ConfigError("need n, p >= 1 and |rho| < 1")
    truth = standard_truth(p, noise_sd)
    return _attach_environment(_ar_expressions(n, p, rho, rng), truth, rng, e_prob)


def trichotomize(x: np.ndarray) -> np.ndarray:
    """Map each column to genotype codes by its own quartiles.

    Above the third quartile maps to 2, below the first to 0, the closed
    middle band to 1 (so an all-equal column maps entirely to 1).
    """
    q1 = np.quantile(x, 0.25, axis=0)
    q3 = np.quantile(x, 0.75, axis=0)
    return np.where(x > q3, 2.0, np.where(x < q1, 0.0, 1.0))


def gen_example2(
    n: int = 500, p: int = 100, rho: float = 0.5, rng=None,
    noise_sd: float = 1.0, e_prob: float = 0.5,
):
    """Genotype codes obtained by trichotomizing correlated expressions."""
    if n < 1 or p < 1 or not abs(rho) < 1:
        raise ConfigError("need n, p >= 1 and |rho| < 1")
    truth = standard_truth(p, noise_sd)
    snp = trichotomize(_ar_expressions(n, p, rho, rng))
    return _attach_environment(snp, truth, rng, e_prob)


@dataclass(frozen=True)
class LdSpec:
    """Pairwise linkage-disequilibrium setting for adjacent loci."""

    q1: float = 0.3
    q2: float = 0.3
    r: float = 0.6

    def __post_init__(self):
        if not (0 < self.q1 <= 0.5 and 0 < self.q2 <= 0.5):
            raise ConfigError("minor allele frequencies must lie in (0, 0.5]")
        if not -1 < self.r < 1:
            raise ConfigError("allelic correlation must lie in (-1, 1)")
        freqs = self.haplotype_freqs()
        if any(f < 0 or f > 1 for f in freqs.values()):
            raise ConfigError(
                f"infeasible LD: haplotype frequencies {freqs} out of [0, 1]"
            )

    @property
    def delta(self) -> float:
        return self.r * np.sqrt(self.q1 * (1 - self.q1) * self.q2 * (1 - self.q2))

    def haplotype_freqs(self) -> dict[str, float]:
        d = self.delta
        return {
            "AB": self.q1 * self.q2 + d,
            "ab": (1 - self.q1) * (1 - self.q2) + d,
            "Ab": self.q1 * (1 - self.q2) - d,
            "aB": (1 - self.q1) * self.q2 - d,
        }

    def conditional_matrix(self) -> np.ndarray:
        """P(genotype at locus 2 | genotype at locus 1), codes (0, 1, 2).

        Joint genotype probabilities come from two haplotypes drawn
        independently (random mating); code counts copies of the minor
        allele.
        """
        f = self.haplotype_freqs()
        pab, paB, pAb, pAB = f["ab"], f["aB"], f["Ab"], f["AB"]
        joint = np.zeros((3, 3))
        joint[2, 2] = pAB**2
        joint[2, 1] = 2 * pAB * pAb
        joint[2, 0] = pAb**2
        joint[1, 2] = 2 * pAB * paB
        joint[1, 1] = 2 * (pAB * pab + pAb * paB)
        joint[1, 0] = 2 * pAb * pab
        joint[0, 2] = paB**2
        joint[0, 1] = 2 * paB * pab
        joint[0, 0] = pab**2
        return joint / joint.sum(axis=1, keepdims=True)


def gen_example3(
    n: int = 500, p: int = 100, q1: float = 0.3, q2: float = 0.3, r: float = 0.6,
    rng=None, noise_sd: float = 1.0, e_prob: float = 0.5,
):
    """Genotypes chained along the loci under pairwise LD."""
    ld = LdSpec(q1=q1, q2=q2, r=r)
    hw = np.array([(1 - q1) ** 2, 2 * q1 * (1 - q1), q1**2])  # codes 0, 1, 2
    cond = ld.conditional_matrix()

    x = np.empty((n, p))
    u = rng.random(n)
    x[:, 0] = np.searchsorted(np.cumsum(hw), u, side="right").clip(max=2)
    cum = np.cumsum(cond, axis=1)
    for j in range(1, p):
        prev = x[:, j - 1].astype(int)
        u = rng.random(n)
        x[:, j] = (u[:, None] > cum[prev]).sum(axis=1)
    truth = standard_truth(p, noise_sd)
    return _attach_environment(x, truth, rng, e_prob)


def gen_from_genotype_file(
    path, n_sub: int, truth: TruthSpec | None = None, rng=None,
    noise_sd: float = 1.0, e_prob: float = 0.5,
):
    """Subsample rows of a genotype CSV and attach simulated responses.

    The file must have a header row; every column is read as a genotype
    code column.
    """
    try:
        df = pd.read_csv(path)
        x = df.to_numpy(dtype=float)
    except Exception as exc:
        raise DataError(f"cannot read genotype file {path}: {exc}") from exc
    if x.ndim != 2 or x.shape[1] < 1:
        raise DataError("genotype file holds no columns")
    if x.shape[0] < n_sub:
        raise DataError(
            f"genotype file has {x.shape[0]} rows, fewer than requested {n_sub}"
        )
    rows = rng.choice(x.shape[0], size=n_sub, replace=False)
    if truth is None:
        truth = standard_truth(x.shape[1], noise_sd)
    elif truth.p != x.shape[1]:
        raise DataError("truth dimension does not match genotype columns")
    return _attach_environment(x[rows], truth, rng, e_prob)


def example_dataset(example: int, n: int, p: int, rng, genotype_path=None, **kwargs):
    """Dispatch on the benchmark design id (1..4)."""
    if example == 1:
        return gen_example1(n, p, rng=rng, **kwargs)
    if example == 2:
        return gen_example2(n, p, rng=rng, **kwargs)
    if example == 3:
        return gen_example3(n, p, rng=rng, **kwargs)
    if example == 4:
        if genotype_path is None:
            raise ConfigError("example 4 needs a genotype file path")
        return gen_from_genotype_file(genotype_path, n, rng=rng, **kwargs)
    raise ConfigError(f"unknown example id {example}; expected 1..4")


# ---------------------------------------------------------------------------
# truth CSV: component, index (1-based gene where applicable), value, detail

def write_truth_csv(truth: TruthSpec, path) -> None:
    rows = [
        {"component": "p", "index": 0, "value": truth.p, "detail": ""},
        {"component": "intercept", "index": 0, "value": np.nan, "detail": truth.intercept},
        {"component": "noise_sd", "index": 0, "value": truth.noise_sd, "detail": ""},
        {"component": "zeta0", "index": 0, "value": truth.zeta0, "detail": ""},
    ]
    for k, a in enumerate(truth.alpha):
        rows.append({"component": "clinical", "index": k + 1, "value": a, "detail": ""})
    for j, name in truth.varying.items():
        rows.append({"component": "varying", "index": j + 1, "value": np.nan, "detail": name})
    for j, c in truth.constants.items():
        rows.append({"component": "constant", "index": j + 1, "value": c, "detail": ""})
    for j, v in truth.zeta.items():
        rows.append({"component": "e_interaction", "index": j + 1, "value": v, "detail": ""})
    pd.DataFrame(rows).to_csv(path, index=False)


def read_truth_csv(path) -> TruthSpec:
    df = pd.read_csv(path, keep_default_na=False, na_values=[""])
    by = {c: df[df["component"] == c] for c in df["component"].unique()}

    def one(component, column="value"):
        return by[component].iloc[0][column]

    varying = {}
    for _, row in by.get("varying", pd.DataFrame()).iterrows():
        name = row["detail"]
        if name not in CURVES:
            raise DataError(f"unknown coefficient curve {name!r} in truth file")
        varying[int(row["index"]) - 1] = name
    constants = {
        int(row["index"]) - 1: float(row["value"])
        for _, row in by.get("constant", pd.DataFrame()).iterrows()
    }
    zeta = {
        int(row["index"]) - 1: float(row["value"])
        for _, row in by.get("e_interaction", pd.DataFrame()).iterrows()
    }
    alpha = tuple(
        float(row["value"])
        for _, row in by.get("clinical", pd.DataFrame()).sort_values("index").iterrows()
    )
    return TruthSpec(
        p=int(one("p")),
        intercept=str(one("intercept", "detail")),
        varying=varying,
        constants=constants,
        alpha=alpha,
        zeta0=float(one("zeta0")),
        zeta=zeta,
        noise_sd=float(one("noise_sd")),
    )
