"""Orchestration: multi-chain fits, replicate studies, timing benchmarks.

Replicates are independent and deterministic: each gets its own random
sub-streams derived from the master seed by (replicate, purpose) keys, so a
study reproduces exactly regardless of worker scheduling.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .gibbs import ChainOutput, ChainSettings, MethodVariant, concat_chains, run_chain
from .inference import PointEstimates, PsrfReport, SelectionReport, psrf, select
from .metrics import DEFAULT_GRID, ReplicateScore, aggregate_scores, score_fit
from .model import GxEDataset, Hyperparameters
from .rng import make_generator
from .simulate import TruthSpec, example_dataset
from .splines import SplineConfig


def spline_for_data(data: GxEDataset, degree: int = 2, interior_knots: int = 2) -> SplineConfig:
    """Spline over the observed range of the continuous exposure."""
    return SplineConfig(
        degree=degree,
        interior_knots=interior_knots,
        domain_lo=float(np.min(data.z)),
        domain_hi=float(np.max(data.z)),
    )


@dataclass
class FitResult:
    chains: list[ChainOutput]
    pooled: ChainOutput
    report: SelectionReport
    psrf: PsrfReport | None
    estimates: PointEstimates

    @property
    def converged(self) -> bool:
        return self.psrf is None or self.psrf.converged


def fit_dataset(
    data: GxEDataset,
    variant: MethodVariant = MethodVariant.BSSVC_SI,
    settings: ChainSettings = ChainSettings(),
    hyper: Hyperparameters = Hyperparameters(),
    degree: int = 2,
    interior_knots: int = 2,
    grid: np.ndarray | None = None,
) -> FitResult:
    """Run the configured number of chains and summarize them."""
    spline = None if variant.linear else spline_for_data(data, degree, interior_knots)
    chains = [
        run_chain(variant, data, spline, hyper, settings, chain_id=c)
        for c in range(settings.n_chains)
    ]
    pooled = concat_chains(chains) if len(chains) > 1 else chains[0]
    report = select(pooled, grid=DEFAULT_GRID if grid is None else grid)
    diag = psrf(chains) if len(chains) > 1 else None
    return FitResult(
        chains=chains,
        pooled=pooled,
        report=report,
        psrf=diag,
        estimates=PointEstimates.from_chain(pooled),
    )


# ---------------------------------------------------------------------------
# replicate studies

@dataclass
class StudyConfig:
    example: int = 1
    methods: tuple[str, ...] = ("BSSVC-SI",)
    replicates: int = 100
    n: int = 500
    p: int = 100
    degree: int = 2
    interior_knots: int = 2
    iterations: int = 10_000
    burn_in: int = 5_000
    thin: int = 1
    seed: int = 1
    genotype_path: str | None = None
    hyper: Hyperparameters = field(default_factory=Hyperparameters)
    example_kwargs: dict = field(default_factory=dict)


def run_one_replicate(config: StudyConfig, rep: int) -> list[ReplicateScore]:
    """Generate train/test data for one replicate and fit every method."""
    data_rng = make_generator(config.seed, stream_id=(rep, 0))
    test_rng = make_generator(config.seed, stream_id=(rep, 1))
    data, truth = example_dataset(
        config.example, config.n, config.p, data_rng,
        genotype_path=config.genotype_path, **config.example_kwargs,
    )
    test, _ = example_dataset(
        config.example, config.n, config.p, test_rng,
        genotype_path=config.genotype_path, **config.example_kwargs,
    )
    scores = []
    for m_idx, label in enumerate(config.methods):
        variant = MethodVariant.parse(label)
        settings = ChainSettings(
            iterations=config.iterations,
            burn_in=config.burn_in,
            thin=config.thin,
            seed=config.seed,
            n_chains=1,
        )
        spline = (
            None if variant.linear
            else spline_for_data(data, config.degree, config.interior_knots)
        )
        chain = run_chain(
            variant, data, spline, config.hyper, settings,
            chain_id=(rep, 2 + m_idx),
        )
        report = select(chain)
        est = PointEstimates.from_chain(chain)
        scores.append(
            score_fit(variant.value, rep, report, est, truth, test,
                      seconds=chain.seconds_total)
        )
    return scores


@dataclass
class StudyResult:
    table: pd.DataFrame
    scores: list[ReplicateScore]
    failures: dict[int, str]


def run_replicates(config: StudyConfig, workers: int = 1) -> StudyResult:
    """Run the full replicate study; aggregation is ordered by replicate."""
    results: dict[int, list[ReplicateScore]] = {}
    failures: dict[int, str] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                rep: pool.submit(run_one_replicate, config, rep)
                for rep in range(config.replicates)
            }
            for rep, fut in futures.items():
                try:
                    results[rep] = fut.result()
                except Exception as exc:  # noqa: BLE001 - recorded, not fatal
                    failures[rep] = repr(exc)
    else:
        for rep in range(config.replicates):
            try:
                results[rep] = run_one_replicate(config, rep)
            except Exception as exc:  # noqa: BLE001
                failures[rep] = repr(exc)
    scores = [s for rep in sorted(results) for s in results[rep]]
    if not scores:
        raise RuntimeError(f"all replicates failed: {failures}")
    return StudyResult(table=aggregate_scores(scores), scores=scores, failures=failures)


# ---------------------------------------------------------------------------
# computational-cost benchmark

def benchmark_timings(
    n_list: list[int],
    p_list: list[int],
    iterations: int = 10_000,
    burn_in: int | None = None,
    seed: int = 1,
    degree: int = 2,
    interior_knots: int = 2,
) -> pd.DataFrame:
    """Wall-clock cost of single chains across (n, p) settings."""
    if burn_in is None:
        burn_in = iterations // 2
    rows = []
    for n in n_list:
        for p in p_list:
            rng = make_generator(seed, stream_id=(n, p))
            data, _ = example_dataset(1, n, p, rng)
            settings = ChainSettings(
                iterations=iterations, burn_in=burn_in, thin=1, seed=seed, n_chains=1
            )
            spline = spline_for_data(data, degree, interior_knots)
            chain = run_chain(MethodVariant.BSSVC_SI, data, spline, Hyperparameters(), settings)
            qn = degree + interior_knots + 1
            rows.append(
                {
                    "n": n,
                    "p": p,
                    "coefficients": qn * p + p,
                    "seconds": chain.seconds_total,
                    "seconds_per_sweep": chain.seconds_per_sweep,
                }
            )
    return pd.DataFrame(rows)
