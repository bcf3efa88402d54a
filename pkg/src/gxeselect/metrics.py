"""Scoring fitted models against the generating truth.

Curve accuracy is the mean squared deviation over a fixed grid (which
collapses to the squared error of the level for a constant function);
identification is counted as true/false positives per effect family;
prediction error is the mean squared error on an independent test set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import DataError
from .inference import PointEstimates, SelectionReport
from .model import GxEDataset
from .simulate import TruthSpec

DEFAULT_GRID = np.linspace(0.0, 1.0, 200)


def imse(estimate: np.ndarray, truth, grid: np.ndarray) -> float:
    """Mean squared deviation of an estimated curve over a grid.

    ``truth`` may be a callable, an array of grid values, or a constant.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DataError("empty grid")
    estimate = np.asarray(estimate, dtype=float)
    if callable(truth):
        target = truth(grid)
    else:
        target = np.broadcast_to(np.asarray(truth, dtype=float), grid.shape)
    if estimate.shape != grid.shape:
        raise DataError("estimate and grid lengths differ")
    return float(np.mean((estimate - target) ** 2))


@dataclass(frozen=True)
class IdentificationCounts:
    tp_varying: int
    fp_varying: int
    tp_constant: int
    fp_constant: int
    tp_e: int
    fp_e: int


def identification_counts(report: SelectionReport, truth: TruthSpec) -> IdentificationCounts:
    """True/false positives per family.

    Genes with varying truth are excluded from constant false-positive
    counting: their coefficient functions contain nonzero constant
    components, so flagging them as constant is not an error.
    """
    varying_true = set(truth.varying)
    constant_true = set(truth.constants)
    e_true = set(truth.zeta)

    sel_v = set(np.flatnonzero(report.selected_varying))
    sel_c = set(np.flatnonzero(report.selected_constant))
    sel_e = set(np.flatnonzero(report.selected_linear_e))

    return IdentificationCounts(
        tp_varying=len(sel_v & varying_true),
        fp_varying=len(sel_v - varying_true),
        tp_constant=len(sel_c & constant_true),
        fp_constant=len(sel_c - constant_true - varying_true),
        tp_e=len(sel_e & e_true),
        fp_e=len(sel_e - e_true),
    )


def prediction_error(est: PointEstimates, test: GxEDataset) -> float:
    """Mean squared error of the posterior-median predictions on a test set."""
    return float(np.mean((est.predict(test) - test.y) ** 2))


def total_squared_error(
    est: PointEstimates, truth: TruthSpec, grid: np.ndarray = DEFAULT_GRID
) -> float:
    """Curve errors of all p + 1 coefficient functions (zero functions
    included) plus squared errors of every scalar coefficient."""
    total = imse(est.intercept_curve(grid), truth.intercept_at, grid)
    for j in range(truth.p):
        total += imse(est.beta_curve(j, grid), lambda z, j=j: truth.beta(j, z), grid)
    alpha_true = np.asarray(truth.alpha, dtype=float)
    total += float(np.sum((est.alpha - alpha_true) ** 2))
    total += float((est.zeta0 - truth.zeta0) ** 2)
    total += float(np.sum((est.zeta - truth.zeta_vector()) ** 2))
    return total


@dataclass
class ReplicateScore:
    """Everything one (replicate, method) fit contributes to the tables."""

    method: str
    replicate: int
    counts: IdentificationCounts
    imse_curves: dict[str, float]     # beta0..beta3
    mse_scalars: dict[str, float]     # alpha1, alpha2, zeta0, zeta1..zeta5
    total: float
    pred_error: float
    seconds: float
    extras: dict = field(default_factory=dict)


def score_fit(
    method: str,
    replicate: int,
    report: SelectionReport,
    est: PointEstimates,
    truth: TruthSpec,
    test: GxEDataset,
    seconds: float = float("nan"),
    grid: np.ndarray = DEFAULT_GRID,
) -> ReplicateScore:
    counts = identification_counts(report, truth)
    curves = {"beta0": imse(est.intercept_curve(grid), truth.intercept_at, grid)}
    for j in sorted(truth.varying):
        curves[f"beta{j + 1}"] = imse(
            est.beta_curve(j, grid), lambda z, j=j: truth.beta(j, z), grid
        )
    scalars = {}
    for k, a in enumerate(truth.alpha):
        scalars[f"alpha{k + 1}"] = float((est.alpha[k] - a) ** 2)
    scalars["zeta0"] = float((est.zeta0 - truth.zeta0) ** 2)
    for j in sorted(truth.zeta):
        scalars[f"zeta{j + 1}"] = float((est.zeta[j] - truth.zeta[j]) ** 2)
    return ReplicateScore(
        method=method,
        replicate=replicate,
        counts=counts,
        imse_curves=curves,
        mse_scalars=scalars,
        total=total_squared_error(est, truth, grid),
        pred_error=prediction_error(est, test),
        seconds=seconds,
    )


def _mean_sd(values) -> str:
    arr = np.asarray(list(values), dtype=float)
    return f"{arr.mean():.3f}({arr.std(ddof=1) if arr.size > 1 else 0.0:.3f})"


def aggregate_scores(scores: list[ReplicateScore]) -> pd.DataFrame:
    """mean(sd) table across replicates, one column per method."""
    methods = sorted({s.method for s in scores}, key=lambda m: [s.method for s in scores].index(m))
    rows: dict[str, dict[str, str]] = {}

    def put(row, method, text):
        rows.setdefault(row, {})[method] = text

    for method in methods:
        ms = [s for s in scores if s.method == method]
        for fam, label in (("varying", "Varying"), ("constant", "Constant"), ("e", "Nonzero")):
            put(f"TP {label}", method, _mean_sd(getattr(s.counts, f"tp_{fam}") for s in ms))
            put(f"FP {label}", method, _mean_sd(getattr(s.counts, f"fp_{fam}") for s in ms))
        for key in ms[0].imse_curves:
            put(f"IMSE {key}", method, _mean_sd(s.imse_curves[key] for s in ms))
        for key in ms[0].mse_scalars:
            put(f"MSE {key}", method, _mean_sd(s.mse_scalars[key] for s in ms))
        put("Total", method, _mean_sd(s.total for s in ms))
        put("Pred. Error", method, _mean_sd(s.pred_error for s in ms))
        put("Seconds", method, _mean_sd(s.seconds for s in ms))
        put("Replicates", method, str(len(ms)))

    table = pd.DataFrame(rows).T
    table.index.name = "metric"
    return table[methods]
