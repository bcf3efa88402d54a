import numpy as np
import pytest

from gxeselect import (
    GxEDataset,
    PointEstimates,
    TruthSpec,
    identification_counts,
    imse,
    make_generator,
    prediction_error,
    total_squared_error,
)
from gxeselect.errors import DataError
from gxeselect.inference import SelectionReport
from gxeselect.metrics import aggregate_scores, score_fit
from gxeselect.simulate import gen_example1, standard_truth


def make_report(p, varying=(), constant=(), linear_e=()):
    sel_v = np.zeros(p, bool)
    sel_c = np.zeros(p, bool)
    sel_e = np.zeros(p, bool)
    sel_v[list(varying)] = True
    sel_c[list(constant)] = True
    sel_e[list(linear_e)] = True
    return SelectionReport(
        variant="BSSVC-SI", rule="mpm", threshold=0.5,
        selected_varying=sel_v, selected_constant=sel_c, selected_linear_e=sel_e,
        p_varying=None, p_constant=None, p_linear_e=None,
        gamma1_median=np.zeros(p), zeta_median=np.zeros(p),
    )


def representable_estimates(truth: TruthSpec) -> PointEstimates:
    """Exact point estimates for a truth with no curved coefficients,
    using the two-column linear basis."""
    assert not truth.varying
    gamma1 = np.zeros(truth.p)
    for j, c in truth.constants.items():
        gamma1[j] = c
    eta = np.zeros(2)
    return PointEstimates(
        variant="BL", split=True, spline=None, domain=(0.0, 1.0),
        eta=eta, alpha=np.asarray(truth.alpha, float), zeta0=truth.zeta0,
        gamma1=gamma1, gamma_star=np.zeros((truth.p, 1)),
        zeta=truth.zeta_vector(), sigma2=truth.noise_sd**2,
    )


def flat_truth(p=12, noise_sd=1.0) -> TruthSpec:
    return TruthSpec(
        p=p, intercept="zero", varying={},
        constants={3: 0.5, 4: 0.8, 5: -1.2, 6: 0.7, 7: -1.1},
        alpha=(-0.5, 1.0), zeta0=1.5,
        zeta={0: 0.6, 1: 1.5, 2: -1.3, 3: 1.0, 4: -0.8},
        noise_sd=noise_sd,
    )


def make_test_data(truth: TruthSpec, n=500, seed=0) -> GxEDataset:
    rng = make_generator(seed, 0)
    x = rng.standard_normal((n, truth.p))
    z = rng.uniform(0, 1, n)
    e = (rng.random(n) < 0.5).astype(float)
    w = rng.standard_normal((n, 2))
    y = truth.mean(x, z, e, w) + truth.noise_sd * rng.standard_normal(n)
    return GxEDataset(y=y, x=x, z=z, e=e, w=w)


# ---------------------------------------------------------------------------
# imse

def test_imse_zero_for_perfect_estimate():
    grid = np.linspace(0, 1, 50)
    truth = lambda z: np.sin(z)
    assert imse(truth(grid), truth, grid) == 0.0


def test_imse_constant_reduces_to_mse():
    grid = np.linspace(0, 1, 3)
    assert np.isclose(imse(np.full(3, 0.7), 0.5, grid), 0.04)


def test_imse_hand_arithmetic():
    grid = np.array([0.0, 0.5, 1.0])
    estimate = np.array([1.0, 2.0, 3.0])
    assert np.isclose(imse(estimate, 0.0, grid), 14.0 / 3.0)


def test_imse_errors():
    with pytest.raises(DataError):
        imse(np.ones(3), 0.0, np.array([]))
    with pytest.raises(DataError):
        imse(np.ones(3), 0.0, np.linspace(0, 1, 5))


# ---------------------------------------------------------------------------
# identification counts

def test_identification_perfect_selection():
    truth = standard_truth(100)
    report = make_report(100, varying=(0, 1, 2), constant=(3, 4, 5, 6, 7),
                         linear_e=(0, 1, 2, 3, 4))
    counts = identification_counts(report, truth)
    assert (counts.tp_varying, counts.tp_constant, counts.tp_e) == (3, 5, 5)
    assert (counts.fp_varying, counts.fp_constant, counts.fp_e) == (0, 0, 0)


def test_identification_empty_selection():
    truth = standard_truth(100)
    counts = identification_counts(make_report(100), truth)
    assert counts == type(counts)(0, 0, 0, 0, 0, 0)


def test_identification_false_positive_gene():
    truth = standard_truth(100)
    counts = identification_counts(make_report(100, varying=(49,)), truth)
    assert counts.fp_varying == 1 and counts.tp_varying == 0


def test_identification_constant_flag_on_varying_gene_not_fp():
    # varying-truth genes have nonzero constant components, so flagging them
    # as constant is not counted against the method
    truth = standard_truth(100)
    counts = identification_counts(make_report(100, constant=(0, 1, 2)), truth)
    assert counts.fp_constant == 0 and counts.tp_constant == 0


def test_identification_null_gene_permutation_equivariance():
    truth = standard_truth(100)
    a = identification_counts(make_report(100, varying=(30,), linear_e=(77,)), truth)
    b = identification_counts(make_report(100, varying=(88,), linear_e=(12,)), truth)
    assert a == b


# ---------------------------------------------------------------------------
# prediction error

def test_prediction_error_zero_noise_truth_estimates():
    truth = flat_truth(noise_sd=0.0)
    est = representable_estimates(truth)
    test = make_test_data(truth, n=300, seed=1)
    assert prediction_error(est, test) < 1e-20


def test_prediction_error_noise_floor():
    truth = flat_truth(noise_sd=1.0)
    est = representable_estimates(truth)
    test = make_test_data(truth, n=500, seed=2)
    assert abs(prediction_error(est, test) - 1.0) < 0.1


def test_prediction_error_all_zero_fit_is_large():
    rng = make_generator(3, 0)
    data, truth = gen_example1(n=400, p=20, rng=rng)
    zero_est = PointEstimates(
        variant="BL", split=True, spline=None, domain=(0.0, 1.0),
        eta=np.zeros(2), alpha=np.zeros(2), zeta0=0.0,
        gamma1=np.zeros(20), gamma_star=np.zeros((20, 1)),
        zeta=np.zeros(20), sigma2=1.0,
    )
    assert prediction_error(zero_est, data) > 5.0


# ---------------------------------------------------------------------------
# total squared error

def test_total_zero_for_perfect_fit():
    truth = flat_truth()
    est = representable_estimates(truth)
    assert total_squared_error(est, truth) < 1e-20


def test_total_single_term():
    truth = flat_truth()
    est = representable_estimates(truth)
    est.alpha = est.alpha + np.array([0.1, 0.0])
    assert np.isclose(total_squared_error(est, truth), 0.01)


def test_total_additivity_recount():
    truth = flat_truth()
    est = representable_estimates(truth)
    rng = np.random.default_rng(4)
    est.gamma1 = est.gamma1 + rng.standard_normal(truth.p) * 0.1
    est.zeta = est.zeta + rng.standard_normal(truth.p) * 0.1
    est.alpha = est.alpha + np.array([0.05, -0.02])
    est.eta = np.array([0.3, -0.1])

    grid = np.linspace(0, 1, 200)
    manual = imse(est.intercept_curve(grid), truth.intercept_at, grid)
    for j in range(truth.p):
        manual += imse(est.beta_curve(j, grid), lambda z, j=j: truth.beta(j, z), grid)
    manual += np.sum((est.alpha - np.asarray(truth.alpha)) ** 2)
    manual += (est.zeta0 - truth.zeta0) ** 2
    manual += np.sum((est.zeta - truth.zeta_vector()) ** 2)
    np.testing.assert_allclose(total_squared_error(est, truth, grid), manual, rtol=1e-12)


# ---------------------------------------------------------------------------
# aggregation

def test_score_fit_and_aggregate():
    truth = flat_truth()
    est = representable_estimates(truth)
    test = make_test_data(truth, n=200, seed=5)
    report = make_report(truth.p, constant=(3, 4, 5, 6, 7), linear_e=(0, 1, 2, 3, 4))
    scores = [
        score_fit("BSSVC-SI", rep, report, est, truth, test, seconds=1.0)
        for rep in range(3)
    ]
    table = aggregate_scores(scores)
    assert "BSSVC-SI" in table.columns
    assert table.loc["TP Constant", "BSSVC-SI"] == "5.000(0.000)"
    assert table.loc["Total", "BSSVC-SI"].startswith("0.000")
    assert table.loc["Replicates", "BSSVC-SI"] == "3"
