import numpy as np
import pytest

from gxeselect import (
    ChainOutput,
    ChainSettings,
    PointEstimates,
    ci_select,
    inclusion_probabilities,
    mpm_select,
    psrf,
    reconstruct_beta,
)
from gxeselect.errors import ConfigError, DataError
from gxeselect.inference import psrf_values


def fake_chain(
    G=50,
    p=3,
    L=1,
    variant="BL",
    gamma1=None,
    gamma_star=None,
    zeta=None,
    phi_v=None,
    phi_c=None,
    phi_e=None,
    eta=None,
    seed=0,
):
    """Hand-built chain with the linear (two-column) basis: beta_j(z) = g1 + g* z."""
    rng = np.random.default_rng(seed)
    qn = 2
    gamma1 = rng.standard_normal((G, p)) if gamma1 is None else np.asarray(gamma1, float)
    gamma_star = (
        rng.standard_normal((G, p, L)) if gamma_star is None else np.asarray(gamma_star, float)
    )
    zeta = rng.standard_normal((G, p)) if zeta is None else np.asarray(zeta, float)
    eta = rng.standard_normal((G, qn)) if eta is None else np.asarray(eta, float)

    def ind(draws):
        return (np.abs(draws).reshape(G, p, -1).sum(axis=2) != 0).astype(np.uint8)

    return ChainOutput(
        variant=variant,
        settings=ChainSettings(iterations=2 * G, burn_in=G, thin=1, seed=seed, n_chains=1),
        chain_id=0,
        spline=None,
        domain=(0.0, 1.0),
        eta=eta,
        alpha=rng.standard_normal((G, 2)),
        zeta0=rng.standard_normal(G),
        gamma1=gamma1,
        gamma_star=gamma_star,
        zeta=zeta,
        sigma2=np.abs(rng.standard_normal(G)) + 0.5,
        lambda_c2=np.ones(G),
        lambda_v2=np.ones(G),
        lambda_e2=np.ones(G),
        pi_c=np.full(G, 0.5),
        pi_v=np.full(G, 0.5),
        pi_e=np.full(G, 0.5),
        phi_c=ind(gamma1) if phi_c is None else np.asarray(phi_c, np.uint8),
        phi_v=ind(gamma_star) if phi_v is None else np.asarray(phi_v, np.uint8),
        phi_e=ind(zeta) if phi_e is None else np.asarray(phi_e, np.uint8),
        seconds_total=0.0,
        seconds_per_sweep=0.0,
        resync_drift_max=0.0,
    )


def test_inclusion_probability_definition():
    phi = np.array([[1], [1], [0], [1]], dtype=np.uint8)
    chain = fake_chain(G=4, p=1, phi_v=phi, variant="BSSVC-SI")
    probs = inclusion_probabilities(chain)
    assert probs["varying"][0] == 0.75


def test_inclusion_probability_all_zero():
    chain = fake_chain(G=10, p=2, phi_v=np.zeros((10, 2), np.uint8), variant="BSSVC-SI")
    assert np.all(inclusion_probabilities(chain)["varying"] == 0.0)


def test_inclusion_probability_recount_oracle():
    rng = np.random.default_rng(3)
    phi = (rng.random((50, 4)) < 0.3).astype(np.uint8)
    chain = fake_chain(G=50, p=4, phi_e=phi, variant="BSSVC-SI")
    probs = inclusion_probabilities(chain)["linear_e"]
    for j in range(4):
        manual = sum(int(phi[g, j]) for g in range(50)) / 50
        assert probs[j] == manual


def test_mpm_threshold_is_inclusive():
    phi = np.zeros((100, 2), np.uint8)
    phi[:50, 0] = 1   # exactly 0.5
    phi[:49, 1] = 1   # 0.49
    chain = fake_chain(G=100, p=2, phi_v=phi, variant="BSSVC-SI")
    report = mpm_select(chain)
    assert report.selected_varying[0]          # p = 0.5 is selected
    assert not report.selected_varying[1]      # p = 0.49 is not


def test_mpm_threshold_monotonicity():
    rng = np.random.default_rng(4)
    phi = (rng.random((40, 6)) < rng.random(6)).astype(np.uint8)
    chain = fake_chain(G=40, p=6, phi_v=phi, variant="BSSVC-SI")
    prev = None
    for thr in (0.2, 0.4, 0.6, 0.8):
        sel = set(np.flatnonzero(mpm_select(chain, threshold=thr).selected_varying))
        if prev is not None:
            assert sel <= prev
        prev = sel


def test_ci_select_sign_cases():
    G = 200
    rng = np.random.default_rng(5)
    gamma_star = np.empty((G, 2, 1))
    gamma_star[:, 0, 0] = rng.uniform(0.5, 1.5, G)      # all positive
    gamma_star[:, 1, 0] = rng.standard_normal(G) * 0.1  # symmetric about 0
    chain = fake_chain(G=G, p=2, gamma_star=gamma_star)
    report = ci_select(chain)
    assert report.selected_varying[0]
    assert not report.selected_varying[1]


def test_ci_select_quantile_oracle():
    # sort-based type-7 quantile computed by hand
    G = 40
    rng = np.random.default_rng(6)
    draws = rng.standard_normal(G) + 0.35
    zeta = np.tile(draws[:, None], (1, 1))
    chain = fake_chain(G=G, p=1, zeta=zeta)
    report = ci_select(chain, level=0.95)

    srt = np.sort(draws)
    def type7(q):
        h = (G - 1) * q
        lo = int(np.floor(h))
        return srt[lo] + (h - lo) * (srt[min(lo + 1, G - 1)] - srt[lo])

    lo, hi = type7(0.025), type7(0.975)
    np.testing.assert_allclose(
        [np.quantile(draws, 0.025), np.quantile(draws, 0.975)], [lo, hi]
    )
    assert report.selected_linear_e[0] == (lo > 0 or hi < 0)


def test_ci_select_constant_zero_interval_not_selected():
    # an all-zero coefficient has interval [0, 0], which covers zero
    chain = fake_chain(G=30, p=1, gamma1=np.zeros((30, 1)))
    report = ci_select(chain)
    assert not report.selected_constant[0]


def test_reconstruct_flat_curve():
    G, p = 25, 2
    gamma_star = np.zeros((G, p, 1))
    gamma1 = np.full((G, p), 0.0)
    gamma1[:, 1] = 2.5
    chain = fake_chain(G=G, p=p, gamma1=gamma1, gamma_star=gamma_star)
    grid = np.linspace(0, 1, 11)
    curve = reconstruct_beta(chain, 1, grid)
    np.testing.assert_allclose(curve.median, 2.5)
    np.testing.assert_allclose(curve.lo, 2.5)
    np.testing.assert_allclose(curve.hi, 2.5)


def test_reconstruct_single_draw_exact():
    G, p = 1, 1
    gamma1 = np.array([[0.7]])
    gamma_star = np.array([[[1.2]]])
    chain = fake_chain(G=G, p=p, gamma1=gamma1, gamma_star=gamma_star)
    grid = np.linspace(0, 1, 7)
    curve = reconstruct_beta(chain, 0, grid)
    np.testing.assert_allclose(curve.median, 0.7 + 1.2 * grid)
    np.testing.assert_allclose(curve.lo, curve.hi)


def test_reconstruct_matches_brute_force():
    G = 10
    rng = np.random.default_rng(7)
    gamma1 = rng.standard_normal((G, 1))
    gamma_star = rng.standard_normal((G, 1, 1))
    chain = fake_chain(G=G, p=1, gamma1=gamma1, gamma_star=gamma_star)
    grid = np.linspace(0, 1, 9)
    curve = reconstruct_beta(chain, 0, grid)
    per_draw = np.array([gamma1[g, 0] + gamma_star[g, 0, 0] * grid for g in range(G)])
    np.testing.assert_allclose(curve.median, np.median(per_draw, axis=0))
    np.testing.assert_allclose(curve.lo, np.quantile(per_draw, 0.025, axis=0))
    np.testing.assert_allclose(curve.hi, np.quantile(per_draw, 0.975, axis=0))


def test_point_estimates_are_medians():
    chain = fake_chain(G=31, p=2, seed=9)
    est = PointEstimates.from_chain(chain)
    np.testing.assert_allclose(est.gamma1, np.median(chain.gamma1, axis=0))
    np.testing.assert_allclose(est.zeta0, np.median(chain.zeta0))


# ---------------------------------------------------------------------------
# PSRF

def test_psrf_identical_chains():
    G = 100
    draws = np.random.default_rng(8).standard_normal((1, G, 1))
    stacked = np.concatenate([draws, draws], axis=0)
    vals = psrf_values(stacked)
    np.testing.assert_allclose(vals, np.sqrt((G - 1) / G))


def test_psrf_separated_chains():
    G = 1000
    rng = np.random.default_rng(9)
    a = rng.standard_normal((1, G, 1))
    b = rng.standard_normal((1, G, 1)) + 10.0
    vals = psrf_values(np.concatenate([a, b], axis=0))
    assert vals[0] > 5.0


def test_psrf_affine_invariance():
    rng = np.random.default_rng(10)
    stacked = rng.standard_normal((3, 200, 2))
    base = psrf_values(stacked)
    transformed = psrf_values(4.2 * stacked - 7.0)
    np.testing.assert_allclose(base, transformed, rtol=1e-10)


def test_psrf_constant_parameter_is_unit():
    stacked = np.zeros((2, 50, 1))
    np.testing.assert_allclose(psrf_values(stacked), 1.0)


def test_psrf_requires_two_chains_and_length():
    chain = fake_chain(G=50, p=1)
    with pytest.raises(ConfigError):
        psrf([chain])
    with pytest.raises(ConfigError):
        psrf_values(np.zeros((2, 5, 1)))


def test_psrf_report_on_chains():
    a = fake_chain(G=120, p=2, seed=11, variant="BSSVC-SI")
    b = fake_chain(G=120, p=2, seed=12, variant="BSSVC-SI")
    report = psrf([a, b])
    assert len(report.names) == report.values.shape[0]
    assert report.gated.any()
    frame = report.frame()
    assert {"parameter", "psrf", "gated"} <= set(frame.columns)
    # iid draws from the same law converge
    assert report.max_gated < 1.1
    assert report.converged


def test_empty_chain_probability_error():
    chain = fake_chain(G=1, p=1)
    trimmed = fake_chain(G=1, p=1)
    trimmed.phi_v = trimmed.phi_v[:0]
    trimmed.sigma2 = trimmed.sigma2[:0]
    with pytest.raises(DataError):
        inclusion_probabilities(trimmed)
    del chain
