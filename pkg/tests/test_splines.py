import numpy as np
import pytest
from scipy.interpolate import BSpline

from gxeselect import (
    BasisBlock,
    SplineConfig,
    build_knot_vector,
    change_of_basis,
    eval_raw_basis,
    interaction_block,
    linear_basis_block,
    raw_basis_matrix,
)
from gxeselect.errors import ConfigError, DataError


def test_knot_vector_quadratic_two_interior():
    cfg = SplineConfig(2, 2, 0.0, 1.0)
    np.testing.assert_allclose(
        build_knot_vector(cfg), [0, 0, 0, 1 / 3, 2 / 3, 1, 1, 1]
    )


def test_knot_vector_no_interior():
    cfg = SplineConfig(2, 0, 0.0, 1.0)
    np.testing.assert_allclose(build_knot_vector(cfg), [0, 0, 0, 1, 1, 1])
    assert cfg.n_basis == 3


def test_knot_vector_cubic_counts():
    cfg = SplineConfig(3, 2, 0.0, 1.0)
    assert cfg.n_basis == 3 + 2 + 1
    assert build_knot_vector(cfg).shape == (10,)


def test_invalid_domain_rejected():
    with pytest.raises(ConfigError):
        SplineConfig(2, 2, 1.0, 1.0)
    with pytest.raises(ConfigError):
        SplineConfig(2, 2, 2.0, 1.0)


def test_basis_count_rule():
    for deg in range(4):
        for k in range(4):
            if deg + k + 1 < 2:
                continue
            cfg = SplineConfig(deg, k, 0.0, 1.0)
            assert raw_basis_matrix(cfg, np.array([0.3])).shape == (1, deg + k + 1)


def test_partition_of_unity():
    rng = np.random.default_rng(1)
    for deg, k in [(2, 2), (3, 4), (1, 0), (2, 0)]:
        cfg = SplineConfig(deg, k, -1.0, 2.5)
        z = rng.uniform(-1.0, 2.5, 1000)
        basis = raw_basis_matrix(cfg, z)
        assert np.all(basis >= 0)
        np.testing.assert_allclose(basis.sum(axis=1), 1.0, atol=1e-12)


def test_boundary_values():
    cfg = SplineConfig(2, 2, 0.0, 1.0)
    np.testing.assert_allclose(eval_raw_basis(cfg, 0.0), [1, 0, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(eval_raw_basis(cfg, 1.0), [0, 0, 0, 0, 1], atol=1e-15)


def test_linear_hat_functions():
    cfg = SplineConfig(1, 0, 0.0, 1.0)
    np.testing.assert_allclose(eval_raw_basis(cfg, 0.25), [0.75, 0.25])


def test_out_of_domain_clamped():
    cfg = SplineConfig(2, 2, 0.0, 1.0)
    np.testing.assert_allclose(eval_raw_basis(cfg, -3.0), eval_raw_basis(cfg, 0.0))
    np.testing.assert_allclose(eval_raw_basis(cfg, 7.0), eval_raw_basis(cfg, 1.0))


def test_matches_scipy_design_matrix():
    rng = np.random.default_rng(2)
    for deg, k in [(1, 3), (2, 2), (3, 5)]:
        cfg = SplineConfig(deg, k, 0.2, 1.7)
        knots = build_knot_vector(cfg)
        z = rng.uniform(0.2, 1.7, 200)
        ours = raw_basis_matrix(cfg, z)
        scipys = BSpline.design_matrix(z, knots, deg).toarray()
        np.testing.assert_allclose(ours, scipys, atol=1e-12)


def test_change_of_basis_definition():
    raw = np.array([[0.2, 0.5, 0.3]])
    block = change_of_basis(raw)
    np.testing.assert_allclose(block.columns, [[1.0, 0.5, 0.3]])


def test_change_of_basis_rejects_bad_rows():
    with pytest.raises(DataError):
        change_of_basis(np.array([[0.2, 0.5, 0.4]]))
    with pytest.raises(DataError):
        change_of_basis(np.array([0.2, 0.8]))


def test_constant_lives_in_first_column():
    cfg = SplineConfig(2, 2, 0.0, 1.0)
    z = np.linspace(0, 1, 50)
    block = change_of_basis(raw_basis_matrix(cfg, z))
    c = 3.7
    coef = np.zeros(cfg.n_basis)
    coef[0] = c
    np.testing.assert_allclose(block.columns @ coef, c, atol=1e-12)


def test_change_of_basis_preserves_span():
    # least-squares re-fit oracle: anything expressible in the raw basis is
    # reproduced exactly in the new basis
    rng = np.random.default_rng(3)
    cfg = SplineConfig(2, 3, 0.0, 1.0)
    z = rng.uniform(0, 1, 120)
    raw = raw_basis_matrix(cfg, z)
    block = change_of_basis(raw)
    for _ in range(5):
        coef = rng.standard_normal(cfg.n_basis)
        target = raw @ coef
        refit, *_ = np.linalg.lstsq(block.columns, target, rcond=None)
        assert np.abs(block.columns @ refit - target).max() < 1e-10


def test_first_column_exactly_one():
    rng = np.random.default_rng(4)
    cfg = SplineConfig(3, 2, 0.0, 1.0)
    block = change_of_basis(raw_basis_matrix(cfg, rng.uniform(0, 1, 30)))
    assert np.all(block.columns[:, 0] == 1.0)


def test_interaction_block_zeros_and_ones():
    cfg = SplineConfig(2, 2, 0.0, 1.0)
    z = np.linspace(0, 1, 10)
    block = change_of_basis(raw_basis_matrix(cfg, z))
    np.testing.assert_array_equal(
        interaction_block(block, np.zeros(10)), np.zeros((10, 4))
    )
    np.testing.assert_allclose(interaction_block(block, np.ones(10)), block.varying)


def test_interaction_block_hand_case():
    # degree 1, no interior knots: varying column is just z
    cfg = SplineConfig(1, 0, 0.0, 1.0)
    z = np.array([0.25, 0.5])
    x = np.array([2.0, -1.0])
    block = change_of_basis(raw_basis_matrix(cfg, z))
    np.testing.assert_allclose(
        interaction_block(block, x), [[0.25 * 2.0], [0.5 * -1.0]]
    )


def test_interaction_block_length_mismatch():
    cfg = SplineConfig(2, 2, 0.0, 1.0)
    block = change_of_basis(raw_basis_matrix(cfg, np.linspace(0, 1, 10)))
    with pytest.raises(DataError):
        interaction_block(block, np.ones(7))


def test_linear_block():
    z = np.array([0.1, 0.9])
    block = linear_basis_block(z)
    assert isinstance(block, BasisBlock)
    np.testing.assert_allclose(block.columns, [[1, 0.1], [1, 0.9]])
    np.testing.assert_allclose(block.varying, [[0.1], [0.9]])
