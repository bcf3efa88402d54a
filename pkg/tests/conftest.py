import numpy as np
import pytest

from gxeselect import (
    ChainSettings,
    GxEDataset,
    Hyperparameters,
    MethodVariant,
    Residual,
    SplineConfig,
    assemble_designs,
    make_generator,
)
from gxeselect.model import initial_state, spline_block_for


def small_dataset(n=40, p=4, seed=0, q=2):
    """Random small dataset with a couple of real effects baked in."""
    rng = make_generator(seed, 99)
    x = rng.standard_normal((n, p))
    z = rng.uniform(0.0, 1.0, n)
    e = (rng.random(n) < 0.5).astype(float)
    w = rng.standard_normal((n, q))
    y = (
        np.sin(2 * np.pi * z)
        + 1.5 * x[:, 0]
        + (0.8 * z) * x[:, 1]
        + 0.5 * e
        + rng.standard_normal(n)
    )
    return GxEDataset(y=y, x=x, z=z, e=e, w=w)


def build_problem(n=40, p=4, seed=0, degree=2, knots=1, split=True):
    """Dataset, cache, fresh state and residual for update-level tests."""
    data = small_dataset(n=n, p=p, seed=seed)
    cfg = SplineConfig(degree, knots, float(data.z.min()), float(data.z.max()))
    block = spline_block_for(data, cfg)
    cache = assemble_designs(data, block, group_includes_constant=not split)
    state = initial_state(cache.b0.shape[1], data.q, p, cache.group_size,
                          var_y=float(np.var(data.y)))
    resid = Residual(data.y, state, cache)
    return data, cfg, cache, state, resid


@pytest.fixture
def problem():
    return build_problem()


@pytest.fixture
def hyper():
    return Hyperparameters()


@pytest.fixture
def quick_settings():
    return ChainSettings(iterations=120, burn_in=60, thin=1, seed=7, n_chains=1)


@pytest.fixture(params=list(MethodVariant))
def any_variant(request):
    return request.param
