import pytest

from jainbaskakov import EvalConfig


@pytest.fixture
def cfg():
    return EvalConfig()


@pytest.fixture
def fast_cfg():
    # coarse grids for unit tests; acceptance pins its own resolutions
    return EvalConfig(grid_points=65, domain_cap=20.0)
