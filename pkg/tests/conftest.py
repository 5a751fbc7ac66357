import json
import pathlib

import numpy as np
import pytest

FIXDIR = pathlib.Path(__file__).parent / "fixtures"


def load_fixture(name):
    with open(FIXDIR / name) as fh:
        return json.load(fh)


@pytest.fixture
def fixture():
    return load_fixture


@pytest.fixture
def ref_params():
    """Reference bistable point used throughout the paper-analogue tests."""
    import kerrswitch as ks
    return ks.KerrParams(delta=5.8, chi=-0.5, epsilon=-4.0, kappa=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
