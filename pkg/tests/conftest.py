import numpy as np
import pytest

from multipath_dpe.geometry import ArrayConfig


@pytest.fixture
def ula8():
    return ArrayConfig(element_count=8, subarray_length=6, carrier_frequency=5.9e9)


@pytest.fixture
def ula16():
    return ArrayConfig(element_count=16, subarray_length=8, carrier_frequency=5.9e9)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
