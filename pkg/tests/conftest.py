import numpy as np
import pytest

import reference
from scoreid import evaluation


@pytest.fixture(scope="session")
def i2():
    return reference.two_state_example()


@pytest.fixture(scope="session")
def i2_gt(i2):
    return evaluation.ground_truth(i2)


@pytest.fixture(scope="session")
def ref_inst():
    return reference.reference_instance()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
