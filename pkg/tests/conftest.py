import numpy as np
import pytest

from spectraldet.model import BranchCut


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def neg():
    return BranchCut.neg()


@pytest.fixture
def pos():
    return BranchCut.pos()
