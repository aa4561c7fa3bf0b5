import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("openchain", max_examples=40, deadline=None)
settings.load_profile("openchain")


@pytest.fixture
def rng():
    return random.Random(20240611)


def rationals(lo=-6, hi=6, max_den=7):
    """Small rationals; sizes stay modest so exact products remain quick."""
    return st.fractions(min_value=lo, max_value=hi, max_denominator=max_den)


def exact_array(values):
    return np.array([Fraction(v) for v in values], dtype=object)


def dense_kron(op, site, n):
    """Reference Kronecker product with plain numpy, independent of the package."""
    out = np.eye(1)
    for i in range(1, n + 1):
        out = np.kron(out, np.asarray(op, dtype=float) if i == site else np.eye(2))
    return out
