from fractions import Fraction

import numpy as np
import pytest

from openchain import linalg, oracles, scalars, ssep, verify
from openchain.errors import KernelDimension, TruncationUnstable
from openchain.ssep import SSEPRates

F = Fraction


def test_lambda_example():
    assert oracles.dehp_lambda(SSEPRates(F(1), F(1), F(0), F(0))) == 1


def test_algebra_on_interior_block(rng):
    for _ in range(5):
        r = verify.rand_rates(rng)
        real = oracles.dehp_build(r, 7)
        d, e = real.d, real.e
        comm = d @ e - e @ d - d - e
        assert scalars.all_zero(comm[:-1, :-1])
        a, b, g, dl = r.as_tuple()
        left = real.w @ (e * a - d * g) - real.w
        right = (d * b - e * dl) @ real.v - real.v
        assert scalars.all_zero(left[:-1]) and scalars.all_zero(right[:-1])
        assert all(d[i, j] == 0 for i in range(7) for j in range(7) if abs(i - j) > 1)


def test_single_site_probability(rng):
    r = verify.rand_rates(rng)
    total = sum(r.as_tuple())
    assert oracles.dehp_probability("1", r) == (r.alpha + r.delta) / total


@pytest.mark.parametrize("n", range(1, 6))
def test_dehp_matches_closed_form(n, rng):
    r = verify.rand_rates(rng)
    dist = oracles.dehp_distribution(n, r)
    assert sum(dist) == 1
    assert list(dist) == list(ssep.probabilities(n, r))
    assert list(dist) == list(oracles.dehp_distribution(n, r, size=n + 5))


def test_truncation_floor():
    with pytest.raises(ValueError):
        oracles.dehp_probability("0101", SSEPRates(F(1), F(1), F(1), F(2)), size=5)


def test_truncation_unstable_is_raised(monkeypatch):
    r = SSEPRates(F(1), F(2), F(1, 3), F(1, 2))
    real = oracles.dehp_build

    def broken(rates, size):
        out = real(rates, size)
        if size == 4:
            out.d[0, 0] += 1
        return out

    monkeypatch.setattr(oracles, "dehp_build", broken)
    with pytest.raises(TruncationUnstable):
        oracles.dehp_distribution(2, r)


def test_nullspace_examples():
    r = SSEPRates(F(1), F(2), F(3), F(4))
    assert list(oracles.nullspace_steady(1, r)) == [F(5, 10), F(5, 10)]
    r = SSEPRates(F(2), F(3, 2), F(3), F(1))
    assert list(oracles.nullspace_steady(3, r)) == list(ssep.bernoulli(3, F(2, 5)))


def test_commuting_realization_at_equilibrium():
    # alpha beta = gamma delta: kappa = 0, the product measure comes out
    r = SSEPRates(F(2), F(3, 2), F(3), F(1))
    real = oracles.dehp_build(r, 5)
    assert scalars.all_zero(real.d @ real.e - real.e @ real.d)
    assert list(oracles.dehp_distribution(3, r)) == list(ssep.bernoulli(3, F(2, 5)))


def test_kernel_dimension_error(monkeypatch):
    # valid rates always give a one dimensional kernel; force a degenerate generator
    monkeypatch.setattr(oracles, "markov_matrix", lambda n, r: scalars.zeros((1 << n, 1 << n), scalars.EXACT))
    with pytest.raises(KernelDimension):
        oracles.nullspace_steady(2, SSEPRates(F(1), F(1), F(1), F(1)))
