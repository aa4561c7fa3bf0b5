import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from openchain import chain, eigenmap, linalg, scalars, verify
from openchain.chain import BoundaryParams
from openchain.eigenmap import HoleConfig
from openchain.errors import CoefficientPole, OccupiedSite, TooManyHoles, ZeroBoundaryParam
from openchain.scalars import EXACT

from conftest import rationals

F = Fraction
METHODS = ("closed", "permsum", "recursion")


def test_hole_config_validation():
    with pytest.raises(ValueError):
        HoleConfig((2, 1), 3)
    with pytest.raises(ValueError):
        HoleConfig((4,), 3)
    cfg = HoleConfig((1, 3), 3)
    assert cfg.h == 2 and cfg.occupied(3) and not cfg.occupied(2)
    assert HoleConfig.from_basis_index(cfg.basis_index, 3) == cfg


def test_filling_function_examples():
    q = F(5, 7)
    assert eigenmap.filling_function(HoleConfig((2, 3), 3), 1, q) == 2 * (1 + 2 * q)
    assert eigenmap.filling_function(HoleConfig((1,), 4), 4, q) == 2
    for cfg in HoleConfig.all(4):
        for i in range(1, 5):
            if not cfg.occupied(i):
                assert eigenmap.filling_function(cfg, i, F(0)) == 2
    with pytest.raises(OccupiedSite):
        eigenmap.filling_function(HoleConfig((2,), 3), 2, q)


@pytest.mark.parametrize("method", METHODS)
def test_hasse_small_examples(method):
    q = F(-3, 4)
    assert eigenmap.hasse_element(HoleConfig((), 4), q, method) == 1
    assert eigenmap.hasse_element(HoleConfig((1, 2), 2), q, method) == 8


@given(st.integers(1, 6), st.data(), rationals())
def test_hasse_methods_agree(n, data, q):
    h = data.draw(st.integers(0, min(n, 5)))
    idx = tuple(sorted(data.draw(st.sets(st.integers(1, n), min_size=h, max_size=h))))
    cfg = HoleConfig(idx, n)
    values = {eigenmap.hasse_element(cfg, q, m) for m in METHODS}
    assert len(values) == 1


def test_permsum_cap():
    with pytest.raises(TooManyHoles):
        eigenmap.hasse_element(HoleConfig(tuple(range(1, 11)), 10), F(1), "permsum")


def test_mutated_filling_is_detected():
    cfg = HoleConfig((1, 2, 4), 5)
    q = F(1, 3)
    assert eigenmap.hasse_element(cfg, q, "permsum", verify.mutated_filling) != eigenmap.hasse_element(cfg, q)


def test_apply_c_raising_examples():
    q = F(2, 9)
    full = HoleConfig((1, 2, 3), 3)
    assert eigenmap.apply_C_raising({full: F(1)}, q) == {}
    assert eigenmap.apply_C_raising({HoleConfig((), 1): F(1)}, q) == {HoleConfig((1,), 1): 2}


@pytest.mark.parametrize("n", range(1, 6))
def test_apply_c_raising_matches_dense(n, rng):
    q = verify.rand_rational(rng)
    c = chain.c_leading(n, q)
    for _ in range(5):
        state = {cfg: verify.rand_rational(rng) for cfg in HoleConfig.all(n) if rng.random() < 0.5}
        got = eigenmap.hole_state_to_vector(eigenmap.apply_C_raising(state, q), n)
        want = c @ eigenmap.hole_state_to_vector(state, n)
        assert list(got) == list(want)


@given(st.integers(1, 8), st.lists(rationals(-20, 20, 11), min_size=8, max_size=8), rationals())
def test_hole_summation_identity(h, zs, q):
    n = 8
    total = F(0)
    prod = F(1)
    try:
        for k in range(1, h + 1):
            z = zs[k - 1]
            total += (1 + q * (2 * (h - k) + z - n)) / (1 + q * (z + h - k - n)) * prod
            prod *= (1 + q * (z + h - 1 - k - n)) / (1 + q * (z + h - k - n))
    except ZeroDivisionError:
        return
    assert total == h


def test_map_coefficients():
    pr = BoundaryParams(F(2), F(-3), F(5))
    n, m = 4, 2
    z = 2 * m - n - 1 / pr.p - 1 / pr.q
    c = eigenmap.map_coefficients(m, n, pr)
    assert c[0] == 1
    assert c[1] == (pr.delta / (4 * pr.p * pr.q)) / (z - 1)
    assert c[2] == (pr.delta / (4 * pr.p * pr.q)) ** 2 / 2 / ((z - 1) * (z - 2))
    with pytest.raises(ZeroBoundaryParam):
        eigenmap.map_coefficients(1, 2, BoundaryParams(F(0), F(1), F(1)))
    # 2m - N - 1/p - 1/q - 1 = 0 with m = N = 1 and 1/p + 1/q = 0
    with pytest.raises(CoefficientPole):
        eigenmap.map_coefficients(1, 1, BoundaryParams(F(1), F(-1), F(1)))


def test_transformed_reference_normalization(rng):
    pr = BoundaryParams(F(1, 3), F(2, 5), F(0))
    assert list(eigenmap.transformed_reference(3, pr)) == list(chain.reference_state(3))
    pr = verify.rand_params(rng, 4)
    assert eigenmap.transformed_reference(4, pr)[15] == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_map_resolvent_structure(n, rng):
    pr = verify.rand_params(rng, n)
    psi = chain.reference_state(n)
    x, y = F(2, 7), F(-5, 3)
    out, terms = eigenmap.map_resolvent(psi, n, x, pr, return_terms=True)
    assert list(out) == list(eigenmap.map_resolvent(psi, n, y, pr))
    assert list(out) == list(eigenmap.map_limit(psi, n, pr))
    assert list(out) == list(eigenmap.transformed_reference(n, pr))
    # proof step and series termination
    t0 = chain.transfer(x, n, pr.diagonal())
    c = chain.double_row(x, n, pr.q).c
    lam = chain.lambda_N(x, n, pr.p, pr.q)
    for k in range(1, n + 1):
        assert scalars.all_zero(terms[k] * lam - t0 @ terms[k] - (c @ terms[k - 1]) * (x + 1))
    assert scalars.all_zero(c @ terms[n])


def test_map_resolvent_trivial():
    pr = BoundaryParams(F(1, 2), F(1, 3), F(0))
    psi = chain.reference_state(2)
    assert list(eigenmap.map_resolvent(psi, 2, F(1), pr)) == list(psi)
    with pytest.raises(ValueError):
        eigenmap.map_resolvent(psi, 2, F(0), pr)


def test_generic_sector_float_map():
    pr = BoundaryParams(0.3, 0.7, 0.9)
    n, m, x = 4, 2, 0.61
    t0 = chain.transfer(0.37, n, pr.diagonal())
    t = chain.transfer(x, n, pr)
    for _, psi in linalg.sector_eig(t0, m):
        v = eigenmap.map_limit(psi, m, pr)
        lam = (chain.transfer(x, n, pr.diagonal()) @ psi)[np.argmax(abs(psi))] / psi[np.argmax(abs(psi))]
        assert np.linalg.norm(t @ v - lam * v) / np.linalg.norm(v) < 1e-10
        r1 = eigenmap.map_resolvent(psi, m, 0.8, pr)
        r2 = eigenmap.map_resolvent(psi, m, -1.3, pr)
        assert np.linalg.norm(r1 - r2) < 1e-10 * np.linalg.norm(r1)
        assert np.linalg.norm(r1 - v) < 1e-10 * np.linalg.norm(v)
