from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from openchain import chain, linalg, scalars, verify
from openchain.chain import BoundaryParams
from openchain.linalg import E12
from openchain.scalars import EXACT, Jet

from conftest import rationals

F = Fraction


def params(p="1/3", q="-2/5", d="3/4"):
    return BoundaryParams(F(p), F(q), F(d))


def test_r_matrix_examples():
    pm = chain.permutation_4x4()
    assert np.array_equal(chain.r_matrix(F(0)), pm)
    ev = np.sort(np.linalg.eigvalsh(chain.r_matrix(F(1)).astype(float)))
    assert np.allclose(ev, [0, 2, 2, 2])


@given(rationals(), rationals())
def test_yang_baxter(x, y):
    r = chain.r_matrix
    # permute the 8x8 product by explicit index loops for an independent check
    def embed(mat, s, t):
        out = scalars.zeros((8, 8), EXACT)
        for a in range(8):
            bits = [(a >> (2 - k)) & 1 for k in range(3)]
            for row in range(4):
                new = list(bits)
                new[s], new[t] = row >> 1, row & 1
                col = 2 * bits[s] + bits[t]
                if mat[row, col] != 0:
                    out[sum(b << (2 - k) for k, b in enumerate(new)), a] += mat[row, col]
        return out

    lhs = embed(r(x - y), 0, 1) @ embed(r(x), 0, 2) @ embed(r(y), 1, 2)
    rhs = embed(r(y), 1, 2) @ embed(r(x), 0, 2) @ embed(r(x - y), 0, 1)
    assert scalars.all_zero(lhs - rhs)


def test_k_matrix_examples():
    q, p, d = F(2, 3), F(-1, 4), F(5)
    assert np.array_equal(chain.k_hat(F(0), q), scalars.eye(2, EXACT))
    assert np.array_equal(chain.k_plus(F(-1), p, d), scalars.eye(2, EXACT))
    assert list(chain.k_plus(F(1), p, d).ravel()) == [1 + 2 * p, 2 * d, 0, 1 - 2 * p]


def test_double_row_at_zero():
    u = chain.double_row(F(0), 1, F(3, 7))
    assert scalars.all_zero(u.c)
    assert np.array_equal(u.a, scalars.eye(2, EXACT)) and np.array_equal(u.d, scalars.eye(2, EXACT))


@pytest.mark.parametrize("n", range(1, 7))
def test_double_row_on_reference_state(n, rng):
    x, q = verify.rand_rational(rng), verify.rand_rational(rng)
    psi = chain.reference_state(n)
    b = (1 << n) - 1
    u = chain.double_row(x, n, q)
    d_coef = (1 - x * q) * (x + 1) ** (2 * n)
    a_coef = (1 + x * q) * x ** (2 * n) + (1 - x * q) * ((x + 1) ** (2 * n) - x ** (2 * n)) / (2 * x + 1)
    assert list(u.d @ psi) == list(psi * d_coef)
    assert (u.a @ psi)[b] == a_coef
    assert scalars.all_zero(np.delete(u.a @ psi, b))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_double_row_apply_matches_blocks(n, rng):
    x, q = verify.rand_rational(rng), verify.rand_rational(rng)
    u = chain.double_row(x, n, q)
    v = scalars.asarray([rng.randint(-5, 5) for _ in range(1 << n)], EXACT)
    for row in range(2):
        for col in range(2):
            assert list(chain.double_row_apply(x, v, q, row, col)) == list(u.block(row, col) @ v)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c_lowers_magnon_number(n, rng):
    x, q = verify.rand_rational(rng), verify.rand_rational(rng)
    c = chain.double_row(x, n, q).c
    num = linalg.magnon_number_operator(n)
    assert scalars.all_zero(num @ c - c @ (num - scalars.eye(1 << n, EXACT)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_transfer_split_and_commutation(n, rng):
    pr = verify.rand_params(rng, n)
    x, y = verify.rand_rational(rng), verify.rand_rational(rng)
    t = chain.transfer(x, n, pr)
    t0 = chain.transfer(x, n, pr.diagonal())
    c = chain.double_row(x, n, pr.q).c
    assert scalars.all_zero(t - t0 - c * (pr.delta * (x + 1)))
    num = linalg.magnon_number_operator(n)
    assert scalars.all_zero(linalg.commutator(t0, num))
    if pr.delta != 0:
        assert not scalars.all_zero(linalg.commutator(t, num))
    ty = chain.transfer(y, n, pr)
    assert scalars.all_zero(t @ ty - ty @ t)
    v = scalars.asarray([rng.randint(-5, 5) for _ in range(1 << n)], EXACT)
    assert list(chain.transfer_apply(x, v, pr)) == list(t @ v)


@pytest.mark.parametrize("n", range(1, 6))
def test_reference_state_eigenvalue_of_diagonal_transfer(n, rng):
    pr = verify.rand_params(rng, n)
    psi = chain.reference_state(n)
    for _ in range(3):
        x = verify.rand_rational(rng)
        t0 = chain.transfer(x, n, pr.diagonal())
        lam = chain.lambda_N(x, n, pr.p, pr.q)
        assert list(t0 @ psi) == list(psi * lam)
        assert (psi @ t0 @ psi) == lam
        if 2 * x + 1 != 0:
            assert chain.lambda_N(x, n, pr.p, pr.q, form="direct") == lam
    t = chain.transfer(F(2, 3), n, pr)
    if pr.delta != 0:
        lam = chain.lambda_N(F(2, 3), n, pr.p, pr.q)
        assert not scalars.all_zero(t @ psi - psi * lam)


def test_lambda_examples():
    for n in (1, 3, 5):
        assert chain.lambda_N(F(0), n, F(3), F(-2, 7)) == 2
    assert chain.lambda_N(F(1), 1, F(0), F(0)) == 6
    t0 = chain.transfer(F(1), 1, BoundaryParams(F(0), F(0)))
    assert (t0 @ chain.reference_state(1))[1] == 6


def test_lambda_log_derivative_gives_energy():
    p, q = F(2, 3), F(-5, 4)
    for n in (1, 2, 4):
        lam = chain.lambda_N(Jet.variable(F(0)), n, p, q)
        assert lam.deriv / lam.value - (2 * n - 1) == -p - q


def test_hamiltonian_two_site_spectrum():
    h = chain.hamiltonian_triangular(2, BoundaryParams(F(0), F(0), F(0)))
    ev = np.sort(np.linalg.eigvals(h.astype(complex)).real)
    assert np.allclose(ev, [-4, 0, 0, 0])


@pytest.mark.parametrize("n", range(1, 7))
def test_hamiltonian_routes_agree(n, rng):
    pr = verify.rand_params(rng, n)
    a = chain.hamiltonian_explicit(n, pr)
    b = chain.hamiltonian_from_transfer(n, pr)
    assert scalars.all_zero(a - b)


def test_transfer_at_zero_is_twice_identity(rng):
    pr = verify.rand_params(rng, 3)
    assert np.array_equal(chain.transfer(F(0), 3, pr), scalars.eye(8, EXACT) * 2)


def test_c_leading_single_site():
    assert np.array_equal(chain.c_leading(1, F(3)), 2 * scalars.asarray(E12, EXACT))


@pytest.mark.parametrize("n", range(1, 5))
def test_expansion_matches_interpolation(n, rng):
    q = verify.rand_rational(rng)
    closed = chain.monodromy_expansion(n, q)
    interp = chain.double_row_coefficients(n, q)
    for key, op in closed.items():
        assert scalars.all_zero(op - interp[key[0]][int(key[1:])]), key


@pytest.mark.parametrize("n", [2, 3])
def test_c_leading_raises_holes(n, rng):
    q = verify.rand_rational(rng)
    c = chain.c_leading(n, q)
    num = linalg.magnon_number_operator(n)
    assert scalars.all_zero(num @ c - c @ (num - scalars.eye(1 << n, EXACT)))
