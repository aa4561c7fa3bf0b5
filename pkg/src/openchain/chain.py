"""Open XXX chain: R- and K-matrices, monodromies, transfer matrices, Hamiltonians.

Operators are built by acting with ordered products of local factors on a
tensor whose leading axes are two-dimensional spaces (auxiliary spaces first,
then chain sites) and whose last axis is a batch. An ``R_{s,t}(x) = x + P_{s,t}``
factor is ``x*w + swapaxes(w, s, t)``, a ``K`` factor is a 2x2 contraction on
one axis. Feeding the identity as batch yields dense operators; feeding a
single state gives the matrix-free action.

The double-row monodromy ``U_a(x) = M_a(x) K^_a(x) M^_a(x)`` is assembled one
auxiliary column at a time, so memory stays at two 2**N x 2**N blocks.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from . import linalg, scalars
from .errors import InconsistentConstruction, NonPolynomial
from .linalg import E11, E12, E22, SIGMA3, SIGMA_PLUS
from .scalars import EXACT, FLOAT, Jet


@dataclass(frozen=True)
class BoundaryParams:
    """Boundary parameters ``(p, q, delta)`` of the triangular chain."""

    p: Any
    q: Any
    delta: Any = Fraction(0)

    @property
    def mode(self) -> str:
        return scalars.mode_of(self.p, self.q, self.delta)

    def coerced(self, mode: str | None = None) -> "BoundaryParams":
        mode = mode or self.mode
        return BoundaryParams(*(scalars.coerce(v, mode) for v in (self.p, self.q, self.delta)))

    def diagonal(self) -> "BoundaryParams":
        return BoundaryParams(self.p, self.q, 0 * self.delta)


# 2x2 and 4x4 building blocks --------------------------------------------------


def _mat(rows, *like):
    mode = scalars.mode_of(*like)
    if any(isinstance(v, Jet) for v in like):
        return np.array(rows, dtype=object)
    return scalars.asarray(rows, mode)


def permutation_4x4(mode: str = EXACT) -> np.ndarray:
    pm = scalars.zeros((4, 4), mode)
    one = Fraction(1) if mode == EXACT else 1.0
    for a in range(2):
        for b in range(2):
            pm[2 * b + a, 2 * a + b] = one
    return pm


def r_matrix(x) -> np.ndarray:
    """``R(x) = x I + P`` on C^2 x C^2, basis index ``2*a + b``."""
    out = permutation_4x4(scalars.mode_of(x)).astype(_work_dtype(x))
    for i in range(4):
        out[i, i] = out[i, i] + x
    return out


def k_hat(x, q) -> np.ndarray:
    """Diagonal K-matrix ``diag(1 + q x, 1 - q x)``."""
    zero = 0 * x * q
    return _mat([[1 + q * x, zero], [zero, 1 - q * x]], x, q)


def k_plus(x, p, delta) -> np.ndarray:
    """Upper triangular K-matrix entering the trace of the transfer matrix."""
    u = x + 1
    zero = 0 * x * p
    return _mat([[1 + p * u, delta * u], [zero, 1 - p * u]], x, p, delta)


# factor engine ------------------------------------------------------------------


def _apply_r(w, x, s, t):
    return w * x + np.swapaxes(w, s, t)


def _apply_k(w, k, s):
    w = np.moveaxis(w, s, 0)
    out = np.empty_like(w)
    out[0] = w[0] * k[0, 0] + w[1] * k[0, 1]
    out[1] = w[0] * k[1, 0] + w[1] * k[1, 1]
    return np.moveaxis(out, 0, s)


def apply_factors(factors, w):
    """Apply the product ``factors[0] @ factors[1] @ ...`` to tensor ``w``.

    Factors are ``("R", x, s, t)`` or ``("K", kmat, s)`` with axis indices.
    """
    for f in reversed(factors):
        if f[0] == "R":
            w = _apply_r(w, f[1], f[2], f[3])
        else:
            w = _apply_k(w, f[1], f[2])
    return w


def _work_dtype(*values):
    if any(isinstance(v, Jet) for v in values):
        return object
    return scalars.dtype(scalars.mode_of(*values))


def dense_product(n_spaces: int, factors, *scalars_in) -> np.ndarray:
    """Dense matrix of a factor product on ``n_spaces`` two-dimensional spaces.

    Space 0 is the most significant tensor factor.
    """
    dim = 1 << n_spaces
    mode = scalars.mode_of(*scalars_in)
    w = scalars.eye(dim, mode).astype(_work_dtype(*scalars_in))
    w = apply_factors(factors, w.reshape((2,) * n_spaces + (dim,)))
    return w.reshape(dim, dim)


def monodromy_factors(x, n: int, aux: int = 0, offset: int = 1, reverse: bool = False):
    """Factors of ``M_a(x) = R_{a,1}...R_{a,N}`` (or ``M^_a`` with ``reverse``)."""
    sites = range(n, 0, -1) if reverse else range(1, n + 1)
    return [("R", x, aux, offset + i - 1) for i in sites]


def _double_row_factors(x, n, khat):
    return (
        monodromy_factors(x, n)
        + [("K", khat, 0)]
        + monodromy_factors(x, n, reverse=True)
    )


# double-row monodromy -------------------------------------------------------------


@dataclass(frozen=True)
class DoubleRowMonodromy:
    """The four auxiliary-space blocks of ``U_a(x)``, each 2**N x 2**N."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def block(self, row: int, col: int) -> np.ndarray:
        return ((self.a, self.b), (self.c, self.d))[row][col]


def _double_row_blocks(x, n, khat, *scalars_in):
    dim = 1 << n
    mode = scalars.mode_of(x, *scalars_in)
    dt = _work_dtype(x, *scalars_in)
    factors = _double_row_factors(x, n, khat)
    cols = []
    for r in range(2):
        w = scalars.zeros((2, dim, dim), mode).astype(dt)
        w[r] = scalars.eye(dim, mode)
        w = apply_factors(factors, w.reshape((2,) * (n + 1) + (dim,)))
        cols.append(w.reshape(2, dim, dim))
    # cols[r][c] is U_{c r}
    return [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]


def double_row(x, n: int, q, khat=None) -> DoubleRowMonodromy:
    """Double-row monodromy ``M_a(x) K^_a(x) M^_a(x)`` with blocks A, B, C, D.

    ``khat`` overrides the diagonal K-matrix (a 2x2 array at this ``x``).
    """
    linalg.check_sites(n)
    k = k_hat(x, q) if khat is None else khat
    blocks = _double_row_blocks(x, n, k, q, *np.ravel(k))
    return DoubleRowMonodromy(blocks[0][0], blocks[0][1], blocks[1][0], blocks[1][1])


def double_row_apply(x, v: np.ndarray, q, row: int, col: int, khat=None) -> np.ndarray:
    """Matrix-free ``U_{row,col}(x) v`` (e.g. ``row=1, col=0`` is C(x) v)."""
    n = linalg.check_sites(linalg.sites_of(v.shape[0]), dense=False)
    k = k_hat(x, q) if khat is None else khat
    dt = _work_dtype(x, q, v, *np.ravel(k))
    w = np.zeros((2,) + v.shape, dtype=dt)
    w[1 - col] = 0 * v if dt == object else 0
    w[col] = v
    w = apply_factors(_double_row_factors(x, n, k), w.reshape((2,) * (n + 1) + v.shape[1:]))
    return w.reshape((2,) + v.shape)[row]


def trace_with(kmat, blocks) -> np.ndarray:
    """``tr_a K_a U_a = sum_{r,c} K_{rc} U_{cr}``."""
    out = None
    for r in range(2):
        for c in range(2):
            if scalars.is_zero(kmat[r, c]):
                continue
            term = blocks[c][r] * kmat[r, c]
            out = term if out is None else out + term
    return out


def open_transfer(x, n: int, k_left, k_right) -> np.ndarray:
    """Dense ``tr_a K_left(x) M_a(x) K_right(x) M^_a(x)`` for given 2x2 matrices."""
    linalg.check_sites(n)
    blocks = _double_row_blocks(x, n, k_right, *np.ravel(k_left), *np.ravel(k_right))
    return trace_with(k_left, blocks)


def open_transfer_apply(x, v: np.ndarray, k_left, k_right) -> np.ndarray:
    """Matrix-free action of :func:`open_transfer` on a state (or batch)."""
    n = linalg.check_sites(linalg.sites_of(v.shape[0]), dense=False)
    dt = _work_dtype(x, v, *np.ravel(k_left), *np.ravel(k_right))
    factors = _double_row_factors(x, n, k_right)
    out = None
    for col in range(2):
        w = np.zeros((2,) + v.shape, dtype=dt)
        if dt == object:
            w[1 - col] = 0 * v
        w[col] = v
        w = apply_factors(factors, w.reshape((2,) * (n + 1) + v.shape[1:])).reshape((2,) + v.shape)
        for row in range(2):
            kv = k_left[col, row]
            if scalars.is_zero(kv):
                continue
            term = w[row] * kv
            out = term if out is None else out + term
    return out


def transfer(x, n: int, params: BoundaryParams) -> np.ndarray:
    """Dense transfer matrix ``T_Delta(x) = tr_a K_a(x; Delta) U_a(x)``."""
    return open_transfer(x, n, k_plus(x, params.p, params.delta), k_hat(x, params.q))


def transfer_apply(x, v: np.ndarray, params: BoundaryParams) -> np.ndarray:
    return open_transfer_apply(x, v, k_plus(x, params.p, params.delta), k_hat(x, params.q))


# Hamiltonians ------------------------------------------------------------------------


def swap_operator(n: int, k: int, l: int, mode: str = EXACT) -> np.ndarray:
    """Dense permutation of sites ``k`` and ``l`` (1-based)."""
    one = Fraction(1) if mode == EXACT else 1.0
    out = scalars.zeros((1 << n, 1 << n), mode)
    for b in range(1 << n):
        occ = list(linalg.occupations(b, n))
        occ[k - 1], occ[l - 1] = occ[l - 1], occ[k - 1]
        out[linalg.basis_index(occ), b] = one
    return out


def _as_mode(op, mode):
    return op.astype(np.complex128) if mode == FLOAT else op


def hamiltonian_explicit(n: int, params: BoundaryParams) -> np.ndarray:
    """``p s3[1] + Delta s+[1] + sum_k (s[k].s[k+1] - 1) + q s3[N]``.

    Uses ``s.s - 1 = 2 P - 2``.
    """
    linalg.check_sites(n)
    mode = params.mode
    pr = params.coerced()
    def loc(op, site):
        return linalg.local_operator(_as_mode(op, mode), site, n)
    h = loc(SIGMA3, 1) * pr.p + loc(SIGMA_PLUS, 1) * pr.delta + loc(SIGMA3, n) * pr.q
    eye = scalars.eye(1 << n, mode)
    for k in range(1, n):
        h = h + swap_operator(n, k, k + 1, mode) * 2 - eye * 2
    return h


def log_derivative_at_zero(transfer_fn, n: int, mode: str) -> tuple:
    """Return ``(T(0), T(0)^{-1} T'(0))`` using a jet at ``x = 0``.

    ``T(0)`` must be a multiple of the identity (the R-matrix is a permutation
    there), which is checked.
    """
    zero = scalars.coerce(0, mode)
    t = transfer_fn(Jet.variable(zero))
    t0, t1 = scalars.jet_parts(t)
    c = t0[0, 0]
    eye = scalars.eye(1 << n, mode)
    if not scalars.all_zero(t0 - eye * c, 1e-12 if mode == FLOAT else 0.0) or c == 0:
        raise InconsistentConstruction("transfer matrix at x=0 is not a nonzero multiple of I")
    return t0, t1 / c


def hamiltonian_from_transfer(n: int, params: BoundaryParams) -> np.ndarray:
    """``d/dx log T_Delta(x)|_0 - (2N - 1) I`` via jets."""
    linalg.check_sites(n)
    mode = params.mode
    pr = params.coerced()
    _, logder = log_derivative_at_zero(lambda x: transfer(x, n, pr), n, mode)
    return logder - scalars.eye(1 << n, mode) * (2 * n - 1)


def hamiltonian_triangular(n: int, params: BoundaryParams, check: bool = True) -> np.ndarray:
    """Hamiltonian of the triangular chain; both constructions are compared.

    Raises :class:`InconsistentConstruction` if the explicit sum and the
    logarithmic derivative of the transfer matrix disagree.
    """
    h = hamiltonian_explicit(n, params)
    if check:
        h2 = hamiltonian_from_transfer(n, params)
        tol = 1e-10 * max(1.0, float(np.max(np.abs(h.astype(np.complex128))))) if params.mode == FLOAT else 0.0
        if not scalars.all_zero(h - h2, tol):
            raise InconsistentConstruction("explicit Hamiltonian differs from log-derivative of T")
    return h


# large-x expansion -------------------------------------------------------------------


def kron_sites(ops: dict, n: int, mode: str = EXACT) -> np.ndarray:
    """Dense product of single-site operators ``{site: 2x2}``; identity elsewhere."""
    out = np.ones((1, 1), dtype=scalars.dtype(mode))
    if mode == EXACT:
        out[0, 0] = Fraction(1)
    ident = scalars.eye(2, mode)
    for i in range(1, n + 1):
        out = np.kron(out, _as_mode(ops[i], mode) if i in ops else ident)
    return out


def c_leading(n: int, q) -> np.ndarray:
    """Leading coefficient ``C_{2N-1}`` of C(x): a one- plus two-site operator."""
    linalg.check_sites(n)
    mode = scalars.mode_of(q)
    return _c_leading(n, scalars.coerce(q, mode), mode).copy()


@functools.lru_cache(maxsize=32)
def _c_leading(n: int, q, mode: str) -> np.ndarray:
    c = linalg.site_sum(_as_mode(E12, mode), n) * 2
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                c = c + kron_sites({i: E12, j: E11}, n, mode) * (2 * q)
            elif i > j:
                c = c - kron_sites({i: E22, j: E12}, n, mode) * (2 * q)
    return c


def monodromy_expansion(n: int, q) -> dict:
    """Closed-form leading coefficients of A(x), D(x) and C(x) in ``x``.

    Keys ``"A{k}"``, ``"D{k}"`` for ``k = 2N+1, 2N, 2N-1`` and ``"C{2N-1}"``.
    """
    linalg.check_sites(n)
    mode = scalars.mode_of(q)
    q = scalars.coerce(q, mode)
    eye = scalars.eye(1 << n, mode)
    s11 = linalg.site_sum(_as_mode(E11, mode), n)
    s22 = linalg.site_sum(_as_mode(E22, mode), n)
    pairs11 = scalars.zeros((1 << n, 1 << n), mode)
    pairs22 = scalars.zeros((1 << n, 1 << n), mode)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                pairs11 = pairs11 + kron_sites({i: E11, j: E11}, n, mode)
                pairs22 = pairs22 + kron_sites({i: E22, j: E22}, n, mode)
    top = 2 * n + 1
    return {
        f"A{top}": eye * q,
        f"D{top}": eye * (-q),
        f"A{top - 1}": eye + s11 * (2 * q),
        f"D{top - 1}": eye - s22 * (2 * q),
        f"A{top - 2}": s11 * 2 + pairs11 * (2 * q) + (s11 - s22) * q,
        f"D{top - 2}": s22 * 2 - pairs22 * (2 * q) + (s11 - s22) * q,
        f"C{top - 2}": c_leading(n, q),
    }


def double_row_coefficients(n: int, q, nodes=None) -> dict:
    """All polynomial coefficients of A, B, C, D by exact interpolation.

    Samples :func:`double_row` at ``2N+2`` integer nodes (default ``0..2N+1``)
    and returns ``{"A": [A_0, ..., A_{2N+1}], ...}``.
    """
    deg = 2 * n + 1
    mode = scalars.mode_of(q)
    if nodes is None:
        nodes = [scalars.coerce(k, mode) for k in range(deg + 1)]
    samples = [double_row(x, n, q) for x in nodes]
    out = {}
    for name in "abcd":
        coeffs = linalg.polynomial_coefficients(nodes, [getattr(s, name) for s in samples])
        out[name.upper()] = coeffs
    return out


# reference-state eigenvalue ------------------------------------------------------------


def _padd(a, b):
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] = out[i] + v
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return out


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] = out[i + j] + u * v
    return out


def _ppow(a, k):
    out = [1]
    for _ in range(k):
        out = _pmul(out, a)
    return out


def divide_linear(coeffs, c0, c1, tol: float = 0.0):
    """Divide ``sum coeffs[i] x^i`` by ``c0 + c1 x``; remainder must vanish."""
    coeffs = list(coeffs)
    deg = len(coeffs) - 1
    quot = [0] * deg
    rem = coeffs[deg]
    for i in range(deg, 0, -1):
        quot[i - 1] = rem / c1
        rem = coeffs[i - 1] - quot[i - 1] * c0
    if tol:
        scale = max([1.0] + [abs(complex(c)) for c in coeffs])
        bad = abs(complex(rem)) > tol * scale
    else:
        bad = rem != 0
    if bad:
        raise NonPolynomial(f"division by ({c0} + {c1} x) leaves remainder {rem}")
    return quot


def lambda_N_coefficients(n: int, p, q) -> list:
    """Coefficients (ascending) of the polynomial reference-state eigenvalue."""
    mode = scalars.mode_of(p, q)
    p, q = scalars.coerce(p, mode), scalars.coerce(q, mode)
    one = scalars.coerce(1, mode)
    t1 = _pmul(_pmul(_ppow([one, one], 2 * n + 1), [one, -p]), [one, -q])
    t2 = _pmul(_pmul(_ppow([0 * one, one], 2 * n + 1), [1 + p, p]), [1 + q, q])
    num = [2 * c for c in _padd(t1, t2)]
    return divide_linear(num, one, 2 * one, 1e-12 if mode == FLOAT else 0.0)


def horner(coeffs, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def lambda_N(x, n: int, p, q, form: str = "poly"):
    """Eigenvalue of ``T_0(x)`` on the all-magnon reference state.

    ``form="direct"`` evaluates the rational expression (``x != -1/2``);
    the default evaluates the exactly divided polynomial, valid everywhere.
    """
    if form == "direct":
        num = 2 * (1 + x) ** (2 * n + 1) * (1 - p * x) * (1 - q * x) + 2 * x ** (2 * n + 1) * (
            1 + p * (x + 1)
        ) * (1 + q * (x + 1))
        return num / (1 + 2 * x)
    return horner(lambda_N_coefficients(n, p, q), x)


def reference_state(n: int, filled: bool = True, mode: str = EXACT) -> np.ndarray:
    """All-magnon state (``filled``) or the empty vacuum."""
    return linalg.basis_state(n, (1 << n) - 1 if filled else 0, mode)
