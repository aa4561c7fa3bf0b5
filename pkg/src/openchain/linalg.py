"""Dense and sector linear algebra on the 2**N dimensional chain space.

Basis convention (fixed package wide): the basis index of an occupation
pattern ``(m_1, ..., m_N)`` is ``sum(m_i * 2**(N - i))``, so site 1 is the
most significant bit. ``m_i = 1`` is the local state ``(0, 1)^t`` (a magnon,
or an SSEP particle) and ``m_i = 0`` is ``(1, 0)^t``.

All functions accept either exact (object arrays of Fractions) or float
(complex128) arrays and return results in the same mode.
"""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from . import scalars
from .errors import (
    DegenerateSpectrum,
    NotBlockDiagonal,
    SingularMatrix,
    SingularSector,
    SizeLimitExceeded,
)
from .scalars import EXACT, FLOAT

DENSE_EXACT_CAP = 10
MATRIX_FREE_CAP = 16

# single-site operators, exact
E11 = np.array([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]], dtype=object)
E12 = np.array([[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]], dtype=object)
E21 = np.array([[Fraction(0), Fraction(0)], [Fraction(1), Fraction(0)]], dtype=object)
E22 = np.array([[Fraction(0), Fraction(0)], [Fraction(0), Fraction(1)]], dtype=object)
ID2 = E11 + E22
SIGMA3 = E11 - E22
SIGMA_PLUS = E12


def max_sites(dense: bool = True) -> int:
    """Size cap for dense (default 10) or matrix-free (16) work.

    ``OPENCHAIN_MAX_N`` overrides the dense cap.
    """
    if dense:
        return int(os.environ.get("OPENCHAIN_MAX_N", DENSE_EXACT_CAP))
    return max(MATRIX_FREE_CAP, int(os.environ.get("OPENCHAIN_MAX_N", 0)))


def check_sites(n: int, dense: bool = True) -> int:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"number of sites must be a positive integer, got {n!r}")
    cap = max_sites(dense)
    if n > cap:
        kind = "dense" if dense else "matrix-free"
        raise SizeLimitExceeded(f"N={n} exceeds the {kind} cap N={cap} (set OPENCHAIN_MAX_N)")
    return int(n)


def sites_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if n < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return n


def basis_index(occupations) -> int:
    b = 0
    for m in occupations:
        b = (b << 1) | int(m)
    return b


def occupations(b: int, n: int) -> tuple:
    return tuple((b >> (n - i)) & 1 for i in range(1, n + 1))


def magnon_count(b: int) -> int:
    return bin(b).count("1")


def sector_indices(n: int, m: int) -> np.ndarray:
    """Basis indices with exactly ``m`` magnons, increasing."""
    return np.array([b for b in range(1 << n) if magnon_count(b) == m], dtype=np.intp)


def basis_state(n: int, b: int, mode: str = EXACT) -> np.ndarray:
    v = scalars.zeros(1 << n, mode)
    v[b] = Fraction(1) if mode == EXACT else 1.0
    return v


def local_apply(op, site: int, v: np.ndarray) -> np.ndarray:
    """Apply ``I x ... x op x ... x I`` (``op`` at ``site``, 1-based) to ``v``.

    ``v`` may carry trailing batch axes, i.e. be a matrix whose columns are
    states. Cost is O(2**N) per column; the Kronecker product is never formed.
    """
    op = np.asarray(op)
    if op.shape != (2, 2):
        raise ValueError("local operator must be 2x2")
    if v.dtype != object:
        op = op.astype(np.complex128)
    n = sites_of(v.shape[0])
    if not 1 <= site <= n:
        raise IndexError(f"site {site} out of range 1..{n}")
    w = v.reshape((1 << (site - 1), 2, 1 << (n - site)) + v.shape[1:])
    out = np.empty_like(w)
    for a in range(2):
        out[:, a] = op[a, 0] * w[:, 0] + op[a, 1] * w[:, 1]
    return out.reshape(v.shape)


def local_operator(op, site: int, n: int) -> np.ndarray:
    """Dense ``I x ... x op x ... x I`` by explicit Kronecker products."""
    op = np.asarray(op)
    mode = scalars.mode_of(op)
    left = scalars.eye(1 << (site - 1), mode)
    right = scalars.eye(1 << (n - site), mode)
    return np.kron(np.kron(left, op), right)


def site_sum(op, n: int) -> np.ndarray:
    """Dense ``sum_i op^[i]``."""
    return sum(local_operator(op, i, n) for i in range(1, n + 1))


def magnon_number_operator(n: int, mode: str = EXACT) -> np.ndarray:
    """``e_22^tot``: diagonal with the popcount of each basis index."""
    out = scalars.zeros((1 << n, 1 << n), mode)
    for b in range(1 << n):
        out[b, b] = Fraction(magnon_count(b)) if mode == EXACT else float(magnon_count(b))
    return out


def product_operator(op, n: int) -> np.ndarray:
    """Dense ``op x op x ... x op`` (N factors)."""
    out = np.asarray(op)
    for _ in range(n - 1):
        out = np.kron(out, op)
    return out


def product_apply(op, v: np.ndarray) -> np.ndarray:
    """Matrix-free action of ``op^{x N}`` on ``v``."""
    n = sites_of(v.shape[0])
    for site in range(1, n + 1):
        v = local_apply(op, site, v)
    return v


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def inverse_2x2(m) -> np.ndarray:
    m = np.asarray(m)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det == 0:
        raise SingularMatrix("2x2 matrix is singular")
    out = np.empty((2, 2), dtype=m.dtype)
    out[0, 0], out[0, 1] = m[1, 1] / det, -m[0, 1] / det
    out[1, 0], out[1, 1] = -m[1, 0] / det, m[0, 0] / det
    return out


# exact elimination ----------------------------------------------------------


def _rref(m: np.ndarray):
    """Reduced row echelon form over the rationals; returns (R, pivot_cols)."""
    m = np.array(m, dtype=object)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def solve(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``a @ x = rhs`` for square nonsingular ``a``.

    Exact mode uses Gauss-Jordan elimination over the rationals, float mode
    defers to LAPACK. Raises :class:`SingularMatrix` on a singular system.
    """
    a = np.asarray(a)
    rhs = np.asarray(rhs)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if scalars.mode_of(a, rhs) == FLOAT:
        try:
            return np.linalg.solve(a.astype(np.complex128), rhs.astype(np.complex128))
        except np.linalg.LinAlgError as exc:
            raise SingularMatrix(str(exc)) from exc
    vec = rhs.ndim == 1
    b = rhs.reshape(n, -1)
    aug = np.concatenate([scalars.asarray(a, EXACT), scalars.asarray(b, EXACT)], axis=1)
    red, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    x = red[:, n:]
    return x[:, 0] if vec else x


def null_space(a: np.ndarray) -> list:
    """Exact basis of the right kernel of a rational matrix.

    Each basis vector has a 1 in one free column and zeros in the others.
    """
    a = scalars.asarray(a, EXACT)
    rows, cols = a.shape
    red, pivots = _rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = scalars.zeros(cols, EXACT)
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, f]
        basis.append(v)
    return basis


def rank(a: np.ndarray) -> int:
    return len(_rref(scalars.asarray(a, EXACT))[1])


# sectors --------------------------------------------------------------------


def _check_supported(v: np.ndarray, idx: np.ndarray, tol: float):
    mask = np.ones(v.shape[0], dtype=bool)
    mask[idx] = False
    if not scalars.all_zero(v[mask], tol):
        raise ValueError("vector has weight outside the requested magnon sector")


def sector_solve(a: np.ndarray, lam, b: np.ndarray, sector: int) -> np.ndarray:
    """Solve ``(lam*I - a) v = b`` inside one magnon sector.

    ``b`` must be supported on the sector; the returned ``v`` is too. The
    restricted operator is inverted directly, so eigenvectors living in other
    sectors never enter. A singular restriction raises :class:`SingularSector`.
    """
    n = sites_of(a.shape[0])
    idx = sector_indices(n, sector)
    mode = scalars.mode_of(a, lam, b)
    _check_supported(b, idx, 1e-12 if mode == FLOAT else 0.0)
    block = -a[np.ix_(idx, idx)]
    for k in range(len(idx)):
        block[k, k] = block[k, k] + lam
    try:
        sol = solve(block, b[idx])
    except SingularMatrix as exc:
        raise SingularSector(f"(lambda - A) is singular on sector {sector}") from exc
    out = scalars.zeros(a.shape[0], mode)
    out[idx] = sol
    return out


def is_block_diagonal(a: np.ndarray, tol: float = 0.0) -> bool:
    n = sites_of(a.shape[0])
    counts = np.array([magnon_count(b) for b in range(1 << n)])
    off = counts[:, None] != counts[None, :]
    return scalars.all_zero(np.asarray(a)[off], tol)


def sector_eig(a: np.ndarray, sector: int, degeneracy_tol: float = 1e-8):
    """Eigenpairs of ``a`` restricted to a magnon sector (float mode).

    Returns a list of ``(eigenvalue, eigenvector)`` with eigenvectors embedded
    in the full space and normalized to unit 2-norm, sorted by eigenvalue.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = sites_of(a.shape[0])
    if not is_block_diagonal(a, 1e-12 * max(1.0, np.max(np.abs(a)))):
        raise NotBlockDiagonal("operator mixes magnon sectors")
    idx = sector_indices(n, sector)
    vals, vecs = np.linalg.eig(a[np.ix_(idx, idx)])
    order = np.lexsort((vals.imag, vals.real))
    vals, vecs = vals[order], vecs[:, order]
    scale = max(1.0, np.max(np.abs(vals)))
    gaps = np.abs(vals[:, None] - vals[None, :])
    np.fill_diagonal(gaps, np.inf)
    if len(vals) > 1 and np.min(gaps) < degeneracy_tol * scale:
        raise DegenerateSpectrum(f"sector {sector} has (near) degenerate eigenvalues")
    pairs = []
    for k in range(len(idx)):
        v = np.zeros(1 << n, dtype=np.complex128)
        v[idx] = vecs[:, k] / np.linalg.norm(vecs[:, k])
        pairs.append((vals[k], v))
    return pairs


def polynomial_coefficients(nodes, values) -> list:
    """Monomial coefficients of the interpolating polynomial through samples.

    ``values[k]`` is the (scalar or array) value at ``nodes[k]``; coefficient
    ``j`` of the result multiplies ``x**j``. Exact for rational nodes.
    """
    k = len(nodes)
    mode = scalars.mode_of(*nodes)
    vand = scalars.zeros((k, k), mode)
    for i, x in enumerate(nodes):
        for j in range(k):
            vand[i, j] = x**j
    vinv = solve(vand, scalars.eye(k, mode))
    out = []
    for j in range(k):
        acc = None
        for i in range(k):
            if vinv[j, i] == 0:
                continue
            term = values[i] * vinv[j, i]
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else values[0] * 0)
    return out
