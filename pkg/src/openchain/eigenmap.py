"""Diagonal to triangular eigenvector map and the transformed reference state.

Three constructions of the triangular-chain eigenvector that shares its
transfer-matrix eigenvalue with a diagonal-chain eigenvector ``psi0``:

* :func:`map_resolvent` iterates ``G = (x+1) (Lambda - T_0(x))^{-1} C(x)``
  at a finite spectral parameter, inverting only on magnon sectors;
* :func:`map_limit` uses the large-``x`` limit, where ``G`` reduces to the
  bi-local ``C_{2N-1}`` divided by a magnon-number dependent factor;
* :func:`transformed_reference` is the closed form for ``psi0`` = all magnons.

All three fix the coefficient of ``psi0`` in the result to one.

Hole configurations ``I_h = (i_1 < ... < i_h)`` label the states
``e12[i_1] ... e12[i_h] |all magnons>``, i.e. the occupation pattern with
zeros exactly at the hole positions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import chain, linalg, scalars
from .chain import BoundaryParams
from .errors import CoefficientPole, NotEigenvector, OccupiedSite, TooManyHoles, ZeroBoundaryParam
from .scalars import EXACT, FLOAT

PERMSUM_MAX_HOLES = 9


@dataclass(frozen=True, order=True)
class HoleConfig:
    """Strictly increasing hole positions (1-based) on an ``n``-site chain."""

    indices: tuple
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"hole positions must be strictly increasing: {idx}")
        if idx and not (1 <= idx[0] and idx[-1] <= self.n):
            raise ValueError(f"hole positions out of range 1..{self.n}: {idx}")

    @property
    def h(self) -> int:
        return len(self.indices)

    def occupied(self, i: int) -> bool:
        return i in self.indices

    def add(self, i: int) -> "HoleConfig":
        return HoleConfig(tuple(sorted(self.indices + (i,))), self.n)

    def remove(self, i: int) -> "HoleConfig":
        return HoleConfig(tuple(j for j in self.indices if j != i), self.n)

    @property
    def basis_index(self) -> int:
        full = (1 << self.n) - 1
        return full - sum(1 << (self.n - i) for i in self.indices)

    @classmethod
    def from_basis_index(cls, b: int, n: int) -> "HoleConfig":
        occ = linalg.occupations(b, n)
        return cls(tuple(i + 1 for i, m in enumerate(occ) if m == 0), n)

    @classmethod
    def all(cls, n: int, h: int | None = None):
        sizes = range(n + 1) if h is None else [h]
        for size in sizes:
            for idx in itertools.combinations(range(1, n + 1), size):
                yield cls(idx, n)


# Hasse diagram combinatorics -------------------------------------------------------


def filling_function(config: HoleConfig, i: int, q):
    """Weight of the Hasse arrow ``I_h -> I_h + (i)``:
    ``2 (1 + q sum_{j>i} (2 w_j - 1))`` with ``w_j`` the hole indicator."""
    if config.occupied(i):
        raise OccupiedSite(f"site {i} already holds a hole")
    s = sum(2 * int(config.occupied(j)) - 1 for j in range(i + 1, config.n + 1))
    return 2 * (1 + q * s)


def _closed(config, q):
    h = config.h
    out = 2**h * math.factorial(h) * (1 + 0 * q)
    for alpha, i in enumerate(config.indices, start=1):
        out = out * (1 + q * (i + h - alpha - config.n))
    return out


def _permsum(config, q, filling):
    if config.h > PERMSUM_MAX_HOLES:
        raise TooManyHoles(f"{config.h} holes exceed the path-sum cap {PERMSUM_MAX_HOLES}")
    total = 0 * q
    for path in itertools.permutations(config.indices):
        weight = 1 + 0 * q
        current = HoleConfig((), config.n)
        for i in path:
            weight = weight * filling(current, i, q)
            current = current.add(i)
        total = total + weight
    return total


def _recursion(config, q, filling):
    memo = {(): 1 + 0 * q}

    def element(idx):
        if idx not in memo:
            cfg = HoleConfig(idx, config.n)
            acc = 0 * q
            for i in idx:
                smaller = cfg.remove(i)
                acc = acc + filling(smaller, i, q) * element(smaller.indices)
            memo[idx] = acc
        return memo[idx]

    return element(config.indices)


def hasse_element(config: HoleConfig, q, method: str = "closed", filling=filling_function):
    """Matrix element ``<I_h| C_{2N-1}^h |I_0>``.

    ``method`` is ``"closed"`` (product formula), ``"permsum"`` (sum over the
    ``h!`` Hasse paths) or ``"recursion"`` (memoized level-by-level recursion).
    ``filling`` replaces the arrow weight for the path based methods.
    """
    if method == "closed":
        return _closed(config, q)
    if method == "permsum":
        return _permsum(config, q, filling)
    if method == "recursion":
        return _recursion(config, q, filling)
    raise ValueError(f"unknown method {method!r}")


def apply_C_raising(state: dict, q) -> dict:
    """Action of ``C_{2N-1}`` on a ``{HoleConfig: coefficient}`` superposition."""
    out: dict = {}
    for cfg, coef in state.items():
        for i in range(1, cfg.n + 1):
            if cfg.occupied(i):
                continue
            tgt = cfg.add(i)
            val = coef * filling_function(cfg, i, q)
            out[tgt] = out[tgt] + val if tgt in out else val
    return out


def hole_state_to_vector(state: dict, n: int, mode: str = EXACT) -> np.ndarray:
    v = scalars.zeros(1 << n, mode)
    for cfg, coef in state.items():
        v[cfg.basis_index] = v[cfg.basis_index] + coef
    return v


def vector_to_hole_state(v: np.ndarray) -> dict:
    n = linalg.sites_of(v.shape[0])
    return {HoleConfig.from_basis_index(b, n): v[b] for b in range(1 << n) if v[b] != 0}


# map coefficients -----------------------------------------------------------------------


def _inverse_sum(params: BoundaryParams):
    if scalars.is_zero(params.p) or scalars.is_zero(params.q):
        raise ZeroBoundaryParam("p and q must be nonzero for the large-x map")
    return 1 / params.p + 1 / params.q


def map_coefficients(m: int, n: int, params: BoundaryParams) -> list:
    """Coefficients ``c_k`` (k = 0..m) multiplying ``C_{2N-1}^k psi0``.

    ``c_k = (Delta/(4pq))^k / k! / prod_{j=1}^k (2m - N - 1/p - 1/q - j)``,
    the Gamma ratio written as a finite product.
    """
    params = params.coerced()
    one = scalars.coerce(1, params.mode)
    if m == 0 or scalars.is_zero(params.delta):
        return [one] + [0 * one] * m
    z = 2 * m - n - _inverse_sum(params)
    ratio = params.delta / (4 * params.p * params.q)
    coeffs = [one]
    for j in range(1, m + 1):
        denom = z - j
        if scalars.is_zero(denom):
            raise CoefficientPole(f"2m - N - 1/p - 1/q - {j} vanishes (m={m}, N={n})")
        coeffs.append(coeffs[-1] * ratio / (j * denom))
    return coeffs


def _sector_of(psi0, m, tol):
    n = linalg.sites_of(psi0.shape[0])
    idx = linalg.sector_indices(n, m)
    mask = np.ones(psi0.shape[0], dtype=bool)
    mask[idx] = False
    if not scalars.all_zero(psi0[mask], tol):
        raise ValueError(f"input vector is not supported on magnon sector {m}")
    return n


def eigenvalue_of(op: np.ndarray, v: np.ndarray, tol: float = 1e-10):
    """Eigenvalue of ``op`` on ``v``; raises :class:`NotEigenvector` otherwise."""
    w = op @ v
    j = int(np.argmax(np.abs(v.astype(np.complex128))))
    lam = w[j] / v[j]
    resid = w - v * lam
    if scalars.mode_of(op, v) == FLOAT:
        scale = np.linalg.norm(w.astype(np.complex128)) + np.linalg.norm(v.astype(np.complex128))
        ok = np.linalg.norm(resid.astype(np.complex128)) <= tol * max(1.0, scale)
    else:
        ok = scalars.all_zero(resid)
    if not ok:
        raise NotEigenvector("vector is not an eigenvector of the operator")
    return lam


def map_limit(psi0: np.ndarray, m: int, params: BoundaryParams) -> np.ndarray:
    """Triangular eigenvector from a diagonal one, spectral parameter free."""
    mode = scalars.mode_of(psi0, params.p, params.q, params.delta)
    n = _sector_of(psi0, m, 1e-12 if mode == FLOAT else 0.0)
    params = params.coerced(mode)
    coeffs = map_coefficients(m, n, params)
    c = chain.c_leading(n, params.q)
    out = psi0.copy()
    term = psi0
    for k in range(1, m + 1):
        term = c @ term
        out = out + term * coeffs[k]
    return out


def map_resolvent(
    psi0: np.ndarray,
    m: int,
    x,
    params: BoundaryParams,
    eigenvalue=None,
    return_terms: bool = False,
):
    """Triangular eigenvector via ``sum_k Delta^k G^k psi0`` at spectral value ``x``.

    ``G^k psi0`` lives in sector ``m - k``; each step solves
    ``(Lambda I - T_0) y = (x+1) C(x) G^{k-1} psi0`` restricted to that sector.
    With ``return_terms`` the list ``[G^0 psi0, ..., G^m psi0]`` is returned
    alongside the result.
    """
    mode = scalars.mode_of(psi0, x, params.p, params.q, params.delta)
    n = _sector_of(psi0, m, 1e-12 if mode == FLOAT else 0.0)
    params = params.coerced(mode)
    x = scalars.coerce(x, mode)
    if scalars.is_zero(x):
        raise ValueError("C(0) vanishes; the resolvent map needs x != 0")
    t0 = chain.transfer(x, n, params.diagonal())
    lam = eigenvalue_of(t0, psi0) if eigenvalue is None else eigenvalue
    c = chain.double_row(x, n, params.q).c
    terms = [psi0]
    out = psi0.copy()
    for k in range(1, m + 1):
        rhs = (c @ terms[-1]) * (x + 1)
        term = linalg.sector_solve(t0, lam, rhs, m - k)
        terms.append(term)
        out = out + term * params.delta**k
    return (out, terms) if return_terms else out


def transformed_reference(n: int, params: BoundaryParams) -> np.ndarray:
    """Closed-form triangular eigenvector built on the all-magnon state.

    Amplitude of hole configuration ``I_h`` is
    ``(Delta/(2pq))^h prod_k (1 + q(i_k + h - k - N)) / (N - 1/p - 1/q - k)``.
    """
    linalg.check_sites(n, dense=False)
    mode = params.mode
    params = params.coerced()
    out = scalars.zeros(1 << n, mode)
    one = scalars.coerce(1, mode)
    out[(1 << n) - 1] = one
    if scalars.is_zero(params.delta):
        return out
    s = _inverse_sum(params)
    ratio = params.delta / (2 * params.p * params.q)
    denoms = [one]
    for k in range(1, n + 1):
        d = n - s - k
        if scalars.is_zero(d):
            raise CoefficientPole(f"N - 1/p - 1/q - {k} vanishes (N={n})")
        denoms.append(denoms[-1] * d)
    for cfg in HoleConfig.all(n):
        h = cfg.h
        if h == 0:
            continue
        num = ratio**h
        for k, i in enumerate(cfg.indices, start=1):
            num = num * (1 + params.q * (i + h - k - n))
        out[cfg.basis_index] = num / denoms[h]
    return out
