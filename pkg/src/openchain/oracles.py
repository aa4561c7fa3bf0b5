"""Independent steady-state oracles.

* DEHP matrix product ansatz with an explicit tridiagonal realization of
  ``DE - ED = D + E``. The square roots ``sqrt(k (lambda + k))`` of the
  realization are removed by the diagonal similarity ``d_{k+1}/d_k =
  sqrt(k (lambda + k))``: entries above the diagonal pick up the factor
  ``k (lambda + k)``, entries below lose the root. ``<W| = |V> = e_1`` is
  unchanged because ``d_1 = 1``, so every weight is rational.

  The tabulated entries satisfy ``DE - ED = kappa (D + E)`` and the boundary
  relations with right hand sides scaled by the same ``kappa = (alpha beta -
  gamma delta) / ((alpha + gamma)(beta + delta))``. Dividing both matrices by
  ``kappa`` gives the unit normalized algebra; probabilities are homogeneous
  of degree zero and do not notice. At ``alpha beta = gamma delta`` the
  matrices commute, ``kappa = 0`` and the unscaled pair is kept.

  Truncation: the walk ``<W| X_1 ... X_N |V>`` starts at index 1 and moves by
  at most one index per factor, so a truncation ``L >= N + 2`` loses nothing.
  Results are checked at ``L`` and ``L + 1``.
* The exact kernel of the Markov generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from . import linalg, scalars
from .errors import KernelDimension, TruncationUnstable
from .ssep import SSEPRates, markov_matrix


@dataclass(frozen=True)
class DEHPRealization:
    size: int
    d: np.ndarray
    e: np.ndarray
    w: np.ndarray
    v: np.ndarray
    lam: Any


def dehp_lambda(rates: SSEPRates):
    r = rates.validate()
    ag, bd = r.alpha + r.gamma, r.beta + r.delta
    return (r.alpha + r.beta + r.gamma + r.delta) / (ag * bd) - 1


def dehp_build(rates: SSEPRates, size: int) -> DEHPRealization:
    """Rationalized ``size x size`` truncation of the tridiagonal D, E pair."""
    r = rates.validate()
    a, b, g, dl = r.as_tuple()
    ag, bd = a + g, b + dl
    lam = dehp_lambda(r)
    mode = r.mode
    d = scalars.zeros((size, size), mode)
    e = scalars.zeros((size, size), mode)
    for k in range(1, size + 1):
        d[k - 1, k - 1] = (a + dl + (k - 1) * (a * b + 2 * a * dl + g * dl)) / (ag * bd)
        e[k - 1, k - 1] = (b + g + (k - 1) * (a * b + 2 * b * g + g * dl)) / (ag * bd)
        if k < size:
            up = k * (lam + k)
            d[k - 1, k] = a / ag * up
            e[k - 1, k] = g / ag * up
            d[k, k - 1] = dl / bd
            e[k, k - 1] = b / bd
    kappa = (a * b - g * dl) / (ag * bd)
    if not scalars.is_zero(kappa):
        d, e = d / kappa, e / kappa
    w = scalars.zeros(size, mode)
    v = scalars.zeros(size, mode)
    w[0] = v[0] = scalars.coerce(1, mode)
    return DEHPRealization(size, d, e, w, v, lam)


def _weight(real: DEHPRealization, occ) -> Any:
    vec = real.v
    for m in reversed(occ):
        vec = (real.d if m else real.e) @ vec
    return real.w @ vec


def _distribution(real: DEHPRealization, n: int, configs) -> list:
    norm = real.v
    for _ in range(n):
        norm = (real.d + real.e) @ norm
    z = real.w @ norm
    return [_weight(real, occ) / z for occ in configs]


def _stable(rates, n, size, configs) -> list:
    if size < n + 2:
        raise ValueError(f"truncation {size} < N + 2 = {n + 2}")
    first = _distribution(dehp_build(rates, size), n, configs)
    second = _distribution(dehp_build(rates, size + 1), n, configs)
    diff = np.array([a - b for a, b in zip(first, second)], dtype=object)
    tol = 1e-12 if rates.mode == scalars.FLOAT else 0.0
    if not scalars.all_zero(diff.astype(np.complex128) if tol else diff, tol):
        raise TruncationUnstable(f"truncations {size} and {size + 1} disagree")
    return first


def dehp_probability(config, rates: SSEPRates, size: int | None = None):
    """``<W|X_1...X_N|V> / <W|(D+E)^N|V>``, cross-checked at two truncations."""
    occ = tuple(int(c) for c in config)
    n = len(occ)
    return _stable(rates.validate(), n, n + 2 if size is None else size, [occ])[0]


def dehp_distribution(n: int, rates: SSEPRates, size: int | None = None) -> np.ndarray:
    """All ``2**N`` DEHP probabilities indexed by basis index."""
    r = rates.validate()
    configs = [linalg.occupations(b, n) for b in range(1 << n)]
    out = scalars.zeros(1 << n, r.mode)
    out[:] = _stable(r, n, n + 2 if size is None else size, configs)
    return out


def nullspace_steady(n: int, rates: SSEPRates) -> np.ndarray:
    """Normalized kernel vector of the exact Markov generator."""
    r = rates.validate()
    kernel = linalg.null_space(markov_matrix(n, r))
    if len(kernel) != 1:
        raise KernelDimension(f"generator kernel has dimension {len(kernel)}, expected 1")
    v = kernel[0]
    return v / v.sum()


def marginal(distribution: np.ndarray, sites) -> Any:
    """Probability that all ``sites`` (1-based) are occupied."""
    n = linalg.sites_of(distribution.shape[0])
    mask = sum(1 << (n - i) for i in sites)
    total = 0 * distribution[0]
    for b in range(1 << n):
        if b & mask == mask:
            total = total + distribution[b]
    return total
