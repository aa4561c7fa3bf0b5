"""Open symmetric simple exclusion process.

Particles hop between neighbouring sites with rate one. The left reservoir
injects at rate ``alpha`` and extracts at rate ``gamma``; the right one
injects at ``delta`` and extracts at ``beta``. Particles are magnons: a
configuration ``(m_1, ..., m_N)`` is the basis state of the same pattern.

The generator is similar to the triangular chain Hamiltonian under the site
factorized transform ``S_Gamma = Gamma x ... x Gamma``, which turns the
transformed reference state into the steady state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import chain, eigenmap, linalg, scalars
from .chain import BoundaryParams
from .errors import InvalidRates, SingularGamma, ZeroBeta
from .scalars import EXACT, FLOAT


@dataclass(frozen=True)
class ParamIdentification:
    p: Any
    q: Any
    delta: Any
    c0: Any
    c1: Any

    @property
    def boundary(self) -> BoundaryParams:
        return BoundaryParams(self.p, self.q, self.delta)


@dataclass(frozen=True)
class SSEPRates:
    alpha: Any
    beta: Any
    gamma: Any
    delta: Any

    @property
    def mode(self) -> str:
        return scalars.mode_of(self.alpha, self.beta, self.gamma, self.delta)

    def coerced(self) -> "SSEPRates":
        m = self.mode
        return SSEPRates(*(scalars.coerce(v, m) for v in self.as_tuple()))

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def validate(self, stochastic: bool = True) -> "SSEPRates":
        """Check the rates; returns the coerced rates.

        Stochastic rates are real and nonnegative. ``alpha + gamma`` and
        ``beta + delta`` must not vanish, otherwise Gamma does not exist.
        """
        r = self.coerced()
        if stochastic:
            for name, v in zip("alpha beta gamma delta".split(), r.as_tuple()):
                if r.mode == FLOAT and abs(complex(v).imag) > 0:
                    raise InvalidRates(f"{name} must be real")
                if (v.real if r.mode == FLOAT else v) < 0:
                    raise InvalidRates(f"{name} must be nonnegative, got {v}")
        if scalars.is_zero(r.alpha + r.gamma) or scalars.is_zero(r.beta + r.delta):
            raise SingularGamma("alpha + gamma and beta + delta must be nonzero")
        return r

    @property
    def rho_a(self):
        r = self.coerced()
        return r.alpha / (r.alpha + r.gamma)

    @property
    def rho_b(self):
        r = self.coerced()
        return r.delta / (r.beta + r.delta)

    def identification(self) -> ParamIdentification:
        """Triangular chain parameters and the affine map between generators."""
        r = self.validate(stochastic=False)
        a, b, g, d = r.as_tuple()
        return ParamIdentification(
            p=-(a + g),
            q=-(b + d),
            delta=2 * (a + g) * (a * b - g * d) / (b + d),
            c0=a + b + g + d,
            c1=scalars.coerce(2, r.mode),
        )


def _loc(op, site, n, mode):
    return linalg.local_operator(scalars.asarray(op, mode), site, n)


def markov_matrix(n: int, rates: SSEPRates) -> np.ndarray:
    """Generator acting on probability vectors; columns sum to zero."""
    linalg.check_sites(n)
    r = rates.coerced()
    mode = r.mode
    left = [[-r.alpha, r.gamma], [r.alpha, -r.gamma]]
    right = [[-r.delta, r.beta], [r.delta, -r.beta]]
    h = _loc(left, 1, n, mode) + _loc(right, n, n, mode)
    eye = scalars.eye(1 << n, mode)
    for k in range(1, n):
        h = h + chain.swap_operator(n, k, k + 1, mode) - eye
    return h


# transfer matrix -------------------------------------------------------------------


def k_left(x, rates: SSEPRates) -> np.ndarray:
    a, g = rates.alpha, rates.gamma
    u = x + 1
    return chain._mat([[1 + u * (g - a), 2 * u * g], [2 * u * a, 1 + u * (a - g)]], x, a, g)


def k_right(x, rates: SSEPRates) -> np.ndarray:
    b, d = rates.beta, rates.delta
    return chain._mat([[1 + x * (b - d), 2 * x * b], [2 * x * d, 1 + x * (d - b)]], x, b, d)


def ssep_transfer(x, n: int, rates: SSEPRates) -> np.ndarray:
    r = rates.coerced()
    return chain.open_transfer(x, n, k_left(x, r), k_right(x, r))


def ssep_transfer_apply(x, v: np.ndarray, rates: SSEPRates) -> np.ndarray:
    r = rates.coerced()
    return chain.open_transfer_apply(x, v, k_left(x, r), k_right(x, r))


def markov_from_transfer(n: int, rates: SSEPRates) -> np.ndarray:
    """``(d/dx log T~(x)|_0 - (2N - 1 + alpha + beta + gamma + delta)) / 2``."""
    r = rates.coerced()
    mode = r.mode
    _, logder = chain.log_derivative_at_zero(lambda x: ssep_transfer(x, n, r), n, mode)
    shift = 2 * n - 1 + r.alpha + r.beta + r.gamma + r.delta
    return (logder - scalars.eye(1 << n, mode) * shift) / 2


# similarity transform ----------------------------------------------------------------


def gamma_matrix(rates: SSEPRates) -> np.ndarray:
    r = rates.validate(stochastic=False)
    ag, bd = r.alpha + r.gamma, r.beta + r.delta
    return scalars.asarray([[-1 / ag, r.beta / bd], [1 / ag, r.delta / bd]], r.mode)


def gamma_inverse(rates: SSEPRates) -> np.ndarray:
    return linalg.inverse_2x2(gamma_matrix(rates))


def s_gamma_apply(v: np.ndarray, rates: SSEPRates, inverse: bool = False) -> np.ndarray:
    """Matrix-free ``S_Gamma v`` (or ``S_Gamma^{-1} v``), one site at a time."""
    g = gamma_inverse(rates) if inverse else gamma_matrix(rates)
    return linalg.product_apply(g, v)


def s_gamma(n: int, rates: SSEPRates, inverse: bool = False) -> np.ndarray:
    g = gamma_inverse(rates) if inverse else gamma_matrix(rates)
    return linalg.product_operator(g, n)


# steady state -------------------------------------------------------------------------


def steady_state(n: int, rates: SSEPRates, return_scale: bool = False):
    """Steady state ``S_Gamma |psi_N^Delta>`` normalized to total probability one.

    With ``return_scale`` also returns the factor the raw vector was divided by
    (one for the identified parameters).
    """
    r = rates.validate()
    vec = s_gamma_apply(eigenmap.transformed_reference(n, r.identification().boundary), r)
    total = vec.sum()
    out = vec / total
    return (out, total) if return_scale else out


def _check_beta(r: SSEPRates):
    if scalars.is_zero(r.beta) and not scalars.is_zero(r.delta):
        raise ZeroBeta("the closed form needs beta != 0 when delta != 0")


def _hole_weights(n: int, r: SSEPRates) -> dict:
    """``(1-rho_b)^(N-h) (rho_a-rho_b)^h prod_k (...)/(...)`` per hole set."""
    ia, ib = 1 / (r.alpha + r.gamma), 1 / (r.beta + r.delta)
    ra, rb = r.alpha * ia, r.delta * ib
    out = {}
    for h in range(n + 1):
        den = 1 + 0 * ia
        for k in range(1, h + 1):
            den = den * (n - k + ia + ib)
        pref = (1 - rb) ** (n - h) * (ra - rb) ** h / den
        for idx in itertools.combinations(range(1, n + 1), h):
            num = pref
            for k, i in enumerate(idx, start=1):
                num = num * (i + h - k - n - ib)
            out[idx] = num
    return out


def _config_tuple(config) -> tuple:
    if isinstance(config, str):
        return tuple(int(c) for c in config)
    return tuple(int(c) for c in config)


def _probability_from_weights(occ, weights, ratio):
    m = sum(occ)
    total = 0
    for idx, w in weights.items():
        s = sum(occ[i - 1] for i in idx)
        total = total + w * (-1) ** s * ratio ** (m - s)
    return total


def probability(config, rates: SSEPRates):
    """Closed-form steady-state probability of an occupation pattern."""
    occ = _config_tuple(config)
    r = rates.validate()
    _check_beta(r)
    ratio = r.delta / r.beta
    return _probability_from_weights(occ, _hole_weights(len(occ), r), ratio)


def probabilities(n: int, rates: SSEPRates) -> np.ndarray:
    """All ``2**N`` closed-form probabilities, indexed by basis index."""
    linalg.check_sites(n, dense=False)
    r = rates.validate()
    _check_beta(r)
    weights = _hole_weights(n, r)
    ratio = r.delta / r.beta
    out = scalars.zeros(1 << n, r.mode)
    for b in range(1 << n):
        out[b] = _probability_from_weights(linalg.occupations(b, n), weights, ratio)
    return out


def correlator(sites, n: int, rates: SSEPRates):
    """Closed-form k-point function ``<i_1 ... i_k>`` (all listed sites occupied)."""
    sites = tuple(int(i) for i in sites)
    if any(b <= a for a, b in zip(sites, sites[1:])) or (sites and not 1 <= sites[0] <= sites[-1] <= n):
        raise ValueError(f"sites must be strictly increasing within 1..{n}: {sites}")
    r = rates.validate()
    ia, ib = 1 / (r.alpha + r.gamma), 1 / (r.beta + r.delta)
    ra, rb = r.alpha * ia, r.delta * ib
    k = len(sites)
    total = 0 * ia
    for m in range(k + 1):
        inner = 0 * ia
        for ls in itertools.combinations(range(k), m):
            term = 1 + 0 * ia
            for rr, l in enumerate(ls, start=1):
                term = term * (sites[l] + m - rr - n - ib) / (n - rr + ia + ib)
            inner = inner + term
        total = total + (rb - ra) ** m * rb ** (k - m) * inner
    return total


def density(i: int, n: int, rates: SSEPRates):
    """Steady-state density at site ``i`` (linear profile between reservoirs)."""
    r = rates.validate()
    ia, ib = 1 / (r.alpha + r.gamma), 1 / (r.beta + r.delta)
    ra, rb = r.alpha * ia, r.delta * ib
    return (ra * (n + ib - i) + rb * (i - 1 + ia)) / (n + ia + ib - 1)


def density_profile(n: int, rates: SSEPRates) -> list:
    return [density(i, n, rates) for i in range(1, n + 1)]


def bernoulli(n: int, rho, mode: str = EXACT) -> np.ndarray:
    """Product measure ``(1-rho)^(N-m) rho^m``."""
    out = scalars.zeros(1 << n, mode)
    for b in range(1 << n):
        m = linalg.magnon_count(b)
        out[b] = (1 - rho) ** (n - m) * rho**m
    return out

