"""Invariant suites shared by the ``verify`` command and the acceptance tests.

Every check takes its sizes, sample counts and tolerances as arguments and
returns a :class:`CheckResult`; nothing is hidden in module state. Random
points come from a caller supplied :class:`random.Random`.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bethe, chain, eigenmap, linalg, oracles, scalars, ssep
from .chain import BoundaryParams
from .errors import OpenChainError
from .scalars import EXACT
from .ssep import SSEPRates


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    count: int = 0
    failures: list = field(default_factory=list)
    worst: float | None = None
    seconds: float = 0.0

    def record(self, ok: bool, what: str = "", value: float | None = None):
        self.count += 1
        if value is not None:
            self.worst = value if self.worst is None else max(self.worst, value)
        if not ok:
            self.passed = False
            if len(self.failures) < 5:
                self.failures.append(what)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" worst={self.worst:.2e}" if self.worst is not None else ""
        return f"{status} {self.name}: {self.count} checks{extra} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "count": self.count,
            "worst": self.worst,
            "failures": self.failures,
            "seconds": round(self.seconds, 3),
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# random rational inputs --------------------------------------------------------------


def rand_rational(rng: random.Random, lo: int = -9, hi: int = 9, den: int = 9, nonzero: bool = True):
    while True:
        v = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if v or not nonzero:
            return v


def rand_rates(rng: random.Random, hi: int = 9) -> SSEPRates:
    """Positive rational rates with ``alpha beta != gamma delta``."""
    while True:
        r = SSEPRates(*(Fraction(rng.randint(1, hi), rng.randint(1, hi)) for _ in range(4)))
        if r.alpha * r.beta != r.gamma * r.delta:
            return r


def rand_params(rng: random.Random, n: int | None = None) -> BoundaryParams:
    """Nonzero rational ``(p, q, delta)`` away from the map coefficient poles."""
    while True:
        params = BoundaryParams(rand_rational(rng), rand_rational(rng), rand_rational(rng))
        if n is None:
            return params
        s = 1 / params.p + 1 / params.q
        if all(n - s - k != 0 for k in range(1, n + 1)) and all(
            2 * m - n - s - j != 0 for m in range(n + 1) for j in range(1, m + 1)
        ):
            return params


def _equal(a, b) -> bool:
    return scalars.all_zero(np.asarray(a, dtype=object) - np.asarray(b, dtype=object))


# 1 steady state ------------------------------------------------------------------------


@_timed
def check_steady_routes(sizes, trials: int, rng: random.Random) -> CheckResult:
    """Closed form, transformed reference, kernel and DEHP steady states agree exactly."""
    res = CheckResult("steady-state routes agree")
    for _ in range(trials):
        rates = rand_rates(rng)
        for n in sizes:
            closed = ssep.probabilities(n, rates)
            routes = {
                "transformed": ssep.steady_state(n, rates),
                "nullspace": oracles.nullspace_steady(n, rates),
                "dehp": oracles.dehp_distribution(n, rates),
            }
            for name, vec in routes.items():
                res.record(_equal(closed, vec), f"{name} differs at N={n}, rates={rates}")
    return res


# 2 eigen-equation -------------------------------------------------------------------------


@_timed
def check_transformed_reference(sizes, points: int, rng: random.Random) -> CheckResult:
    """``T_Delta(x) psi = Lambda_N(x) psi`` and ``H_Delta psi = (-p-q) psi`` exactly."""
    res = CheckResult("transformed reference eigen-equation")
    for n in sizes:
        params = rand_params(rng, n)
        psi = eigenmap.transformed_reference(n, params)
        for _ in range(points):
            x = rand_rational(rng)
            lam = chain.lambda_N(x, n, params.p, params.q)
            res.record(_equal(chain.transfer_apply(x, psi, params), psi * lam), f"T at N={n}, x={x}")
        h = chain.hamiltonian_triangular(n, params)
        res.record(_equal(h @ psi, psi * (-params.p - params.q)), f"energy at N={n}")
    return res


# 3 map consistency ------------------------------------------------------------------------


@_timed
def check_map_consistency(sizes, rng: random.Random) -> CheckResult:
    """Resolvent map at two points, large-x map and closed form coincide for m = N."""
    res = CheckResult("eigenvector maps coincide at m = N")
    for n in sizes:
        params = rand_params(rng, n)
        psi0 = chain.reference_state(n)
        closed = eigenmap.transformed_reference(n, params)
        limit = eigenmap.map_limit(psi0, n, params)
        res.record(_equal(limit, closed), f"map_limit at N={n}")
        # T_0(0) = T_0(-1) = 2 I: every sector resolvent is singular there
        xs = set()
        while len(xs) < 2:
            x = rand_rational(rng)
            if x not in (0, -1):
                xs.add(x)
        for x in sorted(xs):
            try:
                out = eigenmap.map_resolvent(psi0, n, x, params)
            except OpenChainError as exc:
                res.record(False, f"map_resolvent at N={n}, x={x}: {exc.code}")
                continue
            res.record(_equal(out, closed), f"map_resolvent at N={n}, x={x}")
    return res


# 4 generic sectors ------------------------------------------------------------------------


def _relative_residual(op_apply, v, lam) -> float:
    w = op_apply(v)
    return float(np.linalg.norm(w - lam * v) / np.linalg.norm(v))


@_timed
def check_generic_map(sizes, params: BoundaryParams, x0: float, x: float, tol: float) -> CheckResult:
    """Float: every diagonal eigenvector mapped by ``map_limit`` solves the triangular problem."""
    res = CheckResult("generic-sector map residual")
    diag = params.diagonal()
    for n in sizes:
        t0 = chain.transfer(x0, n, diag)
        for m in range(n + 1):
            for _, psi in linalg.sector_eig(t0, m):
                lam = bethe.eigenvalue_function(psi, params)(x)
                v = eigenmap.map_limit(psi, m, params)
                r = _relative_residual(lambda u: chain.transfer_apply(x, u, params), v, lam)
                res.record(r < tol, f"N={n}, m={m}: residual {r:.2e}", r)
    return res


# 5 Hasse combinatorics ------------------------------------------------------------------------


def mutated_filling(config, i, q):
    """Filling function with the sign of ``q`` flipped (harness sanity mode)."""
    return eigenmap.filling_function(config, i, -q)


@_timed
def check_hasse(max_n: int, random_n: int, random_count: int, max_random_h: int, q_samples: int, rng: random.Random, mutate: bool = False) -> CheckResult:
    """Closed form, path sum and recursion agree; the worked filling value holds."""
    res = CheckResult("Hasse element methods agree" + (" (mutated)" if mutate else ""))
    filling = mutated_filling if mutate else eigenmap.filling_function

    def compare(cfg, q):
        c = eigenmap.hasse_element(cfg, q, "closed")
        p = eigenmap.hasse_element(cfg, q, "permsum", filling)
        r = eigenmap.hasse_element(cfg, q, "recursion", filling)
        res.record(c == p == r, f"{cfg.indices} on N={cfg.n}, q={q}")

    for n in range(1, max_n + 1):
        q = rand_rational(rng)
        for cfg in eigenmap.HoleConfig.all(n):
            compare(cfg, q)
    for _ in range(random_count):
        h = rng.randint(0, max_random_h)
        cfg = eigenmap.HoleConfig(tuple(sorted(rng.sample(range(1, random_n + 1), h))), random_n)
        compare(cfg, rand_rational(rng))
    cfg = eigenmap.HoleConfig((2, 3), 3)
    for _ in range(q_samples):
        q = rand_rational(rng)
        res.record(filling(cfg, 1, q) == 2 * (1 + 2 * q), f"F(2,3;1) at q={q}")
    return res


# 6 structural identities ---------------------------------------------------------------------


def partial_transpose(op: np.ndarray, space: int, n_spaces: int) -> np.ndarray:
    """Transpose of ``op`` in one two-dimensional tensor factor."""
    t = op.reshape((2,) * (2 * n_spaces))
    t = np.swapaxes(t, space, n_spaces + space)
    return t.reshape(op.shape)


def _embed(op2, space, n_spaces, mode):
    return linalg.local_operator(scalars.asarray(op2, mode), space + 1, n_spaces)


def _structural(rng, n, mode=EXACT):
    x, y, z = rand_rational(rng), rand_rational(rng), rand_rational(rng)
    params = rand_params(rng)
    out = {}
    # R_{12}(x-y) R_{13}(x) R_{23}(y) = R_{23}(y) R_{13}(x) R_{12}(x-y)
    lhs = chain.dense_product(3, [("R", x - y, 0, 1), ("R", x, 0, 2), ("R", y, 1, 2)], x, y)
    rhs = chain.dense_product(3, [("R", y, 1, 2), ("R", x, 0, 2), ("R", x - y, 0, 1)], x, y)
    out["Yang-Baxter"] = _equal(lhs, rhs)
    # reflection equation for the diagonal K-matrix
    kx, ky = chain.k_hat(x, params.q), chain.k_hat(y, params.q)
    lhs = chain.dense_product(2, [("R", x - y, 0, 1), ("K", kx, 0), ("R", x + y, 0, 1), ("K", ky, 1)], x, y)
    rhs = chain.dense_product(2, [("K", ky, 1), ("R", x + y, 0, 1), ("K", kx, 0), ("R", x - y, 0, 1)], x, y)
    out["reflection equation"] = _equal(lhs, rhs)
    # R_ab(x-y) M_a(x) M_b(y) = M_b(y) M_a(x) R_ab(x-y), sites on spaces 2..N+1
    ma, mb = chain.monodromy_factors(x, n, 0, 2), chain.monodromy_factors(y, n, 1, 2)
    lhs = chain.dense_product(n + 2, [("R", x - y, 0, 1)] + ma + mb, x, y)
    rhs = chain.dense_product(n + 2, mb + ma + [("R", x - y, 0, 1)], x, y)
    out["RTT"] = _equal(lhs, rhs)
    # M^_a(x) R_ab(x+y) M_b(y) = M_b(y) R_ab(x+y) M^_a(x)
    mha = chain.monodromy_factors(x, n, 0, 2, reverse=True)
    lhs = chain.dense_product(n + 2, mha + [("R", x + y, 0, 1)] + mb, x, y)
    rhs = chain.dense_product(n + 2, mb + [("R", x + y, 0, 1)] + mha, x, y)
    out["hatted RTT"] = _equal(lhs, rhs)
    # R(z) = J R^{t_a}(-z-1) J on space a, J = [[0,1],[-1,0]]
    j = _embed([[0, 1], [-1, 0]], 0, 2, EXACT)
    out["crossing"] = _equal(chain.r_matrix(z), j @ partial_transpose(chain.r_matrix(-z - 1), 0, 2) @ j)
    # M_a^{t_a}(x) = (-1)^{N-1} J' M^_a(-x-1) J', J' = [[0,-1],[1,0]]
    jp = _embed([[0, -1], [1, 0]], 0, n + 1, EXACT)
    m = chain.dense_product(n + 1, chain.monodromy_factors(x, n), x)
    mh = chain.dense_product(n + 1, chain.monodromy_factors(-x - 1, n, reverse=True), x)
    out["monodromy transpose"] = _equal(partial_transpose(m, 0, n + 1), jp @ mh @ jp * (-1) ** (n - 1))
    # transfer matrices
    tx, ty = chain.transfer(x, n, params), chain.transfer(y, n, params)
    out["commuting transfer"] = _equal(tx @ ty, ty @ tx)
    t0 = chain.transfer(x, n, params.diagonal())
    c = chain.double_row(x, n, params.q).c
    out["transfer split"] = _equal(tx, t0 + c * (params.delta * (x + 1)))
    rates = rand_rates(rng)
    idn = rates.identification()
    tt = ssep.ssep_transfer(x, n, rates)
    td = chain.transfer(x, n, idn.boundary)
    out["similarity of transfer"] = _equal(ssep.s_gamma(n, rates, inverse=True) @ tt @ ssep.s_gamma(n, rates), td)
    out["generator from transfer"] = _equal(ssep.markov_from_transfer(n, rates), ssep.markov_matrix(n, rates))
    out["Hamiltonian two ways"] = _equal(chain.hamiltonian_explicit(n, params), chain.hamiltonian_from_transfer(n, params))
    return out


@_timed
def check_structural(sizes, trials: int, rng: random.Random) -> CheckResult:
    """Yang-Baxter type identities, transfer matrix relations and the Hamiltonian."""
    res = CheckResult("structural identities")
    for n in sizes:
        for _ in range(trials):
            for name, ok in _structural(rng, n).items():
                res.record(ok, f"{name} at N={n}")
    return res


# 7 observables ------------------------------------------------------------------------------


@_timed
def check_observables(sizes, trials: int, rng: random.Random) -> CheckResult:
    """Density formula, one-point correlator and kernel marginals agree; special cases."""
    res = CheckResult("closed-form observables")
    for n in sizes:
        for _ in range(trials):
            rates = rand_rates(rng)
            dist = oracles.nullspace_steady(n, rates)
            for i in range(1, n + 1):
                d = ssep.density(i, n, rates)
                res.record(d == ssep.correlator((i,), n, rates) == oracles.marginal(dist, (i,)), f"site {i}, N={n}")
        # equal reservoir densities
        rho = Fraction(rng.randint(1, 8), 9)
        a = Fraction(rng.randint(1, 9))
        g = a * (1 - rho) / rho
        b = Fraction(rng.randint(1, 9))
        d = b * rho / (1 - rho)
        rates = SSEPRates(a, b, g, d)
        res.record(_equal(ssep.probabilities(n, rates), ssep.bernoulli(n, rho)), f"Bernoulli at N={n}")
    rates = SSEPRates(1, 1, 0, 0)
    expect = [Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)]
    nul = oracles.nullspace_steady(3, rates)
    res.record(ssep.density_profile(3, rates) == expect, "profile for alpha=beta=1, gamma=delta=0")
    res.record([oracles.marginal(nul, (i,)) for i in (1, 2, 3)] == expect, "kernel marginals for alpha=beta=1")
    return res


# 8 Bethe ansatz ------------------------------------------------------------------------------


@_timed
def check_bethe(sizes, max_roots: int, params_list, x0: float, tol_residual: float, tol_eigenvalue: float, tol_vector: float) -> CheckResult:
    """Float: solved Bethe roots, their TQ eigenvalue and Bethe vector for every sector state."""
    res = CheckResult("Bethe ansatz and TQ relation")
    for p, q in params_list:
        params = BoundaryParams(p, q)
        for n in sizes:
            t0 = chain.transfer(x0, n, params)
            for ref in bethe.Reference:
                for m in range(1, min(max_roots, n) + 1):
                    sector = m if ref is bethe.Reference.MINUS else n - m
                    eigs = linalg.sector_eig(t0, sector)
                    for lam0, psi in eigs:
                        tag = f"N={n}, {ref.value}, m={m}, p={p}, q={q}, lambda={lam0:.6g}"
                        seeds = bethe.roots_from_eigenvalue(bethe.eigenvalue_function(psi, params), n, p, q, m, ref)
                        try:
                            rs = bethe.newton_solve_bethe(seeds, n, p, q, ref, tol=tol_residual)
                        except OpenChainError as exc:
                            res.record(False, f"{tag}: {exc.code}")
                            continue
                        r = max(abs(v) for v in bethe.bethe_residual(rs, n, p, q))
                        res.record(r < tol_residual and bethe.is_admissible(rs), f"{tag}: residual {r:.2e}", r)
                        lam = bethe.tq_eigenvalue(x0, rs, n, p, q)
                        gap = min(abs(lam - e) for e, _ in eigs)
                        res.record(gap < tol_eigenvalue, f"{tag}: TQ misses the sector spectrum by {gap:.2e}")
                        v = bethe.bethe_vector(rs, n, p, q)
                        rv = _relative_residual(lambda u: t0 @ u, v, lam)
                        res.record(rv < tol_vector, f"{tag}: vector residual {rv:.2e}")
    return res


# 9 spectrum map -------------------------------------------------------------------------------


def _sorted_spectrum(mat: np.ndarray) -> np.ndarray:
    ev = np.linalg.eigvals(mat.astype(np.complex128))
    return ev[np.lexsort((np.round(ev.imag, 8), np.round(ev.real, 8)))]


@_timed
def check_spectrum_map(sizes, trials: int, rng: random.Random, tol: float) -> CheckResult:
    """Float: spectrum of the generator is ``(E - c0)/c1`` of the triangular Hamiltonian."""
    res = CheckResult("generator spectrum from triangular spectrum")
    for n in sizes:
        for _ in range(trials):
            rates = SSEPRates(*(rng.uniform(0.1, 2.0) for _ in range(4)))
            idn = rates.identification()
            gen = _sorted_spectrum(ssep.markov_matrix(n, rates))
            tri = _sorted_spectrum(chain.hamiltonian_explicit(n, idn.boundary))
            mapped = (tri - idn.c0) / idn.c1
            mapped = mapped[np.lexsort((np.round(mapped.imag, 8), np.round(mapped.real, 8)))]
            err = float(np.max(np.abs(gen - mapped)))
            res.record(err < tol, f"N={n}, rates={rates.as_tuple()}: {err:.2e}", err)
    return res


# suites -----------------------------------------------------------------------------------------


def exact_suite(n: int, rng: random.Random, mutate: bool = False) -> list:
    """Exact invariants at sizes up to ``n`` (the ``verify`` default)."""
    sizes = range(1, n + 1)
    return [
        check_steady_routes(sizes, 3, rng),
        check_transformed_reference(sizes, 3, rng),
        check_map_consistency(sizes, rng),
        check_hasse(min(n, 5), max(n, 2), 20, min(n, 6), 10, rng, mutate=mutate),
        check_structural(range(1, min(n, 4) + 1), 1, rng),
        check_observables(sizes, 2, rng),
    ]


def float_suite(n: int, rng: random.Random) -> list:
    """Floating point invariants at size ``n``."""
    params = BoundaryParams(0.3, 0.7, 0.9)
    # ||T(x)|| grows like (1+x)^(2N); x = 0.2 keeps the double-precision floor
    # eps * ||T|| well under the tolerance up to N = 8
    return [
        check_generic_map([n], params, 0.37, 0.2, 1e-10),
        check_spectrum_map([n], 2, rng, 1e-10),
        check_bethe([min(n, 3)], 2, [(0.5, 0.5), (0.3, 0.7)], 0.37, 1e-12, 1e-8, 1e-10),
    ]
