"""Algebraic Bethe ansatz for the diagonal chain.

Two reference states are available. ``PLUS`` excitations are created by
``C(x)`` on the all-magnon state and remove magnons; ``MINUS`` excitations are
created by ``B(x)`` on the empty state and add magnons.

With ``s = +1`` for ``MINUS`` and ``s = -1`` for ``PLUS`` the Bethe equations
read

    (1 + s x_i p)(1 + s x_i q)(x_i + 1)^{2N} / ((1 - s(x_i+1)p)(1 - s(x_i+1)q) x_i^{2N})
        = prod_{k != i} (x_i - x_k + 1)(x_i + x_k + 2) / ((x_i - x_k - 1)(x_i + x_k))

and the eigenvalue follows from the TQ relation with the same boundary
factors. ``PLUS`` with no roots reproduces the all-magnon eigenvalue
``Lambda_N`` and ``MINUS`` with no roots the vacuum eigenvalue.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath
import numpy as np

from . import chain, linalg, scalars
from .errors import JacobianSingular, MaxIterations, PoleHit, QZero
from .scalars import FLOAT, Jet


class Reference(enum.Enum):
    PLUS = "PLUS"
    MINUS = "MINUS"

    @property
    def sign(self) -> int:
        return 1 if self is Reference.MINUS else -1


def _reference(ref) -> Reference:
    return ref if isinstance(ref, Reference) else Reference(str(ref).upper())


@dataclass(frozen=True)
class BetheRootSet:
    """Bethe roots ``x_1, ..., x_m`` with respect to a reference state."""

    roots: tuple
    reference: Reference = Reference.MINUS

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        object.__setattr__(self, "reference", _reference(self.reference))
        rs = self.roots
        for i, a in enumerate(rs):
            # x = -1/2 pairs a root with itself and squares a factor of Q
            if scalars.is_zero(2 * a + 1):
                raise ValueError("root -1/2 is its own partner under x -> -x-1")
            for b in rs[i + 1 :]:
                if scalars.is_zero(a - b):
                    raise ValueError(f"repeated root {a}")
                if scalars.is_zero(a + b + 1):
                    raise ValueError(f"roots {a} and {b} are related by x -> -x-1")

    @property
    def m(self) -> int:
        return len(self.roots)

    @property
    def mode(self) -> str:
        return scalars.mode_of(*self.roots)

    def sector(self, n: int) -> int:
        """Magnon number of the Bethe vector on ``n`` sites."""
        if self.m > n:
            raise ValueError(f"{self.m} roots exceed {n} sites")
        return n - self.m if self.reference is Reference.PLUS else self.m

    def to_json(self) -> dict:
        return {"reference": self.reference.value, "roots": [scalars.to_json(r) for r in self.roots]}

    @classmethod
    def from_json(cls, obj: dict) -> "BetheRootSet":
        return cls(tuple(scalars.from_json(r) for r in obj["roots"]), obj["reference"])


def q_function(x, rs: BetheRootSet):
    """``Q(x) = prod_i (x - x_i)(x + x_i + 1)``."""
    out = 1 + 0 * x
    for r in rs.roots:
        out = out * (x - r) * (x + r + 1)
    return out


def _boundary_factors(x, n, p, q, sign):
    up = (1 + sign * x * p) * (1 + sign * x * q)
    down = (1 - sign * (x + 1) * p) * (1 - sign * (x + 1) * q)
    return up, down


def _value(x):
    return x.value if isinstance(x, Jet) else x


def _bethe_sides(roots, n: int, p, q, sign: int):
    """``(LHS_i, RHS_i)`` for each root; roots may be jets."""
    sides = []
    for i, xi in enumerate(roots):
        up, down = _boundary_factors(xi, n, p, q, sign)
        lden = down * xi ** (2 * n)
        num = 1 + 0 * xi
        den = 1 + 0 * xi
        for k, xk in enumerate(roots):
            if k != i:
                num = num * (xi - xk + 1) * (xi + xk + 2)
                den = den * (xi - xk - 1) * (xi + xk)
        if scalars.is_zero(_value(lden)) or scalars.is_zero(_value(den)):
            raise PoleHit(f"root {_value(xi)} sits on a pole of the Bethe equations")
        sides.append((up * (xi + 1) ** (2 * n) / lden, num / den))
    return sides


# float roots are dyadic rationals; sides are evaluated with this many digits
# so a reported residual belongs to the roots rather than to the rounding
RESIDUAL_DIGITS = 40


def _mp(v):
    return mpmath.mpc(complex(v))


def bethe_residual(rs: BetheRootSet, n: int, p, q) -> list:
    """``LHS_i - RHS_i`` of the Bethe equations; all zero when on-shell.

    Exact for rational input. Float input is evaluated at
    ``RESIDUAL_DIGITS`` digits and returned as complex numbers.
    """
    if rs.m > n:
        raise ValueError(f"{rs.m} roots exceed {n} sites")
    sign = rs.reference.sign
    if scalars.mode_of(*rs.roots, p, q) == FLOAT:
        with mpmath.workdps(RESIDUAL_DIGITS):
            sides = _bethe_sides([_mp(r) for r in rs.roots], n, _mp(p), _mp(q), sign)
            return [complex(lhs - rhs) for lhs, rhs in sides]
    return [lhs - rhs for lhs, rhs in _bethe_sides(rs.roots, n, p, q, sign)]


def tq_eigenvalue(x, rs: BetheRootSet, n: int, p, q):
    """Transfer matrix eigenvalue from the TQ relation at ``x``."""
    qx = q_function(x, rs)
    if scalars.is_zero(qx):
        raise QZero(f"Q vanishes at x = {x}")
    if scalars.is_zero(2 * x + 1):
        raise PoleHit("the TQ relation has a removable pole at x = -1/2")
    up, down = _boundary_factors(x, n, p, q, rs.reference.sign)
    first = up * (x + 1) ** (2 * n + 1) * q_function(x - 1, rs)
    second = down * x ** (2 * n + 1) * q_function(x + 1, rs)
    return 2 * (first + second) / ((2 * x + 1) * qx)


def _fresh_nodes(rs, count, mode):
    # rational nodes kept away from the zeros of Q and from x = -1/2
    zeros = [complex(r) for r in rs.roots] + [complex(-r - 1) for r in rs.roots] + [-0.5]
    nodes = []
    k = 1
    while len(nodes) < count:
        x = scalars.coerce(k, mode) / 3 if k % 2 else -scalars.coerce(k, mode) / 5
        k += 1
        if min(abs(complex(x) - z) for z in zeros) > 1e-3:
            nodes.append(x)
    return nodes


def tq_polynomial(rs: BetheRootSet, n: int, p, q, tol: float = 1e-9):
    """Coefficients of ``Lambda(x)`` if it is a polynomial, else ``None``.

    Interpolates through ``2N + 3`` points (degree ``2N + 2``) and compares the
    interpolant with the TQ value at a further point. Exact for rational roots;
    ``tol`` is relative in float mode.
    """
    mode = scalars.mode_of(*rs.roots, p, q)
    nodes = _fresh_nodes(rs, 2 * n + 4, mode)
    vals = [tq_eigenvalue(x, rs, n, p, q) for x in nodes]
    coeffs = linalg.polynomial_coefficients(nodes[:-1], np.array(vals[:-1], dtype=object))
    pred = chain.horner(coeffs, nodes[-1])
    diff = pred - vals[-1]
    if mode == FLOAT:
        ok = abs(complex(diff)) <= tol * max(1.0, abs(complex(vals[-1])))
    else:
        ok = scalars.is_zero(diff)
    return coeffs if ok else None


def bethe_vector(rs: BetheRootSet, n: int, p, q) -> np.ndarray:
    """Unnormalized ``C(x_1)...C(x_m)|all magnons>`` or ``B(x_1)...B(x_m)|vacuum>``."""
    mode = scalars.mode_of(*rs.roots, p, q)
    rs.sector(n)
    plus = rs.reference is Reference.PLUS
    v = chain.reference_state(n, filled=plus, mode=mode)
    row, col = (1, 0) if plus else (0, 1)
    q = scalars.coerce(q, mode)
    for x in reversed(rs.roots):
        v = chain.double_row_apply(scalars.coerce(x, mode), v, q, row, col)
    return v


# Newton solver ---------------------------------------------------------------------


def _log_system(roots, n, p, q, sign, log=np.log):
    """``log(LHS_i / RHS_i)`` and its Jacobian (via jets, one root at a time)."""
    m = len(roots)
    f = [log(lhs / rhs) for lhs, rhs in _bethe_sides(roots, n, p, q, sign)]
    jac = [[None] * m for _ in range(m)]
    for j in range(m):
        shifted = list(roots)
        shifted[j] = Jet(roots[j], 1 + 0 * roots[j])
        for i, (lhs, rhs) in enumerate(_bethe_sides(shifted, n, p, q, sign)):
            ratio = lhs / rhs
            jac[i][j] = ratio.deriv / ratio.value
    return f, jac


def _polish(roots, n, p, q, sign, steps=3):
    # a few extended precision Newton steps; rounding the result to double
    # gives the best representable roots
    with mpmath.workdps(RESIDUAL_DIGITS):
        xs = [_mp(r) for r in roots]
        pm, qm = _mp(p), _mp(q)
        for _ in range(steps):
            f, jac = _log_system(xs, n, pm, qm, sign, log=mpmath.log)
            step = mpmath.lu_solve(mpmath.matrix(jac), mpmath.matrix(f))
            xs = [x - d for x, d in zip(xs, step)]
        return [complex(x) for x in xs]


def _small_side_representatives(roots, n, p, q, sign):
    # x -> -x-1 leaves Q unchanged and inverts both sides of that root's
    # equation; picking |LHS_i| <= 1 keeps the absolute residual at rounding
    # level instead of scaling with a large LHS
    out = list(roots)
    for i, (lhs, _) in enumerate(_bethe_sides(roots, n, p, q, sign)):
        if abs(lhs) > 1:
            out[i] = -out[i] - 1
    return out


def newton_solve_bethe(
    initial,
    n: int,
    p,
    q,
    reference=Reference.MINUS,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> BetheRootSet:
    """Solve the Bethe equations by Newton iteration on their logarithm.

    Double precision steps bring ``|log(LHS_i / RHS_i)|`` to rounding level,
    each root is replaced by the partner ``-x-1`` whose side has modulus at
    most one, a short extended precision polish follows, and the result is accepted
    once every ``|LHS_i - RHS_i|`` (see :func:`bethe_residual`) is below
    ``tol``.
    """
    ref = _reference(reference)
    roots = [complex(x) for x in initial]
    if not roots:
        return BetheRootSet((), ref)
    p, q = complex(p), complex(q)
    for _ in range(max_iter):
        f, jac = _log_system(roots, n, p, q, ref.sign)
        jac = np.array(jac, dtype=np.complex128)
        if np.linalg.cond(jac) > 1e14:
            raise JacobianSingular("Bethe Jacobian is singular")
        step = np.linalg.solve(jac, np.array(f, dtype=np.complex128))
        roots = [r - s for r, s in zip(roots, step)]
        if max(abs(s) for s in step) < 1e-13 * max(1.0, max(abs(r) for r in roots)):
            break
    else:
        raise MaxIterations(f"no convergence within {max_iter} Newton steps")
    roots = _polish(_small_side_representatives(roots, n, p, q, ref.sign), n, p, q, ref.sign)
    rs = BetheRootSet(tuple(roots), ref)
    if max(abs(r) for r in bethe_residual(rs, n, p, q)) >= tol:
        raise MaxIterations(f"Bethe residual above {tol} after polishing")
    return rs


def single_root_candidates(n: int, p, q, reference=Reference.MINUS) -> list:
    """All admissible one-root solutions, from the polynomial form of the equation.

    The spurious root ``-1/2`` is dropped and of each pair ``(x, -x-1)`` only
    the member with larger real part is kept.
    """
    sign = _reference(reference).sign
    p, q = complex(p), complex(q)
    xp = np.polynomial.Polynomial([0, 1])
    up, down = _boundary_factors(xp, n, p, q, sign)
    poly = up * (xp + 1) ** (2 * n) - down * xp ** (2 * n)
    out = []
    for r in poly.roots():
        if abs(2 * r + 1) < 1e-8 or abs(r) < 1e-8 or abs(r + 1) < 1e-8:
            continue
        r = r if r.real >= -0.5 else -r - 1
        if all(abs(r - s) > 1e-6 and abs(r + s + 1) > 1e-6 for s in out):
            out.append(complex(r))
    return out


def is_admissible(rs: BetheRootSet, tol: float = 1e-6, bound: float = 1e6) -> bool:
    """Float screen for physical root sets.

    Newton also converges to degenerate configurations: roots at ``-1/2``,
    coinciding roots, partner pairs ``x_j = -x_i - 1`` or roots drifting off to
    infinity. None of these yields a Bethe vector.
    """
    xs = [complex(r) for r in rs.roots]
    for i, a in enumerate(xs):
        if abs(a) > bound or abs(2 * a + 1) < tol or abs(a) < tol or abs(a + 1) < tol:
            return False
        for b in xs[i + 1 :]:
            if abs(a - b) < tol or abs(a + b + 1) < tol:
                return False
    return True


def roots_from_eigenvalue(lam, n: int, p, q, m: int, reference=Reference.MINUS) -> list:
    """Float Bethe roots whose TQ relation reproduces the eigenvalue ``lam(x)``.

    ``Q`` is a monic degree ``m`` polynomial in ``u = x(x+1)`` and the TQ
    relation multiplied by ``Q(x)`` is linear in its coefficients, so they
    follow from a least-squares fit over sample points; the roots ``u_i``
    give ``x_i = (-1 + sqrt(1 + 4 u_i)) / 2``. Useful as Newton seeds.
    """
    if m == 0:
        return []
    sign = _reference(reference).sign
    p, q = complex(p), complex(q)
    xs = np.linspace(0.15, 1.35, 4 * m + 2 * n + 6)
    rows, rhs = [], []
    for x in xs:
        up, down = _boundary_factors(x, n, p, q, sign)
        a = up * (x + 1) ** (2 * n + 1)
        b = down * x ** (2 * n + 1)
        c = -complex(lam(x)) * (2 * x + 1) / 2
        u0, um, up1 = x * (x + 1), (x - 1) * x, (x + 1) * (x + 2)
        # coefficient k multiplies u^k; k = m is the monic term
        terms = [a * um**k + b * up1**k + c * u0**k for k in range(m + 1)]
        rows.append(terms[:m])
        rhs.append(-terms[m])
    coef, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    us = np.polynomial.Polynomial(list(coef) + [1.0]).roots()
    return [complex((-1 + np.sqrt(1 + 4 * u)) / 2) for u in us]


def eigenvalue_function(psi: np.ndarray, params) -> callable:
    """``x -> Lambda(x)`` read off from ``T_0(x) psi`` for an eigenvector ``psi``."""
    j = int(np.argmax(np.abs(psi)))
    diag = params.diagonal()
    return lambda x: chain.transfer_apply(x, psi, diag)[j] / psi[j]
