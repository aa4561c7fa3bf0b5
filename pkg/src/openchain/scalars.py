"""Scalar fields used throughout the package.

Two modes are supported:

``EXACT``
    Arbitrary precision rationals (:class:`fractions.Fraction`) stored in
    numpy object arrays. Every identity checked in exact mode is an equality.
``FLOAT``
    Double precision complex numbers stored in ``complex128`` arrays.

The mode of a computation is inferred from its scalar inputs: any Python or
numpy float/complex switches to ``FLOAT``, otherwise ``EXACT`` is used.

:class:`Jet` implements first order truncated expansions ``a + b*eps`` with
``eps**2 == 0``. Jets flow through the same (object array) code paths as the
plain scalars and deliver exact derivatives at a point.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)


def exact(value) -> Fraction:
    """Convert ``value`` to a Fraction.

    Accepts ints, Fractions, numpy integers and strings such as ``"-3/7"``.
    Floats are refused: binary floats rarely mean the rational they print as.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        return Fraction(int(value))
    if isinstance(value, (numbers.Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot represent {value!r} exactly")


def _is_floating(value) -> bool:
    if isinstance(value, Jet):
        return _is_floating(value.value) or _is_floating(value.deriv)
    if isinstance(value, np.ndarray):
        if value.dtype.kind in "fc":
            return True
        if value.dtype == object and value.size:
            return _is_floating(value.flat[0])
        return False
    return isinstance(value, (float, complex, np.floating, np.complexfloating))


def mode_of(*values) -> str:
    """Infer the scalar mode of a group of inputs (``None`` entries ignored)."""
    for v in values:
        if v is not None and _is_floating(v):
            return FLOAT
    return EXACT


def coerce(value, mode: str):
    if isinstance(value, Jet):
        return Jet(coerce(value.value, mode), coerce(value.deriv, mode))
    if mode == EXACT:
        return exact(value)
    if mode == FLOAT:
        return complex(value)
    raise ValueError(f"unknown scalar mode {mode!r}")


def dtype(mode: str):
    return object if mode == EXACT else np.complex128


def zeros(shape, mode: str) -> np.ndarray:
    if mode == EXACT:
        return np.full(shape, Fraction(0), dtype=object)
    return np.zeros(shape, dtype=np.complex128)


def eye(n: int, mode: str) -> np.ndarray:
    out = zeros((n, n), mode)
    one = Fraction(1) if mode == EXACT else 1.0
    for i in range(n):
        out[i, i] = one
    return out


def asarray(values, mode: str) -> np.ndarray:
    """Array of ``values`` converted entrywise to the field of ``mode``."""
    arr = np.asarray(values, dtype=object if mode == EXACT else None)
    if mode == EXACT:
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = coerce(v, EXACT)
        return out
    return np.asarray(values, dtype=np.complex128)


def is_zero(value) -> bool:
    if isinstance(value, Jet):
        return is_zero(value.value) and is_zero(value.deriv)
    return value == 0


def all_zero(arr: np.ndarray, tol: float = 0.0) -> bool:
    """True when every entry vanishes (exactly, or below ``tol`` in FLOAT)."""
    arr = np.asarray(arr)
    if arr.dtype == object:
        return all(v == 0 for v in arr.flat)
    if tol == 0.0:
        return not np.any(arr)
    return bool(np.max(np.abs(arr), initial=0.0) <= tol)


def _elementwise_with_arrays(method):
    # hand ndarray operands back to numpy so it broadcasts elementwise
    # instead of building a jet whose parts are arrays
    def wrapper(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return method(self, other)

    wrapper.__name__ = method.__name__
    return wrapper


class Jet:
    """First order jet ``value + deriv * eps`` with ``eps**2 == 0``."""

    __slots__ = ("value", "deriv")

    def __init__(self, value, deriv=0):
        self.value = value
        self.deriv = deriv

    @classmethod
    def variable(cls, at):
        """The identity function expanded at ``at``."""
        one = 1.0 if _is_floating(at) else Fraction(1)
        return cls(at, one)

    def __repr__(self):
        return f"Jet({self.value!r}, {self.deriv!r})"

    @staticmethod
    def _parts(other):
        if isinstance(other, Jet):
            return other.value, other.deriv
        return other, 0

    @_elementwise_with_arrays
    def __add__(self, other):
        a, b = self._parts(other)
        return Jet(self.value + a, self.deriv + b)

    __radd__ = __add__

    @_elementwise_with_arrays
    def __sub__(self, other):
        a, b = self._parts(other)
        return Jet(self.value - a, self.deriv - b)

    @_elementwise_with_arrays
    def __rsub__(self, other):
        a, b = self._parts(other)
        return Jet(a - self.value, b - self.deriv)

    def __neg__(self):
        return Jet(-self.value, -self.deriv)

    def __pos__(self):
        return self

    @_elementwise_with_arrays
    def __mul__(self, other):
        a, b = self._parts(other)
        return Jet(self.value * a, self.value * b + self.deriv * a)

    __rmul__ = __mul__

    @_elementwise_with_arrays
    def __truediv__(self, other):
        a, b = self._parts(other)
        return Jet(self.value / a, (self.deriv * a - self.value * b) / (a * a))

    @_elementwise_with_arrays
    def __rtruediv__(self, other):
        a, b = self._parts(other)
        v = self.value
        return Jet(a / v, (b * v - a * self.deriv) / (v * v))

    def __pow__(self, k):
        if not isinstance(k, numbers.Integral):
            return NotImplemented
        if k == 0:
            return Jet(self.value**0, 0 * self.deriv)
        if k < 0:
            return 1 / (self ** (-k))
        return Jet(self.value**k, k * self.value ** (k - 1) * self.deriv)

    def __eq__(self, other):
        a, b = self._parts(other)
        return self.value == a and self.deriv == b

    def __ne__(self, other):
        return not self == other

    __hash__ = None


def jet_parts(arr: np.ndarray):
    """Split an array that may contain Jets into (value, derivative) arrays.

    Plain entries count as constants (derivative zero). The output arrays keep
    the mode of the jet components: object for exact, complex128 for float.
    """
    arr = np.asarray(arr, dtype=object)
    vals = np.empty(arr.shape, dtype=object)
    ders = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, Jet):
            vals[idx], ders[idx] = v.value, v.deriv
        else:
            vals[idx], ders[idx] = v, 0 * v
    mode = mode_of(vals, ders) if arr.size else EXACT
    if mode == FLOAT:
        return vals.astype(np.complex128), ders.astype(np.complex128)
    return asarray(vals, EXACT), asarray(ders, EXACT)


def to_json(value):
    """Serialize a scalar: exact as ``"num/den"``, float as ``{"re", "im"}``."""
    if isinstance(value, (Fraction, numbers.Integral, np.integer)):
        f = exact(value)
        return f"{f.numerator}/{f.denominator}"
    c = complex(value)
    return {"re": c.real, "im": c.imag}


def from_json(obj):
    if isinstance(obj, str):
        return exact(obj)
    if isinstance(obj, dict):
        return complex(obj["re"], obj["im"])
    if isinstance(obj, int):
        return Fraction(obj)
    raise TypeError(f"not a serialized scalar: {obj!r}")
