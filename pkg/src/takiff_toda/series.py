"""Arithmetic in the truncated polynomial ring R[v]/<v^(N+1)>.

A :class:`Jet` holds the coefficients ``c_0..c_N`` of ``sum c_k v^k``.
Products silently drop every degree above ``N``, as in the quotient ring.
Inverse, square root, exponential and logarithm are computed by the usual
O(N^2) coefficient recursions rather than by Taylor expansion in ``a``.
"""

from __future__ import annotations

from numbers import Real
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import NonPositiveLeadingCoefficientError, NonUnitError, OrderMismatchError

UNIT_THRESHOLD = 1e-300


class Jet:
    """Element of R[v]/<v^(N+1)> with real coefficients."""

    __slots__ = ("coeffs",)
    __array_ufunc__ = None  # keep numpy scalars from broadcasting over Jets

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("Jet coefficients must be a non-empty 1-D sequence")
        arr.flags.writeable = False
        self.coeffs = arr

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, order):
        """The nilpotent generator ``v`` (zero when ``order == 0``)."""
        c = np.zeros(order + 1)
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    def __len__(self):
        return self.coeffs.shape[0]

    def __getitem__(self, k):
        return coeff(self, k)

    def __repr__(self):
        return f"Jet({self.coeffs.tolist()!r})"

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.order == other.order and bool(np.array_equal(self.coeffs, other.coeffs))
        if isinstance(other, Real):
            return self == Jet.constant(other, self.order)
        return NotImplemented

    __hash__ = None

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise OrderMismatchError(f"orders differ: {self.order} vs {other.order}")
            return other.coeffs
        if isinstance(other, Real):
            c = np.zeros_like(self.coeffs)
            c[0] = float(other)
            return c
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Jet(self.coeffs + c)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Jet(self.coeffs - c)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Jet(c - self.coeffs)

    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Real):
            return Jet(self.coeffs * float(other))
        if isinstance(other, Jet):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Jet(self.coeffs / float(other))
        if isinstance(other, Jet):
            return mul(self, inv(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return inv(self) * float(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        if n < 0:
            return inv(self) ** (-n)
        out = Jet.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                out = mul(out, base)
            base = mul(base, base)
            n >>= 1
        return out


def as_jet(x, order):
    """Promote a real to a constant Jet of the given order."""
    if isinstance(x, Jet):
        if x.order != order:
            raise OrderMismatchError(f"orders differ: {x.order} vs {order}")
        return x
    return Jet.constant(float(x), order)


def mul(a: Jet, b: Jet) -> Jet:
    if a.order != b.order:
        raise OrderMismatchError(f"orders differ: {a.order} vs {b.order}")
    return Jet(kernels.jet_mul(a.coeffs, b.coeffs))


def coeff(a: Jet, k: int) -> float:
    """Coefficient of ``v**k``."""
    if not 0 <= k <= a.order:
        raise IndexError(f"coefficient index {k} outside 0..{a.order}")
    return float(a.coeffs[k])


def inv(a: Jet) -> Jet:
    """Multiplicative inverse; ``a`` is a unit iff its constant term is nonzero."""
    if not abs(a.coeffs[0]) >= UNIT_THRESHOLD:
        raise NonUnitError(f"constant term {a.coeffs[0]!r} is not invertible")
    return Jet(kernels.jet_inv(a.coeffs))


def sqrt_unit(a: Jet) -> Jet:
    """Square root with positive constant term. Requires ``a_0 > 0``."""
    if not a.coeffs[0] > 0.0:
        raise NonPositiveLeadingCoefficientError(f"sqrt needs a_0 > 0, got {a.coeffs[0]!r}")
    return Jet(kernels.jet_sqrt(a.coeffs))


def exp(a: Jet) -> Jet:
    return Jet(kernels.jet_exp(a.coeffs))


def log_unit(a: Jet) -> Jet:
    """Inverse of :func:`exp` on series with positive constant term."""
    if not a.coeffs[0] > 0.0:
        raise NonPositiveLeadingCoefficientError(f"log needs a_0 > 0, got {a.coeffs[0]!r}")
    return Jet(kernels.jet_log(a.coeffs))


class Hyperbolics(NamedTuple):
    sinh: Jet
    cosh: Jet
    tanh: Jet
    sech: Jet


def hyperbolics(a: Jet) -> Hyperbolics:
    ep = exp(a)
    em = exp(-a)
    sinh = (ep - em) * 0.5
    cosh = (ep + em) * 0.5
    sech = inv(cosh)
    return Hyperbolics(sinh, cosh, mul(sinh, sech), sech)


def sinh(a: Jet) -> Jet:
    return hyperbolics(a).sinh


def cosh(a: Jet) -> Jet:
    return hyperbolics(a).cosh


def tanh(a: Jet) -> Jet:
    return hyperbolics(a).tanh


def sech(a: Jet) -> Jet:
    return hyperbolics(a).sech


def arccosh(a: Jet) -> Jet:
    """Principal arccosh, ``log(a + sqrt(a^2 - 1))``; needs ``a_0 > 1``."""
    if not a.coeffs[0] > 1.0:
        raise NonPositiveLeadingCoefficientError(f"arccosh needs a_0 > 1, got {a.coeffs[0]!r}")
    return log_unit(a + sqrt_unit(a * a - 1.0))
