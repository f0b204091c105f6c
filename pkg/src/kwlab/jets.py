"""Truncated-Taylor scalars for exact pointwise differentiation.

Jet2 propagates (value, first, second derivative) of a function of one
variable through arithmetic; Dual4 propagates a value and a 4-component
gradient for fields on a flat chart.  Both are dtype-agnostic: they work
with float, np.longdouble or Fraction coefficients, so closed-form profiles
can be evaluated in extended precision where residual tolerances demand it.
"""

from __future__ import annotations

import numpy as np


class Jet2:
    """Second-order jet (f, f', f'') of a scalar function of y."""

    __slots__ = ("f", "d1", "d2")

    def __init__(self, f, d1=0.0, d2=0.0):
        self.f = f
        self.d1 = d1
        self.d2 = d2

    @staticmethod
    def var(y):
        one = y * 0 + 1
        return Jet2(y, one, y * 0)

    def __add__(self, o):
        if isinstance(o, Jet2):
            return Jet2(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2)
        return Jet2(self.f + o, self.d1, self.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.f, -self.d1, -self.d2)

    def __sub__(self, o):
        return self + (-o if isinstance(o, Jet2) else -o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Jet2):
            return Jet2(
                self.f * o.f,
                self.f * o.d1 + self.d1 * o.f,
                self.f * o.d2 + 2 * self.d1 * o.d1 + self.d2 * o.f,
            )
        return Jet2(self.f * o, self.d1 * o, self.d2 * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Jet2):
            return self * o._reciprocal()
        return Jet2(self.f / o, self.d1 / o, self.d2 / o)

    def __rtruediv__(self, o):
        return self._reciprocal() * o

    def _reciprocal(self):
        inv = 1 / self.f
        d1 = -self.d1 * inv * inv
        d2 = (2 * self.d1 * self.d1 * inv - self.d2) * inv * inv
        return Jet2(inv, d1, d2)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("Jet2 powers must be nonnegative integers")
        out = Jet2(self.f * 0 + 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


class Dual4:
    """First-order dual number with a 4-component gradient (x1, x2, x3, y)."""

    __slots__ = ("f", "g")

    def __init__(self, f, g=None):
        self.f = f
        self.g = np.zeros(4, dtype=np.result_type(f)) if g is None else g

    @staticmethod
    def vars(x1, x2, x3, y):
        def mk(v, k):
            g = np.zeros(4, dtype=np.result_type(v))
            g[k] = 1
            return Dual4(v, g)

        return mk(x1, 0), mk(x2, 1), mk(x3, 2), mk(y, 3)

    def __add__(self, o):
        if isinstance(o, Dual4):
            return Dual4(self.f + o.f, self.g + o.g)
        return Dual4(self.f + o, self.g)

    __radd__ = __add__

    def __neg__(self):
        return Dual4(-self.f, -self.g)

    def __sub__(self, o):
        return self + (-o if isinstance(o, Dual4) else -o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Dual4):
            return Dual4(self.f * o.f, self.f * o.g + o.f * self.g)
        return Dual4(self.f * o, self.g * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual4):
            inv = 1 / o.f
            return Dual4(self.f * inv, (self.g - (self.f * inv) * o.g) * inv)
        return Dual4(self.f / o, self.g / o)

    def __rtruediv__(self, o):
        inv = 1 / self.f
        return Dual4(o * inv, -(o * inv * inv) * self.g)


def exp(x):
    if isinstance(x, Jet2):
        e = np.exp(x.f)
        return Jet2(e, e * x.d1, e * (x.d2 + x.d1 * x.d1))
    if isinstance(x, Dual4):
        e = np.exp(x.f)
        return Dual4(e, e * x.g)
    return np.exp(x)


def expm1(x):
    """exp(x) - 1, accurate near x = 0; derivatives coincide with exp."""
    if isinstance(x, Jet2):
        e = np.exp(x.f)
        return Jet2(np.expm1(x.f), e * x.d1, e * (x.d2 + x.d1 * x.d1))
    if isinstance(x, Dual4):
        return Dual4(np.expm1(x.f), np.exp(x.f) * x.g)
    return np.expm1(x)


def sqrt(x):
    if isinstance(x, Jet2):
        r = np.sqrt(x.f)
        d1 = x.d1 / (2 * r)
        d2 = x.d2 / (2 * r) - x.d1 * x.d1 / (4 * r * x.f)
        return Jet2(r, d1, d2)
    if isinstance(x, Dual4):
        r = np.sqrt(x.f)
        return Dual4(r, x.g / (2 * r))
    return np.sqrt(x)


def value(x):
    return x.f if isinstance(x, (Jet2, Dual4)) else x
