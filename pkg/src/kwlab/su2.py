"""Coefficient arithmetic for su(2) over the generator basis {t1, t2, t3}.

Conventions fixed here and consumed by every other module:

    [t_i, t_j] = eps_ijk t_k        (bracket = cross product on coefficients)
    <u, v>     = -tr(uv)            (fundamental representation, t_i = -(i/2) sigma_i)

so that <t_i, t_j> = delta_ij / 2 and |t_i|^2 = 1/2.  This normalisation is
what makes |omega|^2 = 3/2 for omega = sum_i t_i e_i and |mu_i| = 1 for the
antisymmetric basis of the middle isotypic component.

Coefficients may be exact (Fraction / int) for identity tests or floats for
numerics; all operations preserve the input arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Su2Element:
    """A Lie-algebra value c1*t1 + c2*t2 + c3*t3, stored as its coefficients."""

    coeffs: tuple

    def __add__(self, other: "Su2Element") -> "Su2Element":
        return Su2Element(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Su2Element") -> "Su2Element":
        return Su2Element(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Su2Element":
        return Su2Element(tuple(-a for a in self.coeffs))

    def __mul__(self, s) -> "Su2Element":
        return Su2Element(tuple(a * s for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)


T1 = Su2Element((Fraction(1), Fraction(0), Fraction(0)))
T2 = Su2Element((Fraction(0), Fraction(1), Fraction(0)))
T3 = Su2Element((Fraction(0), Fraction(0), Fraction(1)))
ZERO = Su2Element((Fraction(0), Fraction(0), Fraction(0)))


def su2(c1, c2, c3) -> Su2Element:
    return Su2Element((c1, c2, c3))


def bracket(u: Su2Element, v: Su2Element) -> Su2Element:
    """Lie bracket [u, v]; exact when the inputs are exact."""
    a, b = u.coeffs, v.coeffs
    return Su2Element(
        (
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    )


def inner(u: Su2Element, v: Su2Element):
    """Invariant inner product, normalised so <t_i, t_j> = delta_ij / 2."""
    s = sum(a * b for a, b in zip(u.coeffs, v.coeffs))
    if isinstance(s, (int, Fraction)):
        return Fraction(s, 2) if isinstance(s, int) else s / 2
    return s / 2


def norm_sq(u: Su2Element):
    return inner(u, u)


def norm(u: Su2Element) -> float:
    return math.sqrt(float(norm_sq(u)))


def ad_rotate(axis: Su2Element, angle: float, u: Su2Element) -> Su2Element:
    """Adjoint rotation of u about the given axis (Rodrigues formula).

    The adjoint action of SU(2) on su(2) is the SO(3) rotation of the
    coefficient vector; it preserves both bracket and inner product.
    """
    ax = [float(c) for c in axis.coeffs]
    nrm = math.sqrt(sum(c * c for c in ax))
    if nrm == 0.0:
        raise ValueError("degenerate rotation axis")
    n = [c / nrm for c in ax]
    uc = [float(c) for c in u.coeffs]
    c, s = math.cos(angle), math.sin(angle)
    ndotu = sum(a * b for a, b in zip(n, uc))
    ncross = [
        n[1] * uc[2] - n[2] * uc[1],
        n[2] * uc[0] - n[0] * uc[2],
        n[0] * uc[1] - n[1] * uc[0],
    ]
    return Su2Element(
        tuple(c * uc[k] + s * ncross[k] + (1 - c) * ndotu * n[k] for k in range(3))
    )
