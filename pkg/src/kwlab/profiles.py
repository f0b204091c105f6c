"""y-profiles of invariant fields and the closed-form reference solutions.

An invariant configuration on S^3 x R+ is a triple of profiles: a 3x3
connection coefficient matrix a(y) (gauge A_y = 0), a 3x3 tangential Higgs
matrix p(y), and optionally an su(2)-valued phi_y(y).  Profiles are sums of
scalar functions times constant matrices, evaluated through second-order
jets so that first (and second, for phi_y) derivatives are exact; sampled
data is accessed through not-a-knot cubic splines.

The closed-form reference solution has scalar profiles

    a(y) = 6(1+v) / (v^2 + 6v + 6),          v = expm1(2y),
    b(y) = 6(1+v)(2+v) / (v (v^2 + 6v + 6)),

times omega.  It carries the Nahm pole b ~ 1/y at y = 0 and decays like
6 e^{-2y} toward the trivial flat connection; the alternate variant shares b
but has a -> 2, landing on a gauge image of the flat connection instead.
Profiles are evaluated in extended precision (np.longdouble) by default:
near y ~ 1e-3 the residual algebra cancels terms of size b^2 ~ 1e6, which
float64 rounding alone would contaminate at the 1e-10 level.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import jets
from .jets import Jet2


@dataclass
class MatrixProfile:
    """Sum of scalar-profile * constant-matrix terms; eval -> (value, d/dy)."""

    terms: list  # [(scalar_fn taking Jet2, 3x3 matrix), ...]

    def eval(self, y, dtype=np.longdouble):
        jy = Jet2.var(dtype(y))
        val = None
        der = None
        for fn, mat in self.terms:
            j = fn(jy)
            v = j.f * mat
            d = j.d1 * mat
            val = v if val is None else val + v
            der = d if der is None else der + d
        return val, der


@dataclass
class VectorProfile:
    """su(2)-valued profile; eval -> (w, w', w'')."""

    terms: list  # [(scalar_fn taking Jet2, length-3 vector), ...]

    def eval(self, y, dtype=float):
        jy = Jet2.var(dtype(y))
        w = np.zeros(3, dtype=dtype)
        dw = np.zeros(3, dtype=dtype)
        ddw = np.zeros(3, dtype=dtype)
        for fn, vec in self.terms:
            j = fn(jy)
            vec = np.asarray(vec, dtype=dtype)
            w = w + j.f * vec
            dw = dw + j.d1 * vec
            ddw = ddw + j.d2 * vec
        return w, dw, ddw


def constant_matrix_profile(mat) -> MatrixProfile:
    return MatrixProfile([(lambda jy: jy * 0 + 1, np.asarray(mat, dtype=float))])


def scaled_matrix_profile(fn, mat) -> MatrixProfile:
    return MatrixProfile([(fn, np.asarray(mat, dtype=float))])


class SplineMatrixProfile:
    """Grid-sampled matrix profile with C^2 access (not-a-knot cubic spline)."""

    def __init__(self, ys, mats):
        from scipy.interpolate import CubicSpline

        mats = np.asarray(mats, dtype=float)  # (n, 3, 3)
        self._spl = CubicSpline(np.asarray(ys, dtype=float), mats, axis=0,
                                bc_type="not-a-knot")
        self._dspl = self._spl.derivative()

    def eval(self, y, dtype=float):
        return self._spl(y), self._dspl(y)


@dataclass
class InvariantField:
    """Invariant configuration: connection and Higgs profiles, A_y = 0."""

    connection: MatrixProfile
    higgs: MatrixProfile
    higgs_y: VectorProfile | None = None

    def rotated(self, rot) -> "InvariantField":
        """Apply a constant adjoint rotation (3x3 orthogonal matrix on the
        su(2) coefficient index) to every profile."""
        rot = np.asarray(rot, dtype=float)

        def rot_terms(terms):
            return [(fn, rot @ np.asarray(m, dtype=float)) for fn, m in terms]

        hy = None
        if self.higgs_y is not None:
            hy = VectorProfile(
                [(fn, rot @ np.asarray(v, dtype=float)) for fn, v in self.higgs_y.terms]
            )
        return InvariantField(
            MatrixProfile(rot_terms(self.connection.terms)),
            MatrixProfile(rot_terms(self.higgs.terms)),
            hy,
        )


# ---------------------------------------------------------------------------
# closed-form reference solutions
# ---------------------------------------------------------------------------

def pole_a(jy):
    """Connection scalar of the reference solution."""
    v = jets.expm1(2 * jy)
    return 6 * (1 + v) / (v * v + 6 * v + 6)


def pole_b(jy):
    """Higgs scalar of the reference solution; simple pole 1/y at y = 0."""
    v = jets.expm1(2 * jy)
    return 6 * (1 + v) * (2 + v) / (v * (v * v + 6 * v + 6))


def pole_a_alt(jy):
    """Connection scalar of the alternate solution (a -> 2 at infinity)."""
    v = jets.expm1(2 * jy)
    return 2 * (v * v + 3 * v + 3) / (v * v + 6 * v + 6)


_I3 = np.eye(3)


def nahm_pole_invariant_solution() -> InvariantField:
    """The closed-form invariant solution: Nahm pole at y = 0, exponential
    decay to the trivial flat connection at infinity."""
    return InvariantField(
        scaled_matrix_profile(pole_a, _I3),
        scaled_matrix_profile(pole_b, _I3),
    )


def nahm_pole_invariant_solution_alt() -> InvariantField:
    """The companion solution sharing the same Higgs profile, whose
    connection tends to the flat-but-nontrivial endpoint a = 2."""
    return InvariantField(
        scaled_matrix_profile(pole_a_alt, _I3),
        scaled_matrix_profile(pole_b, _I3),
    )


@lru_cache(maxsize=1 << 17)
def pole_scalars(y: float):
    """(a, b, a', b') of the reference solution at y, as floats.

    Cached: quadrature nodes recur across the many energy integrals."""
    jy = Jet2.var(np.longdouble(y))
    ja = pole_a(jy)
    jb = pole_b(jy)
    return float(ja.f), float(jb.f), float(ja.d1), float(jb.d1)


def pole_scalars_extended(y: float):
    """Same as pole_scalars but in extended precision, for residual checks
    whose cancellations exceed float64 resolution near the pole."""
    jy = Jet2.var(np.longdouble(y))
    ja = pole_a(jy)
    jb = pole_b(jy)
    return ja.f, jb.f, ja.d1, jb.d1


def higgs_scale_check(scales=(1e-1, 1e-2, 1e-3)) -> dict:
    """Profile-level scaling-limit check: s * b(s y) at fixed y = 1 converges
    to the pole profile 1/y = 1 with rate O(s^2).  Returns the relative
    errors and the fitted log-log slope."""
    errs = []
    for s in scales:
        jy = Jet2.var(np.longdouble(s))
        val = float(s * pole_b(jy).f)
        errs.append(abs(val - 1.0))
    ls = np.log10(np.asarray(scales))
    le = np.log10(np.asarray(errs))
    slope = float(np.polyfit(ls, le, 1)[0])
    return {"scales": list(scales), "errors": errs, "slope": slope}


# ---------------------------------------------------------------------------
# CSV exchange: blocks "# profile NAME", header y,c11..c33 (row-major)
# ---------------------------------------------------------------------------

MATRIX_HEADER = ["y"] + [f"c{i}{a}" for i in range(1, 4) for a in range(1, 4)]


def write_profiles_csv(path: str, ys, blocks: dict):
    """Write named matrix-profile samples; one block per profile."""
    ys = np.asarray(ys, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for name, mats in blocks.items():
            fh.write(f"# profile {name}\n")
            w.writerow(MATRIX_HEADER)
            for y, m in zip(ys, np.asarray(mats, dtype=float)):
                w.writerow([repr(float(y))] + [repr(float(x)) for x in m.reshape(9)])


def read_profiles_csv(path: str) -> dict:
    """Read profile blocks back as SplineMatrixProfile objects."""
    blocks: dict[str, list] = {}
    name = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("# profile"):
                name = line.split("# profile", 1)[1].strip()
                blocks[name] = []
                continue
            if line.startswith("y,"):
                continue
            if name is None:
                raise ValueError("profile CSV must start with a '# profile NAME' line")
            vals = [float(x) for x in line.split(",")]
            blocks[name].append(vals)
    out = {}
    for name, rows in blocks.items():
        arr = np.asarray(rows, dtype=float)
        out[name] = SplineMatrixProfile(arr[:, 0], arr[:, 1:].reshape(-1, 3, 3))
    return out
