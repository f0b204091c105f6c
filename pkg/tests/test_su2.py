"""Algebra conventions: bracket, inner product, adjoint rotations."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kwlab import su2
from kwlab.su2 import T1, T2, T3, ZERO, ad_rotate, bracket, inner, norm, norm_sq


def _pauli_rep(u):
    """Fundamental-representation oracle: t_i = -(i/2) sigma_i."""
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    mats = [-0.5j * s for s in (s1, s2, s3)]
    return sum(float(c) * m for c, m in zip(u.coeffs, mats))


def test_bracket_structure_relations():
    assert bracket(T1, T2) == T3
    assert bracket(T2, T3) == T1
    assert bracket(T3, T1) == T2
    assert bracket(T1, T1) == ZERO
    assert bracket(T2, T1) == -T3


def test_bracket_matches_matrix_commutator():
    rng = np.random.default_rng(5)
    for _ in range(25):
        u = su2.su2(*rng.normal(size=3))
        v = su2.su2(*rng.normal(size=3))
        m = _pauli_rep(u) @ _pauli_rep(v) - _pauli_rep(v) @ _pauli_rep(u)
        assert np.allclose(m, _pauli_rep(bracket(u, v)), atol=1e-14)


def test_inner_matches_trace_oracle():
    # <u, v> = -tr(uv) in the fundamental representation
    for u in (T1, T2, T3):
        for v in (T1, T2, T3):
            want = -np.trace(_pauli_rep(u) @ _pauli_rep(v)).real
            assert math.isclose(float(inner(u, v)), want, abs_tol=1e-15)
    assert inner(T1, T1) == Fraction(1, 2)
    assert inner(T1, T2) == 0


def test_omega_norm_downstream():
    # |omega|^2 = sum_i |t_i|^2 = 3/2 under this normalisation
    assert sum(inner(t, t) for t in (T1, T2, T3)) == Fraction(3, 2)


def test_rotation_identity_and_quarter_turn():
    u = su2.su2(0.3, -1.2, 0.7)
    r = ad_rotate(T2, 0.0, u)
    assert norm(r - u) < 1e-15

    got = ad_rotate(T3, math.pi / 2, T1)
    assert norm(got - T2) < 1e-15


def test_rotation_matches_expm_oracle():
    from scipy.linalg import expm

    rng = np.random.default_rng(11)
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    for _ in range(20):
        ax = rng.normal(size=3)
        ang = rng.uniform(0, 2 * math.pi)
        n = ax / np.linalg.norm(ax)
        # ad_n acts on coefficients as the cross product n x .
        ad = np.array([[sum(eps[i, j, k] * n[i] for i in range(3))
                        for j in range(3)] for k in range(3)])
        rot = expm(ang * ad)
        u = rng.normal(size=3)
        want = rot @ u
        got = ad_rotate(su2.su2(*ax), ang, su2.su2(*u))
        assert np.allclose([float(c) for c in got.coeffs], want, atol=1e-12)


def test_rotation_preserves_norm_seeded():
    rng = np.random.default_rng(99)
    for _ in range(100):
        axis = su2.su2(*rng.normal(size=3))
        angle = float(rng.uniform(0, 2 * math.pi))
        u = su2.su2(*rng.normal(size=3))
        assert abs(norm(ad_rotate(axis, angle, u)) - norm(u)) < 1e-13


def test_degenerate_axis_rejected():
    with pytest.raises(ValueError, match="degenerate rotation axis"):
        ad_rotate(ZERO, 1.0, T1)


small_fracs = st.fractions(min_value=-10, max_value=10, max_denominator=12)
triples = st.tuples(small_fracs, small_fracs, small_fracs).map(lambda t: su2.su2(*t))


@given(triples, triples, triples)
@settings(max_examples=150, deadline=None)
def test_jacobi_identity(u, v, w):
    total = (bracket(u, bracket(v, w)) + bracket(v, bracket(w, u))
             + bracket(w, bracket(u, v)))
    assert total.is_zero()


@given(triples, triples, triples)
@settings(max_examples=150, deadline=None)
def test_ad_invariance(u, v, w):
    assert inner(bracket(w, u), v) + inner(u, bracket(w, v)) == 0


@given(triples, triples)
@settings(max_examples=100, deadline=None)
def test_bracket_bilinear_antisymmetric(u, v):
    assert bracket(u, v) == -bracket(v, u)
    two_u = su2.su2(*(2 * c for c in u.coeffs))
    assert bracket(two_u, v) == 2 * bracket(u, v)


@given(triples)
@settings(max_examples=100, deadline=None)
def test_norm_positive_definite(u):
    assert norm_sq(u) >= 0
    assert (norm_sq(u) == 0) == u.is_zero()
