"""Profiles: jet evaluation, splines, CSV exchange, scaling limit."""

import math

import numpy as np

from kwlab import jets
from kwlab.jets import Jet2
from kwlab.profiles import (
    SplineMatrixProfile,
    higgs_scale_check,
    nahm_pole_invariant_solution,
    pole_scalars,
    read_profiles_csv,
    write_profiles_csv,
)


def test_jet_arithmetic_against_closed_forms():
    # d/dy and d2/dy2 of y^2 exp(-3y) at y = 0.7
    y = 0.7
    j = Jet2.var(y)
    out = j * j * jets.exp(-3 * j)
    e = math.exp(-3 * y)
    assert math.isclose(out.f, y * y * e, rel_tol=1e-15)
    assert math.isclose(out.d1, (2 * y - 3 * y * y) * e, rel_tol=1e-14)
    assert math.isclose(out.d2, (2 - 12 * y + 9 * y * y) * e, rel_tol=1e-13)


def test_pole_profiles_limits():
    # b ~ 1/y at the pole, both decay like 6 e^{-2y} at infinity
    a, b, da, db = pole_scalars(1e-4)
    assert math.isclose(b * 1e-4, 1.0, rel_tol=1e-6)
    assert math.isclose(a, 1.0, rel_tol=1e-6)
    a, b, _, _ = pole_scalars(12.0)
    assert math.isclose(a * math.exp(24.0), 6.0, rel_tol=1e-8)
    assert math.isclose(b * math.exp(24.0), 6.0, rel_tol=1e-8)


def test_profile_derivative_matches_finite_differences():
    model = nahm_pole_invariant_solution()
    h = 1e-6
    for y in (0.3, 1.2, 4.0):
        val, der = model.higgs.eval(y)
        vp, _ = model.higgs.eval(y + h)
        vm, _ = model.higgs.eval(y - h)
        fd = (np.asarray(vp, float) - np.asarray(vm, float)) / (2 * h)
        assert np.allclose(np.asarray(der, float), fd, rtol=1e-7, atol=1e-9)


def test_scaling_limit_rate():
    out = higgs_scale_check()
    assert abs(out["slope"] - 2.0) <= 0.1
    # relative error at s is s^2/3 to leading order
    assert math.isclose(out["errors"][0], 1e-2 / 3, rel_tol=0.05)


def test_spline_profile_c2_access():
    ys = np.linspace(0.05, 5.0, 120)
    mats = np.stack([np.eye(3) * (1.0 / y) for y in ys])
    spl = SplineMatrixProfile(ys, mats)
    v, d = spl.eval(1.0)
    assert math.isclose(float(v[0, 0]), 1.0, rel_tol=1e-6)
    assert math.isclose(float(d[0, 0]), -1.0, rel_tol=1e-4)


def test_profiles_csv_roundtrip(tmp_path):
    ys = np.linspace(0.1, 3.0, 60)
    blocks = {
        "connection": [np.eye(3) * pole_scalars(float(y))[0] for y in ys],
        "higgs": [np.eye(3) * pole_scalars(float(y))[1] for y in ys],
    }
    path = tmp_path / "profiles.csv"
    write_profiles_csv(str(path), ys, blocks)
    head = path.read_text().splitlines()
    assert head[0] == "# profile connection"
    assert head[1].startswith("y,c11,c12,c13,c21")

    back = read_profiles_csv(str(path))
    assert set(back) == {"connection", "higgs"}
    v, d = back["higgs"].eval(1.0)  # between nodes: spline interpolation error
    want = pole_scalars(1.0)[1]
    assert math.isclose(float(v[0, 0]), want, rel_tol=1e-5)
    node = float(ys[20])
    v_node, _ = back["higgs"].eval(node)
    assert math.isclose(float(v_node[0, 0]), pole_scalars(node)[1], rel_tol=1e-12)
