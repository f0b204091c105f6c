"""Energy identities, constants, perturbation chain, bound assembly."""

import math

import numpy as np
import pytest

from kwlab.energy import (
    SyntheticPerturbation,
    boundary_terms,
    c_decay,
    c_model,
    check_energy_identity,
    cutoff_combination,
    densities,
    density_fn,
    energy_bound_constant,
    eps_sweep_rows,
    exp_decay_perturbation,
    integrating_factor,
    perturbation_chain,
    random_perturbation,
    theorem_bound_report,
    topological_charge,
)
from kwlab.profiles import (
    InvariantField,
    nahm_pole_invariant_solution,
    pole_a,
    pole_a_alt,
    pole_scalars,
    scaled_matrix_profile,
)
from kwlab.quadrature import VOL_S3, l2_norm_sq

I3 = np.eye(3)


@pytest.fixture(scope="module")
def model():
    return nahm_pole_invariant_solution()


def test_boundary_terms_zero_field(conv):
    zero = scaled_matrix_profile(lambda jy: jy * 0, I3)
    field = InvariantField(zero, zero)
    cubic, mixed = boundary_terms(conv, field, 0.3)
    assert cubic == 0.0 and mixed == 0.0


def test_boundary_terms_divergences(conv, model):
    # mixed term diverges like +6 pi^2 / eps, cubic like 2 pi^2 / eps^3
    for eps in (1e-2, 1e-3):
        cubic, mixed = boundary_terms(conv, model, eps)
        assert math.isclose(mixed, 6 * math.pi**2 / eps, rel_tol=5 * eps)
        assert math.isclose(cubic, 2 * math.pi**2 / eps**3, rel_tol=5 * eps)
        assert mixed > 0 and cubic > 0


def test_model_densities_positive_and_bounded_at_pole(conv, model):
    d = densities(conv, model, 1e-5)
    for key in ("F_sq", "nabla_bar_sq", "S_sq"):
        assert 0 <= d[key] < 10.0
    # the Higgs norm itself carries the 1/y^2 divergence
    assert d["phi_sq"] > 1e9


def test_identity_checks_on_model(conv, quad_spec, model):
    for ident in ("first-order-balance", "square-completion",
                  "bulk-boundary-balance"):
        rep = check_energy_identity(conv, ident, model, 0.05, quad_spec)
        assert rep.status == "pass", rep
        assert rep.computed <= 1e-6
        assert rep.extra["quad_error"] < 1e-6


def test_identity_rejects_non_solutions(conv, quad_spec):
    bad = InvariantField(
        scaled_matrix_profile(lambda jy: jy * 0 + 1.0, I3),
        scaled_matrix_profile(lambda jy: 1 / jy, I3),
    )
    with pytest.raises(ValueError, match="not a solution"):
        check_energy_identity(conv, "bulk-boundary-balance", bad, 0.05, quad_spec)
    with pytest.raises(ValueError, match="unknown identity"):
        check_energy_identity(conv, "nope", bad, 0.05, quad_spec)


def test_cutoff_limit_and_route(conv, quad_spec, model):
    rep = check_energy_identity(conv, "cutoff-limit", model, 0.05, quad_spec)
    assert rep.status == "pass"
    combos = rep.extra["combos"]
    inc1 = abs(combos[1] - combos[0])
    inc2 = abs(combos[2] - combos[1])
    assert 0.05 <= inc2 / inc1 <= 0.2  # linear shrink in eps
    for slope in rep.extra["summand_slopes"]:
        assert abs(slope + 1.0) <= 0.05

    route = check_energy_identity(conv, "route-match", model, 0.05, quad_spec)
    assert route.status == "pass" and route.computed <= 1e-6


def test_divergence_cancellation_monotone(conv, quad_spec, model):
    gaps = []
    for eps in (1e-1, 1e-2, 1e-3, 1e-4):
        bulk3, _ = l2_norm_sq(
            density_fn(conv, model, ("F_sq", "nabla_bar_sq", "S_sq")),
            quad_spec.with_eps(eps))
        _, _, combo, _ = cutoff_combination(conv, model, eps, quad_spec)
        gaps.append(abs(bulk3 - combo))
    assert all(g < 1e-8 for g in gaps)


def test_c_model_finite_stable(conv, quad_spec):
    val, err, parts = c_model(conv, quad_spec)
    val2, _, _ = c_model(conv, quad_spec.refined())
    assert abs(val - val2) / val <= 1e-8
    assert parts["F_l2_sq"] > 0 and parts["S_l2_sq"] > 0
    # second summand equals the norm of the tangential curvature part:
    # for a solution the completed square *is* that part of F
    sq, _ = l2_norm_sq(
        lambda y: 1.5 * (pole_scalars(y)[0] ** 2 - 2 * pole_scalars(y)[0]) ** 2,
        quad_spec, from_zero=True)
    assert math.isclose(parts["S_l2_sq"], sq, rel_tol=1e-10)


def test_c_decay_envelope(conv):
    c2 = c_decay()
    assert math.isclose(c2, 6.0 * math.sqrt(1.5), rel_tol=1e-6)
    for y in np.linspace(1.0, 14.0, 100):
        _, b, _, _ = pole_scalars(float(y))
        assert math.sqrt(1.5) * b <= c2 * math.exp(-2.0 * float(y)) * (1 + 1e-12)


def test_charge_oracles(conv, quad_spec):
    q, err = topological_charge(conv, scaled_matrix_profile(pole_a, I3),
                                quad_spec)
    # antiderivative oracle: -(3/2) [a^3/3 - a^2] between the endpoints
    f = lambda a: a**3 / 3 - a**2
    want = -1.5 * (f(0.0) - f(1.0))
    assert abs(q - want) <= 1e-8
    assert abs(q - (-1.0)) <= 1e-8

    q_alt, _ = topological_charge(conv, scaled_matrix_profile(pole_a_alt, I3),
                                  quad_spec)
    want_alt = -1.5 * (f(2.0) - f(1.0))
    assert abs(q_alt - want_alt) <= 1e-8
    assert abs(q_alt + q) <= 1e-8

    zero_charge, _ = topological_charge(
        conv, scaled_matrix_profile(lambda jy: jy * 0 + 0.7, I3), quad_spec)
    assert abs(zero_charge) < 1e-12


def test_integrating_factor_basics():
    assert integrating_factor(lambda y: 0.0, lambda y: 0.0, 0.9) == 1.0
    f_inf = integrating_factor(lambda y: pole_scalars(y)[1], lambda y: 0.0, 25.0)
    assert math.isclose(f_inf, 1.0, rel_tol=1e-8)
    with pytest.raises(ValueError, match="toward infinity"):
        integrating_factor(lambda y: 1.0, lambda y: 0.0, 1.0)
    with pytest.raises(ValueError, match="at zero"):
        integrating_factor(lambda y: math.exp(-2 * y), lambda y: 1.0 / y, 1.0)


def test_weighted_derivative_identity_fd():
    # d_y rho1 + 2 h rho1 + alpha rho1 = f^{-1} d_y(f rho1) on seeded profiles
    rng = np.random.default_rng(8)
    for _ in range(5):
        lam = float(rng.uniform(0.5, 1.5))
        amp = float(rng.uniform(0.2, 1.0))
        h_fn = lambda y: pole_scalars(y)[1]
        alpha = lambda y: amp * y * math.exp(-lam * y)
        dalpha = lambda y: amp * (1 - lam * y) * math.exp(-lam * y)
        for y in (0.4, 0.9, 1.7):
            lhs = dalpha(y) + 2 * h_fn(y) * alpha(y) + alpha(y) * alpha(y)
            h = 1e-5
            f_of = lambda t: integrating_factor(h_fn, alpha, t)
            rhs = (f_of(y + h) * alpha(y + h)
                   - f_of(y - h) * alpha(y - h)) / (2 * h) / f_of(y)
            # note: alpha multiplies itself in lhs because rho1 = alpha omega
            assert abs(lhs - rhs) < 1e-6


def test_synthetic_perturbation_validation():
    with pytest.raises(ValueError, match="vanish at the boundary"):
        SyntheticPerturbation(lambda jy: jy * 0 + 1.0, I3)
    with pytest.raises(ValueError, match="decay toward infinity"):
        SyntheticPerturbation(lambda jy: jy * 0.1, I3)
    p = exp_decay_perturbation(0.3, 1.2, I3)
    q0, dq0 = p.q(1e-6)
    assert abs(q0) < 1e-6 and abs(dq0 - 0.3) < 1e-5


def test_chain_pure_v1_spec_case(conv, quad_spec):
    pert = exp_decay_perturbation(1.0, 1.0, I3, "pure-v1")
    rep = perturbation_chain(conv, pert, quad_spec)
    assert rep.status == "pass"
    steps = rep.extra["steps"]
    assert steps["quadratic_projection_integrated"] == 0.0  # no V2/V3 part
    assert steps["discarded_boundary_term"] <= 0.0
    assert steps["final"] > 0.0


def test_chain_mixed_direction_spec_case(conv, quad_spec):
    m = np.zeros((3, 3))
    m[1, 2], m[2, 1] = 1.0, -1.0        # antisymmetric part
    m[2, 0], m[0, 2] = 1.0, 1.0        # symmetric traceless part
    pert = exp_decay_perturbation(1.0, 1.0, m, "mu1-plus-nu2")
    rep = perturbation_chain(conv, pert, quad_spec)
    assert rep.status == "pass"
    assert rep.extra["steps"]["quadratic_projection_pointwise_min"] >= 0.0


def test_chain_seeded(conv, quad_spec):
    rng = np.random.default_rng(42)
    for _ in range(8):
        pert = random_perturbation(rng)
        rep = perturbation_chain(conv, pert, quad_spec)
        assert rep.status == "pass", rep.extra["steps"]


def test_theorem_bound_report(conv, quad_spec, model):
    rep = theorem_bound_report(conv, model, quad_spec)
    f_sq = rep.get("curvature_l2_sq").value
    c_limit = rep.get("c_limit").value
    bound = rep.get("bound_constant").value
    assert 0 < f_sq <= c_limit <= bound
    # slack against the limit constant equals the other route terms
    other = (rep.get("tangential_gradient_l2_sq").value
             + rep.get("completed_square_l2_sq").value)
    assert math.isclose(c_limit - f_sq, other, rel_tol=1e-9)
    assert rep.get("bound_slack").value > 0
    # the weighted variant stays below the bound with the half coefficient
    assert rep.get("weighted_total").value <= bound
    assert rep.get("route_total").value == pytest.approx(c_limit, rel=1e-9)


def test_theorem_bound_flat_endpoint(conv, quad_spec):
    flat = InvariantField(
        scaled_matrix_profile(lambda jy: jy * 0 + 2.0, I3),
        scaled_matrix_profile(lambda jy: jy * 0, I3),
    )
    rep = theorem_bound_report(conv, flat, quad_spec)
    assert rep.get("curvature_l2_sq").value <= 1e-20
    assert rep.get("bound_constant").value > 0


def test_weighted_bound_identity(conv, quad_spec, model):
    rep = check_energy_identity(conv, "weighted-bound", model, 0.05, quad_spec)
    assert rep.status == "pass"
    assert rep.extra["lhs"] <= rep.extra["bound"]


def test_eps_sweep_rows(conv, quad_spec, model):
    rows = eps_sweep_rows(conv, model, (1e-1, 1e-2), quad_spec)
    assert len(rows) == 2
    for eps, lhs, rhs, gap in rows:
        assert abs(gap) <= 1e-6 * abs(rhs)


def test_engine_constants_reported(conv, quad_spec):
    consts = energy_bound_constant(conv, quad_spec)
    assert consts["C"] == consts["c_limit"] + 2 * consts["c_pert"]
    assert consts["c_pert"] == pytest.approx(
        consts["c19"] + consts["c24a"] + consts["c24b"])
    # engine normalisation: the Young constant is (3/4) vol(S^3)
    assert math.isclose(consts["c24b"], 0.75 * VOL_S3, rel_tol=1e-15)
