"""Curve congruences on the sphere: closed-form route against the ambient ODE.

Latitude circles give exact curvature oracles (kappa = cot of the colatitude)
and the variation-of-constants solution can be checked against an independent
high-order integrator everywhere.
"""

from __future__ import annotations

import numpy as np
import pytest

from congruence_kit.curves import (
    SphereCurve,
    equidistance_check,
    frenet_normal,
    geodesic_curvature,
    initial_support_vector,
    reparametrize_arclength,
    singular_parameters,
    solve_curve_closed_form,
    solve_curve_ode,
    tangency_residual,
)
from congruence_kit.errors import GeometryError
from congruence_kit.scenarios import build_scenario, latitude_curve


@pytest.fixture(scope="module")
def latitude():
    data = build_scenario("latitude-curve")
    ts = np.linspace(data["curve"].t0, data["curve"].t1, 65)
    sol = solve_curve_closed_form(data["curve"], data["lam"], ts, data["A0"], data["B0"])
    return data, ts, sol


def test_latitude_curvature_oracle():
    for colat in (np.pi / 4.0, 0.9):
        curve = latitude_curve(colat)
        want = 1.0 / np.tan(colat)
        for t in np.linspace(curve.t0, curve.t1, 9):
            assert abs(geodesic_curvature(curve, t) - want) < 1e-10


def test_great_circle_congruence_is_frozen():
    # kappa = 0 and lambda = 0: the leaf keeps its frame coordinates, so
    # gamma = A0 alpha' + B0 nu exactly, and gamma' = -A0 alpha
    data = build_scenario("great-circle-curve")
    curve, lam = data["curve"], data["lam"]
    A0, B0 = data["A0"], data["B0"]
    ts = np.linspace(curve.t0, curve.t1, 33)
    sol = solve_curve_closed_form(curve, lam, ts, A0, B0)
    for i, t in enumerate(ts):
        want = A0 * np.asarray(curve.dalpha(t)) + B0 * frenet_normal(curve, t)
        assert np.max(np.abs(sol.gamma[i] - want)) < 1e-10
    h = 1e-6

    def gamma_at(t):
        a, b = sol.eval_AB(t)
        return (lam(t) * np.asarray(curve.alpha(t))
                + a * np.asarray(curve.dalpha(t)) + b * frenet_normal(curve, t))

    for t in ts[2:-2]:
        dg = (gamma_at(t + h) - gamma_at(t - h)) / (2.0 * h)
        assert np.max(np.abs(dg + A0 * np.asarray(curve.alpha(t)))) < 1e-8


def test_closed_form_matches_ambient_ode(latitude):
    data, ts, sol = latitude
    s0 = initial_support_vector(data["curve"], data["A0"], data["B0"])
    ode = solve_curve_ode(data["curve"], data["lam"], ts, s0)
    assert np.max(np.abs(sol.gamma - ode.gamma)) < 1e-8
    assert np.max(np.abs(sol.A - ode.A)) < 1e-8
    assert np.max(np.abs(sol.B - ode.B)) < 1e-8


def test_leaves_stay_tangent_to_the_sphere_field(latitude):
    data, ts, sol = latitude
    assert tangency_residual(data["curve"], sol, data["lam"]) < 1e-10


def test_two_leaves_are_equidistant(latitude):
    data, ts, sol = latitude
    other = solve_curve_closed_form(data["curve"], data["lam"], ts, 0.4, 0.2)
    eq = equidistance_check(sol, other)
    assert eq["spread"] < 1e-6
    # the distance is the gap of the two frame constants
    want = abs(complex(data["B0"] - 0.2, data["A0"] - 0.4))
    assert abs(eq["mean"] - want) < 1e-9


def test_singular_parameters_found_and_refined(latitude):
    data, ts, sol = latitude
    out = singular_parameters(data["curve"], sol, data["dlam"])
    assert not out["degenerate"]
    assert len(out["roots"]) >= 1
    for r in out["roots"]:
        a, _ = sol.eval_AB(r)
        assert abs(a - data["dlam"](r)) < 1e-9


def test_singular_parameters_degenerate_flag():
    data = build_scenario("great-circle-curve")
    curve = data["curve"]
    ts = np.linspace(curve.t0, curve.t1, 33)
    # A0 = 0 with lambda = 0 keeps A - lambda' identically zero
    sol = solve_curve_closed_form(curve, lambda t: 0.0, ts, 0.0, 0.3)
    out = singular_parameters(curve, sol, lambda t: 0.0)
    assert out["degenerate"]
    assert out["roots"] == []


def test_ambient_ode_in_higher_dimension():
    curve = SphereCurve(
        lambda t: np.array([np.cos(t), np.sin(t), 0.0, 0.0]),
        lambda t: np.array([-np.sin(t), np.cos(t), 0.0, 0.0]),
        m=4,
    )
    ts = np.linspace(0.0, 2.0 * np.pi, 33)
    lam_val = 0.12
    s0 = np.array([0.0, 0.0, 0.25, -0.1])
    sol = solve_curve_ode(curve, lambda t: lam_val, ts, s0)
    svals = sol.gamma - lam_val * np.stack([curve.alpha(t) for t in ts])
    # s stays normal to the curve, untouched coordinates stay frozen,
    # and A obeys A' = -lambda along a great circle
    for i, t in enumerate(ts):
        assert abs(np.dot(svals[i], curve.alpha(t))) < 1e-10
        assert abs(svals[i][2] - 0.25) < 1e-10
        assert abs(svals[i][3] + 0.1) < 1e-10
        assert abs(sol.A[i] + lam_val * t) < 1e-9
    with pytest.raises(GeometryError):
        solve_curve_closed_form(curve, lambda t: 0.0, ts, 0.1, 0.1)


def test_reparametrization_recovers_unit_speed():
    w = lambda t: t + 0.3 * np.sin(t)
    dw = lambda t: 1.0 + 0.3 * np.cos(t)
    raw = lambda t: np.array([np.cos(w(t)), np.sin(w(t)), 0.0])
    draw = lambda t: dw(t) * np.array([-np.sin(w(t)), np.cos(w(t)), 0.0])
    curve = reparametrize_arclength(raw, draw, 0.0, 2.0 * np.pi)
    assert abs(curve.t1 - 2.0 * np.pi) < 1e-9
    for s in np.linspace(0.0, curve.t1, 17):
        assert abs(np.linalg.norm(curve.dalpha(s)) - 1.0) < 1e-10
        want = np.array([np.cos(s), np.sin(s), 0.0])
        assert np.max(np.abs(curve.alpha(s) - want)) < 1e-6


def test_curve_validation_rejections():
    with pytest.raises(GeometryError):
        SphereCurve(lambda t: 1.1 * np.array([np.cos(t), np.sin(t), 0.0]),
                    lambda t: 1.1 * np.array([-np.sin(t), np.cos(t), 0.0]))
    with pytest.raises(GeometryError):
        SphereCurve(lambda t: np.array([np.cos(2 * t), np.sin(2 * t), 0.0]),
                    lambda t: 2.0 * np.array([-np.sin(2 * t), np.cos(2 * t), 0.0]))


def test_initial_support_vector_is_normal():
    data = build_scenario("latitude-curve")
    curve = data["curve"]
    s0 = initial_support_vector(curve, data["A0"], data["B0"])
    assert abs(np.dot(s0, curve.alpha(curve.t0))) < 1e-12
    assert abs(np.linalg.norm(s0) - np.hypot(data["A0"], data["B0"])) < 1e-12
