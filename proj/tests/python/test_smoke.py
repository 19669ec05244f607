import json
import math

import pytest

import mosqdyn as md

SLOW_GROWTH = md.Parameters(0.6, 0.5, 0.48)


def test_operators():
    x, y = md.apply_W0(SLOW_GROWTH, (2.0, 0.1))
    assert x == pytest.approx(1.65, rel=1e-14)
    assert y == pytest.approx(0.452, rel=1e-14)
    p = md.Parameters(0.6, 0.5, 0.48, d0=0.1, d1=0.05)
    wx, wy = md.apply_W(p, (1.0, 1.0))
    fx, fy = md.continuous_rhs(p, (1.0, 1.0))
    assert wx - 1.0 == pytest.approx(fx, abs=1e-15)
    assert wy - 1.0 == pytest.approx(fy, abs=1e-15)


def test_validation_errors():
    report = md.validate_parameters(md.Parameters(2.0, 0.5, 0.48))
    assert not report["valid"]
    assert report["problems"]
    with pytest.raises(ValueError):
        md.apply_W0(md.Parameters(0.5, 0.5, 0.5), (1.0, 1.0))
    with pytest.raises(ValueError):
        md.apply_W(SLOW_GROWTH, (-1.0, 0.0))


def test_spectral():
    rep = md.classify_origin(SLOW_GROWTH)
    assert rep["classification"] == "saddle"
    assert rep["lambda1"] == pytest.approx(1.0109991, rel=1e-7)
    assert md.classify_origin(md.Parameters(0.5, 0.3, 0.6))["classification"] == "attracting"
    assert md.find_fixed_points_w0(SLOW_GROWTH) == [(0.0, 0.0)]


def test_orbit_extinction():
    orbit = md.iterate_orbit(md.Parameters(0.5, 0.3, 0.6), (1.0, 1.0))
    assert orbit["verdict"] == "extinction"
    assert max(orbit["final_state"]) <= 1e-6
    assert orbit["monitors"]["y_bound_violations"] == 0
    assert orbit["steps"][0] == 0
    assert len(orbit["states"]) == orbit["n_steps"] + 1


def test_orbit_budget():
    orbit = md.iterate_orbit(SLOW_GROWTH, (2.0, 0.1), max_iters=100)
    assert orbit["verdict"] == "exhausted"
    assert orbit["monitors"]["lemma2_violations"] == 0


def test_simplex_certificate():
    a, b, c, ok = md.two_periodic_certificate(SLOW_GROWTH)
    assert (a, b, c) == pytest.approx((-0.7296, -2.14, -1.6984), rel=1e-12)
    assert ok
    assert md.apply_T(SLOW_GROWTH, 1.0) == pytest.approx(0.7, rel=1e-15)
    assert md.check_T_range(SLOW_GROWTH)
    cert = json.loads(md.scan_periodic_points(SLOW_GROWTH, p_max=4, grid_n=2000))
    assert cert["spurious_roots"] == []
    assert [e["period"] for e in cert["periods"]] == [2, 3, 4]


def test_reference_ode():
    p = md.Parameters(0.6, 0.8, 0.5, d0=0.1, d1=0.05)
    assert md.compute_r0(p) == pytest.approx(0.48 / 0.35)
    x0, y0 = md.positive_equilibrium(p)
    t, x, y = md.integrate_ode(p, (1.0, 1.0))[-1]
    assert t == 500.0
    assert math.hypot(x - x0, y - y0) < 1e-6
    assert md.positive_equilibrium(md.Parameters(0.6, 0.3, 0.5, d0=0.1, d1=0.05)) is None
