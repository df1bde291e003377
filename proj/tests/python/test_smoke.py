"""Smoke tests for the comjac extension module."""

import math

import pytest

comjac = pytest.importorskip("comjac")


def test_version():
    assert comjac.__version__


def test_identity_map_at_theta_zero():
    rep = comjac.eval_report(0.0, (1.0, 2.0, 3.0), (-4.0, 0.5, 2.0), (1.0, 0.0, 0.0))
    assert float(rep["det_matrix"]) == 1.0
    assert float(rep["det_A_form"]) == 1.0
    assert float(rep["det_K_form"]) == 1.0
    assert float(rep["A"]) == 1.0


def test_three_routes_agree_on_decimal_string_inputs():
    rep = comjac.eval_report("0.5", ("1.5", "-2.25", "0.75"), ("-4", "0.5", "2"), ("1", "2", "2"))
    det_a = rep["det_A_form"]
    # the first 40 significant digits of the three routes coincide
    assert rep["det_matrix"][:40] == det_a[:40]
    assert rep["det_K_form"][:40] == det_a[:40]
    assert len(det_a) > 60  # full 200-bit precision crosses the boundary


def test_conservation():
    p, q, w = (0.3, -1.0, 2.0), (1.0, 0.25, -0.5), (0.0, 0.0, 1.0)
    pp, qp = comjac.post_collisional(p, q, w)
    for i in range(3):
        assert math.isclose(float(pp[i]) + float(qp[i]), p[i] + q[i], rel_tol=1e-14, abs_tol=1e-14)


def test_degenerate_input_raises():
    with pytest.raises(comjac.DegenerateInputError):
        comjac.eval_report(0.5, (1.0, 2.0, 3.0), (1.0, 2.0, 3.0), (1.0, 0.0, 0.0))


def test_closed_form_limit_and_asymptote():
    assert float(comjac.closed_form_limit(1.0)) == 0.0
    assert float(comjac.closed_form_limit(0.0)) == 1.0
    assert abs(float(comjac.closed_form_limit(0.5)) - 0.27588834764831844) < 1e-15
    assert float(comjac.ray_asymptote(0.5)) == 0.25


def test_special_point_matches_the_asymptote():
    ev = comjac.special_point(0.9, 1e8)
    assert abs(float(ev["det"]) - 0.01) < 1e-4
    assert float(ev["deviation_asymptote"]) < 1e-4


def test_angle_condition():
    p, q, w = (1.0, 0.0, 0.0), (-2.0, 1.0, 0.5), (0.0, 1.0, 0.0)
    cos = float(comjac.scattering_cos(p, q, w))
    assert comjac.angle_condition(p, q, w) == (cos >= 0)


def test_hunt_locates_a_machine_zero():
    records = comjac.hunt(0.9, seed=1, searches=2, stop_first=True, extra_pairs=2)
    assert records
    rec = records[0]
    assert abs(float(rec["det"])) < 2.0 ** -160
    assert float(rec["bracket_width"]) < 2.0 ** -100
    assert set(rec) >= {"theta", "p", "q", "w", "det", "angle_ok", "seed", "iterations"}


def test_verify_reduced():
    report = comjac.verify(samples=16, seed=3)
    assert report["all_pass"], [l for l in report["lines"] if not l[1]]
