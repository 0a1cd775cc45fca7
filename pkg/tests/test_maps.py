import math

import numpy as np
import pytest

from svsplit.bodies import Ball, VPolytope
from svsplit.errors import ConfigError, EmptyIntersection, InsufficientDomain
from svsplit.maps import (
    SetValuedMap,
    bundled_pair,
    constant_map,
    empirical_modulus,
    estimate_alpha,
    graph_body,
    grid_map,
    intersection_map,
    map_from_json,
    map_to_json,
    scaling_ball_map,
    translating_ball_map,
    verify_intersection_modulus,
)
from svsplit.metrics import hausdorff_distance

BOX = VPolytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])


def test_constant_map_has_zero_modulus():
    est = empirical_modulus(constant_map(BOX, n=11))
    assert est.pair_count == 55
    assert max(om for _, om in est.breakpoints) <= 1e-12


def test_translating_ball_modulus_is_linear():
    est = empirical_modulus(translating_ball_map(0.0, 1.0, 21))
    assert est.gap == 0.0
    for t, om in est.breakpoints:
        assert math.isclose(om, t, abs_tol=1e-12)


def test_scaling_ball_modulus_is_linear():
    est = empirical_modulus(scaling_ball_map(1.0, 2.0, 21))
    for t, om in est.breakpoints:
        assert math.isclose(om, t, abs_tol=1e-12)


def test_modulus_needs_two_samples():
    single = SetValuedMap(np.array([0.0]), (BOX,))
    with pytest.raises(InsufficientDomain):
        empirical_modulus(single)


def test_modulus_lookup_is_monotone_step():
    est = empirical_modulus(translating_ball_map(0.0, 1.0, 6))
    assert est(0.0) == est.omega_zero_plus
    assert est(0.5) <= est(1.0)
    assert math.isclose(est(1.0), 1.0, abs_tol=1e-12)


def test_intersection_of_boxes():
    f1 = constant_map(BOX, n=5)
    f2 = constant_map(VPolytope([[0, 0], [2, 0], [2, 2], [0, 2]]), n=5)
    g = intersection_map(f1, f2)
    for body in g.bodies:
        got = sorted(map(tuple, np.round(body.vertices, 9)))
        assert got == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_intersection_equals_factor_when_equal():
    f = translating_ball_map(0.0, 0.3, 7, radius=1.5)
    g = intersection_map(f, f)
    for orig, cap in zip(f.bodies, g.bodies):
        est = hausdorff_distance(orig, cap)
        assert est.value <= 1.5 * (1 - math.cos(math.pi / 64)) + est.gap + 1e-9


def test_intersection_empty_reports_sample():
    f1 = constant_map(Ball([0, 0], 0.5), n=4)
    f2 = constant_map(Ball([5, 0], 0.5), n=4)
    with pytest.raises(EmptyIntersection) as err:
        intersection_map(f1, f2)
    np.testing.assert_allclose(err.value.args[1], [0.0])


def test_lens_family_is_nonempty():
    f1, f2 = bundled_pair("translating_balls", n=21)
    g = intersection_map(f1, f2)
    assert len(g) == 21


def test_alpha_for_constant_unit_balls():
    f = constant_map(Ball([0, 0], 1.0), n=5)
    alpha, gamma_min = estimate_alpha(f, f)
    assert math.isclose(alpha, 1.0, abs_tol=1e-9)
    assert math.isclose(gamma_min, 2.0, abs_tol=1e-9)


def test_alpha_zero_for_singletons():
    pt = VPolytope([[0.0, 0.0]])
    f = constant_map(pt, n=4)
    alpha, gamma_min = estimate_alpha(f, f)
    assert alpha == 0.0 and gamma_min == 0.0
    fb = constant_map(Ball([0, 0], 1.0), n=4)
    alpha2, gamma2 = estimate_alpha(fb, f)
    assert alpha2 == 0.0 and math.isclose(gamma2, 1.0)


def test_alpha_infinite_when_gamma_collapses():
    f1, f2 = bundled_pair("gamma_collapse", n=11)
    alpha, gamma_min = estimate_alpha(f1, f2)
    assert math.isinf(alpha)
    assert gamma_min == 0.0


def test_bound_report_translating_balls():
    f1, f2 = bundled_pair("translating_balls", n=26)
    report = verify_intersection_modulus(f1, f2)
    assert report.applicable
    assert len(report.violations) == 0
    assert report.worst_slack >= 0
    assert math.isclose(report.alpha, 4.0 / 3.0, abs_tol=1e-6)


def test_bound_report_rotating_polytope():
    f1, f2 = bundled_pair("rotating_polytope", n=26)
    report = verify_intersection_modulus(f1, f2)
    assert report.applicable and len(report.violations) == 0


def test_bound_report_flags_infinite_alpha():
    f1, f2 = bundled_pair("gamma_collapse", n=11)
    report = verify_intersection_modulus(f1, f2)
    assert not report.applicable
    assert math.isinf(report.alpha)
    assert report.to_dict()["alpha_infinite"] is True


def test_graph_of_constant_segment_is_square():
    seg = VPolytope([[0.0], [1.0]])
    f = SetValuedMap(np.array([0.0, 1.0]), (seg, seg))
    g = graph_body(f, [0.0, 1.0])
    got = sorted(map(tuple, np.round(g.vertices, 9)))
    assert got == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_graph_of_growing_interval_is_triangle():
    f = SetValuedMap(
        np.array([0.0, 1.0]), (VPolytope([[0.0]]), VPolytope([[0.0], [1.0]]))
    )
    g = graph_body(f, [0.0, 1.0])
    got = sorted(map(tuple, np.round(g.vertices, 9)))
    assert got == [(0, 0), (1, 0), (1, 1)]


def test_graph_needs_domain_samples():
    f = constant_map(BOX, n=3)
    with pytest.raises(ConfigError):
        graph_body(f, [0.123])


def test_map_json_round_trip_grid():
    f = translating_ball_map(0.0, 1.0, 5, radius=0.5)
    blob = map_to_json(f)
    back = map_from_json(blob)
    assert map_to_json(back) == blob
    assert back.name == f.name


def test_map_json_family_form():
    f = map_from_json({"type": "family", "name": "scaling_ball", "params": {"n": 7}})
    assert len(f) == 7
    assert isinstance(f.bodies[0], Ball)
    with pytest.raises(ConfigError, match="unknown family"):
        map_from_json({"type": "family", "name": "warp"})
    with pytest.raises(ConfigError, match=r"\$\.domain"):
        map_from_json({"type": "grid_map", "domain": {"kind": "interval", "a": 0}, "bodies": [{}]})


def test_mismatched_domains_rejected():
    f1 = constant_map(BOX, n=4)
    f2 = constant_map(BOX, n=5)
    with pytest.raises(ConfigError):
        intersection_map(f1, f2)
    with pytest.raises(ConfigError):
        estimate_alpha(f1, f2)


def test_grid_map_helper():
    f = grid_map(0.0, 2.0, [BOX, BOX, BOX])
    np.testing.assert_allclose(f.points[:, 0], [0, 1, 2])
