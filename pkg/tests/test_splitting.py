import math

import numpy as np
import pytest

from svsplit.bodies import Ball, VPolytope, disk_polygon
from svsplit.errors import (
    ConfigError,
    EpsilonTooSmall,
    InfeasibleSelection,
    NotParallelViolation,
    OutsideSum,
)
from svsplit.linalg import LinearSurjection, sum_surjection
from svsplit.maps import SetValuedMap, constant_map
from svsplit.splitting import (
    DEMO_NAMES,
    EXACT_DEMOS,
    approx_split,
    bundled_split,
    membership_slack,
    split_strict_sum,
    split_sum,
    split_sum_path,
    split_surjection,
    sum_hreps,
)
from svsplit.zoo import body_zoo, crease_anchor, crease_samples

UNIT_DISK = Ball(np.zeros(2), 1.0)
UNIT_INTERVAL = VPolytope([[0.0], [1.0]])
DIFFERENCE_2D = LinearSurjection([[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0]])


def test_slack_for_ball_is_signed_distance():
    assert math.isclose(membership_slack(UNIT_DISK, [0.5, 0.0]), -0.5)
    assert math.isclose(membership_slack(UNIT_DISK, [2.0, 0.0]), 1.0)


def test_slack_for_polytope_is_worst_violation():
    square = VPolytope([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert membership_slack(square, [0.5, 0.5]) <= -0.5 + 1e-12
    assert math.isclose(membership_slack(square, [1.25, 0.5]), 0.25, abs_tol=1e-9)


def test_split_sum_center_of_disk_sum():
    r = split_sum(UNIT_DISK, UNIT_DISK, [0.0, 0.0])
    assert np.allclose(r.f1, 0.0, atol=1e-12)
    assert np.allclose(r.f2, 0.0, atol=1e-12)
    assert r.exactness_residual <= 1e-12


def test_split_sum_boundary_target_is_forced():
    r = split_sum(UNIT_DISK, UNIT_DISK, [2.0, 0.0])
    assert np.allclose(r.f1, [1.0, 0.0], atol=1e-9)
    assert np.allclose(r.f2, [1.0, 0.0], atol=1e-9)
    assert r.membership_slack1 <= 1e-9
    assert r.membership_slack2 <= 1e-9


def test_split_sum_rejects_outside_target():
    with pytest.raises(OutsideSum):
        split_sum(UNIT_DISK, UNIT_DISK, [2.3, 0.0])


def test_split_sum_slacks_are_negative_inside():
    r = split_sum(UNIT_DISK, UNIT_DISK, [0.6, 0.2])
    assert r.membership_slack1 < 0.0
    assert r.membership_slack2 < 0.0


def test_crease_decomposition_is_forced_to_arc_vertex():
    A = body_zoo("example11_A", 360)
    B = body_zoo("example11_B", 360)
    hreps = sum_hreps(A, B)
    snapped, pts = crease_samples(360, [0.3, 0.12, -0.2, -0.45])
    for tv, c in zip(snapped, pts):
        r = split_sum(A, B, c, hreps=hreps)
        assert np.linalg.norm(r.f1 - crease_anchor(360, tv)) <= 1e-12
        assert r.exactness_residual <= 1e-12
        assert max(r.membership_slack1, r.membership_slack2) <= 1e-12


def test_crease_apex_splits_to_fiber_midpoint():
    # at the apex the decomposition set is the whole vertical edge; its
    # Steiner point is the midpoint
    A = body_zoo("example11_A", 360)
    B = body_zoo("example11_B", 360)
    r = split_sum(A, B, [1.0, 0.0, 1.0])
    assert np.allclose(r.f1, [1.0, 0.0, 0.5], atol=1e-9)
    assert np.allclose(r.f2, [0.0, 0.0, 0.5], atol=1e-9)


def test_sum_path_trace_shape_and_hypotheses():
    targets = np.stack([np.linspace(0.0, 1.0, 9), np.zeros(9)], axis=1)
    disk = disk_polygon((0.0, 0.0), 1.0, 64)
    tr = split_sum_path(disk, disk, targets)
    assert tr.mode == "sum"
    assert len(tr.results) == 9
    assert tr.modulus is not None
    assert tr.hypotheses["sum_pset"] == "PSet"
    assert tr.certificates_ok()


def test_negative_control_jump_survives_in_modulus():
    tr = bundled_split("sum_crease", n=12, m=180, check_hypotheses=False)
    assert tr.max_residual <= 1e-8
    assert tr.max_slack <= 1e-8
    assert tr.modulus(0.2) >= 0.9


def test_strict_singleton_factor_pins_the_split():
    tr = bundled_split("strict_singleton", n=11)
    for r in tr.results:
        assert np.allclose(r.f1, 0.0, atol=1e-9)
        assert np.allclose(r.f2, [r.parameter[0], 0.0], atol=1e-9)
    assert tr.hypotheses["strictly_convex_proxy"]


def test_strict_moving_selection_splits_by_symmetry():
    tr = bundled_split("strict_moving", n=11)
    for r in tr.results:
        half = [0.5 * r.parameter[0], 0.0]
        assert np.allclose(r.f1, half, atol=1e-9)
        assert np.allclose(r.f2, half, atol=1e-9)


def test_strict_rejects_selection_outside_sum():
    F = constant_map(UNIT_DISK, 0.0, 1.0, 5)
    with pytest.raises(InfeasibleSelection):
        split_strict_sum(F, F, np.tile([2.5, 0.0], (5, 1)))


def test_strict_requires_shared_grid():
    F = constant_map(UNIT_DISK, 0.0, 1.0, 5)
    G = constant_map(UNIT_DISK, 0.0, 1.0, 7)
    with pytest.raises(ConfigError):
        split_strict_sum(F, G, np.zeros((5, 2)))


def test_surjection_zero_selection_splits_to_zeros():
    F = constant_map(UNIT_DISK, 0.0, 1.0, 7)
    tr = split_surjection(F, F, DIFFERENCE_2D, np.zeros((7, 2)))
    for r in tr.results:
        assert np.allclose(r.f1, 0.0, atol=1e-9)
        assert np.allclose(r.f2, 0.0, atol=1e-9)


def test_surjection_extreme_selection_is_forced():
    F = constant_map(UNIT_DISK, 0.0, 1.0, 5)
    tr = split_surjection(F, F, DIFFERENCE_2D, np.tile([2.0, 0.0], (5, 1)))
    for r in tr.results:
        assert np.allclose(r.f1, [1.0, 0.0], atol=1e-9)
        assert np.allclose(r.f2, [-1.0, 0.0], atol=1e-9)
        assert max(r.membership_slack1, r.membership_slack2) <= 1e-9


def test_surjection_interval_sum_splits_evenly():
    F = constant_map(UNIT_INTERVAL, 0.0, 1.0, 5)
    tr = split_surjection(F, F, sum_surjection(1), np.ones((5, 1)))
    for r in tr.results:
        assert np.allclose(r.f1, 0.5, atol=1e-9)
        assert np.allclose(r.f2, 0.5, atol=1e-9)


def test_surjection_kernel_inside_factor_is_rejected():
    F = constant_map(UNIT_INTERVAL, 0.0, 1.0, 5)
    with pytest.raises(NotParallelViolation) as err:
        split_surjection(F, F, LinearSurjection([[1.0, 0.0]]), np.full((5, 1), 0.5))
    v = np.asarray(err.value.args[1], float)
    assert abs(v[0]) <= 1e-12 and abs(abs(v[1]) - 1.0) <= 1e-12


def test_surjection_agrees_with_sum_split_on_lens_path():
    disk = disk_polygon((0.0, 0.0), 1.0, 64)
    xs = np.linspace(0.0, 1.0, 9)
    targets = np.stack([1.6 * xs, np.zeros(9)], axis=1)
    F = constant_map(disk, 0.0, 1.0, 9)
    tr = split_surjection(F, F, sum_surjection(2), targets)
    hreps = sum_hreps(disk, disk)
    for c, r in zip(targets, tr.results):
        direct = split_sum(disk, disk, c, hreps=hreps)
        assert np.linalg.norm(direct.f1 - r.f1) <= 1e-9


def test_approx_constant_interval_splits_evenly():
    tr = bundled_split("approx_constant", n=11, epsilon=0.2)
    for r in tr.results:
        assert np.allclose(r.f1, 0.5, atol=1e-9)
        assert np.allclose(r.f2, 0.5, atol=1e-9)
    assert tr.hypotheses["lipschitz"] <= 1e-12
    assert tr.certificates_ok()


@pytest.mark.parametrize("eps", [0.05, 0.2])
def test_approx_moving_interval_tracks_midline(eps):
    tr = bundled_split("approx_moving", n=21, epsilon=eps)
    for r in tr.results:
        assert math.isclose(float(r.f1[0]), float(r.parameter[0]) + 0.5, abs_tol=1e-9)
        assert math.isclose(float(r.f2[0]), 0.5, abs_tol=1e-9)
    assert math.isclose(tr.hypotheses["lipschitz"], 1.0, abs_tol=1e-9)
    assert tr.hypotheses["certified"]
    assert tr.max_slack <= eps + 1e-8


def test_approx_marginal_feasibility_raises_epsilon_too_small():
    F = constant_map(UNIT_INTERVAL, 0.0, 1.0, 5)
    diff = LinearSurjection([[1.0, -1.0]])
    with pytest.raises(EpsilonTooSmall):
        approx_split(F, F, diff, np.full((5, 1), 1.065), 0.05)


def test_approx_far_selection_raises_infeasible():
    F = constant_map(UNIT_INTERVAL, 0.0, 1.0, 5)
    diff = LinearSurjection([[1.0, -1.0]])
    with pytest.raises(InfeasibleSelection):
        approx_split(F, F, diff, np.full((5, 1), 1.09), 0.05)


def test_approx_corner_selection_survives_tiny_epsilon():
    # f == 1 meets the product only at the corner; the uninflated slice is
    # nonempty, so the inflation keeps an epsilon-wide core at any epsilon
    F = constant_map(UNIT_INTERVAL, 0.0, 1.0, 5)
    diff = LinearSurjection([[1.0, -1.0]])
    tr = approx_split(F, F, diff, np.ones((5, 1)), 1e-6)
    assert np.allclose(tr.results[0].f1, 1.0, atol=1e-6)
    assert np.allclose(tr.results[0].f2, 0.0, atol=1e-6)


def test_approx_rejects_bad_epsilon_and_grid():
    F = constant_map(UNIT_INTERVAL, 0.0, 1.0, 5)
    with pytest.raises(ConfigError, match="positive"):
        approx_split(F, F, sum_surjection(1), np.ones((5, 1)), 0.0)
    xs = np.linspace(1.0, 0.0, 5)
    G = SetValuedMap(xs, tuple(UNIT_INTERVAL for _ in xs), "backwards")
    with pytest.raises(ConfigError, match="increasing"):
        approx_split(G, G, sum_surjection(1), np.ones((5, 1)), 0.1)


def test_modulus_tightens_under_grid_refinement():
    omegas = [
        bundled_split("sum_lens", n=n, check_hypotheses=False).modulus.omega_zero_plus
        for n in (11, 21, 41)
    ]
    assert omegas[0] > omegas[1] > omegas[2] > 0.0


def test_all_exact_demos_certify():
    for name in EXACT_DEMOS:
        tr = bundled_split(name, n=10, m=180, check_hypotheses=False)
        assert tr.certificates_ok(), name
        assert tr.hypotheses["mode"] == tr.mode


def test_unknown_demo_name_is_rejected():
    with pytest.raises(ConfigError, match="sum_lens"):
        bundled_split("no_such_demo")


def test_trace_csv_has_certificate_columns():
    tr = bundled_split("strict_moving", n=5)
    text = tr.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "x,f1_0,f1_1,f2_0,f2_1,residual,slack1,slack2"
    assert len(lines) == 6
    row = [float(v) for v in lines[-1].split(",")]
    last = tr.results[-1]
    assert math.isclose(row[1], float(last.f1[0]), abs_tol=0.0)
    assert math.isclose(row[-3], last.exactness_residual, abs_tol=0.0)


def test_demo_names_all_run():
    for name in DEMO_NAMES:
        tr = bundled_split(name, n=6, m=180, epsilon=0.2, check_hypotheses=False)
        assert len(tr.results) >= 6
