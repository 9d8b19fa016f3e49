import math

import numpy as np
import pytest

from elastinet.energy import (
    elastic_energy,
    equipartition_defect,
    optimal_rescale,
    penalized_energy,
    scaling_identity_check,
)
from elastinet.errors import InvalidConfigError
from elastinet.geometry import DiscreteCurve, resample_uniform
from elastinet.networks import (
    Network,
    make_circle,
    make_standard_double_bubble,
    optimal_bubble_radius,
    rotate_network,
    scale_network,
    translate_network,
)

BUBBLE_F = 18.40589562425381  # (2/3) sqrt(8 pi (8 pi + 3 sqrt 3))


class TestElasticEnergy:
    def test_unit_circle(self):
        curve = make_circle(1.0, 200).curves[0]
        assert elastic_energy(curve) == pytest.approx(2 * np.pi, rel=1e-3)

    def test_radius_two_circle(self):
        curve = make_circle(2.0, 200).curves[0]
        assert elastic_energy(curve) == pytest.approx(np.pi, rel=1e-3)

    def test_straight_segment(self):
        seg = resample_uniform(DiscreteCurve(np.array([[0.0, 0.0], [2.0, 0.5]])), 12)
        assert elastic_energy(seg) == pytest.approx(0.0, abs=1e-20)


class TestPenalizedEnergy:
    def test_unit_circle_is_four_pi(self):
        report = penalized_energy(make_circle(1.0, 200), 1.0)
        assert report.penalized == pytest.approx(4 * np.pi, rel=1e-6)

    def test_radius_two_alpha_one(self):
        report = penalized_energy(make_circle(2.0, 200), 1.0)
        assert report.penalized == pytest.approx(5 * np.pi, rel=1e-4)

    def test_unit_circle_alpha_four(self):
        report = penalized_energy(make_circle(1.0, 200), 4.0)
        assert report.penalized == pytest.approx(10 * np.pi, rel=1e-4)

    def test_alpha_must_be_positive(self):
        with pytest.raises(InvalidConfigError):
            penalized_energy(make_circle(1.0, 32), 0.0)
        with pytest.raises(InvalidConfigError):
            penalized_energy(make_circle(1.0, 32), -1.0)

    def test_near_zero_length_curve_contributes_nothing(self):
        base = make_standard_double_bubble(1.0, 60)
        tiny = DiscreteCurve(np.array([[0.0, 0.0], [1e-14, 0.0], [0.0, 1e-14]]))
        net = Network("theta", (base.curves[0], tiny, base.curves[2]), base.junctions)
        report = penalized_energy(net, 1.0)
        assert report.degenerate_curves == (1,)
        assert report.per_curve[1].penalized == 0.0
        expected = penalized_energy(base, 1.0)
        assert report.elastic == pytest.approx(
            expected.elastic - expected.per_curve[1].elastic, rel=1e-12
        )

    def test_report_identity_and_breakdown(self):
        net = make_standard_double_bubble(optimal_bubble_radius(), 120)
        report = penalized_energy(net, 2.5)
        assert report.penalized == pytest.approx(report.elastic + 2.5 * report.length, abs=1e-12)
        assert sum(ce.length for ce in report.per_curve) == pytest.approx(report.length, rel=1e-14)
        assert sum(ce.elastic for ce in report.per_curve) == pytest.approx(report.elastic, rel=1e-14)
        assert len(report.per_curve) == 3


class TestScalingIdentity:
    def test_circle_alpha_four(self):
        assert scaling_identity_check(make_circle(1.0, 200), 4.0) <= 1e-9 * 4 * np.pi

    def test_theta_network(self):
        net = make_standard_double_bubble(1.3, 80)
        f1 = penalized_energy(net, 1.0).penalized
        assert scaling_identity_check(net, 2.0) <= 1e-9 * f1

    def test_alpha_one_trivial(self):
        assert scaling_identity_check(make_circle(1.0, 64), 1.0) == pytest.approx(0.0, abs=1e-12)


class TestOptimalRescale:
    def test_radius_two_circle(self):
        factor, rescaled = optimal_rescale(make_circle(2.0, 128))
        assert factor == pytest.approx(0.5, rel=1e-3)
        radii = np.linalg.norm(rescaled.curves[0].points, axis=1)
        assert np.allclose(radii, 1.0, atol=1e-3)

    def test_radius_third_circle(self):
        factor, _ = optimal_rescale(make_circle(1.0 / 3.0, 128))
        assert factor == pytest.approx(3.0, rel=1e-3)

    def test_optimal_bubble_is_fixed_point(self):
        factor, _ = optimal_rescale(make_standard_double_bubble(optimal_bubble_radius(), 400))
        assert factor == pytest.approx(1.0, abs=1e-3)


class TestEquipartition:
    def test_rescaled_radius_two_circle(self):
        _, rescaled = optimal_rescale(make_circle(2.0, 128))
        assert equipartition_defect(rescaled) <= 1e-9

    def test_rescaled_bubble(self):
        _, rescaled = optimal_rescale(make_standard_double_bubble(optimal_bubble_radius(), 400))
        assert equipartition_defect(rescaled) <= 1e-6
        report = penalized_energy(rescaled, 1.0)
        assert report.elastic == pytest.approx(BUBBLE_F / 2, rel=1e-3)
        assert report.length == pytest.approx(BUBBLE_F / 2, rel=1e-3)

    def test_rescaled_unit_circle(self):
        _, rescaled = optimal_rescale(make_circle(1.0, 200))
        assert equipartition_defect(rescaled) <= 1e-9


class TestEnergyInvariants:
    def test_scan_confirms_optimal_factor(self):
        net = make_standard_double_bubble(1.4, 100)
        report = penalized_energy(net, 1.0)
        factor = math.sqrt(report.elastic / report.length)
        grid = factor * np.linspace(0.9, 1.1, 81)
        values = [penalized_energy(scale_network(net, float(r)), 1.0).penalized for r in grid]
        assert abs(grid[int(np.argmin(values))] - factor) <= (grid[1] - grid[0]) + 1e-12

    def test_rescaled_value_identity(self):
        net = make_standard_double_bubble(1.4, 100)
        report = penalized_energy(net, 1.0)
        _, rescaled = optimal_rescale(net)
        expected = 2.0 * math.sqrt(report.elastic * report.length)
        assert penalized_energy(rescaled, 1.0).penalized == pytest.approx(expected, rel=1e-9)

    def test_rigid_motion_invariance(self):
        net = make_standard_double_bubble(optimal_bubble_radius(), 90)
        f0 = penalized_energy(net, 1.0).penalized
        moved = translate_network(rotate_network(net, 1.1), (3.0, -0.7))
        assert penalized_energy(moved, 1.0).penalized == pytest.approx(f0, abs=1e-11)

    def test_reversal_invariance(self):
        circle = make_circle(1.5, 90)
        rev = Network("closed", (circle.curves[0].reversed(),))
        assert penalized_energy(rev, 1.0).penalized == pytest.approx(
            penalized_energy(circle, 1.0).penalized, abs=1e-12
        )
        drop = DiscreteCurve(np.array([[0.0, 0.0], [1.0, 0.2], [1.5, 1.0], [0.5, 1.4], [0.0, 0.0]]))
        forward = Network("drop", (drop,))
        backward = Network("drop", (drop.reversed(),))
        assert penalized_energy(backward, 1.0).penalized == pytest.approx(
            penalized_energy(forward, 1.0).penalized, abs=1e-12
        )
