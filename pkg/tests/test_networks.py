import math

import numpy as np
import pytest

from elastinet.energy import elastic_energy, optimal_rescale, penalized_energy
from elastinet.errors import (
    InvalidInputError,
    NetworkValidationError,
    ParseError,
    SingularAngleError,
)
from elastinet.geometry import DiscreteCurve
from elastinet.networks import (
    Network,
    deserialize,
    generalized_bubble_energy,
    load_json,
    make_circle,
    make_degenerate_figure_eight,
    make_generalized_bubble,
    make_standard_double_bubble,
    make_symmetric_double_drop,
    make_teardrop,
    normalize_to_standard_frame,
    optimal_bubble_radius,
    rotate_network,
    save_json,
    serialize,
    validate,
)

RBAR = optimal_bubble_radius()
BUBBLE_F = 18.40589562425381


class TestValidate:
    def test_bubble_is_valid(self):
        report = validate(make_standard_double_bubble(RBAR, 200))
        assert report.valid
        assert report.angle_defect <= 1e-9

    def test_perturbed_tangents_detected(self):
        net = make_standard_double_bubble(RBAR, 200)
        rotated = rotate_network(net, 0.1, about=net.junctions[0].position)
        tampered = Network(
            "theta",
            (rotated.curves[0], net.curves[1], net.curves[2]),
            net.junctions,
        )
        report = validate(tampered, tol_ang=1e-3)
        assert not report.valid
        assert report.angle_defect == pytest.approx(0.1, rel=0.05)

    def test_drop_gap_detected(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.5], [0.5, 1.2], [0.0, 1e-3]])
        report = validate(Network("drop", (DiscreteCurve(pts),)), tol_pos=1e-6)
        assert not report.valid
        assert report.junction_gap == pytest.approx(1e-3, rel=1e-6)

    def test_degenerate_fixture_valid(self):
        report = validate(make_degenerate_figure_eight(200))
        assert report.valid
        assert report.angle_defect <= 1e-9


class TestMakeCircle:
    def test_f1_is_four_pi(self):
        report = penalized_energy(make_circle(1.0, 200), 1.0)
        assert report.penalized == pytest.approx(4 * np.pi, rel=1e-3)

    def test_radius_two_elastic(self):
        assert elastic_energy(make_circle(2.0, 200).curves[0]) == pytest.approx(np.pi, rel=1e-3)

    def test_orientation_reversal_same_energy(self):
        net = make_circle(1.0, 96)
        rev = Network("closed", (net.curves[0].reversed(),))
        assert penalized_energy(rev).penalized == pytest.approx(penalized_energy(net).penalized, abs=1e-12)

    def test_bad_arguments(self):
        with pytest.raises(InvalidInputError):
            make_circle(-1.0, 64)
        with pytest.raises(InvalidInputError):
            make_circle(1.0, 4)


class TestStandardDoubleBubble:
    def test_optimal_energy(self):
        report = penalized_energy(make_standard_double_bubble(RBAR, 400), 1.0)
        assert abs(report.penalized - BUBBLE_F) / BUBBLE_F < 1e-3

    @pytest.mark.parametrize("r", [0.5, RBAR, 2.0])
    def test_closed_form_length_and_energy(self, r):
        report = penalized_energy(make_standard_double_bubble(r, 300), 1.0)
        assert report.length == pytest.approx((8 * np.pi / 3 + np.sqrt(3)) * r, rel=1e-4)
        assert report.elastic == pytest.approx(8 * np.pi / (3 * r), rel=1e-4)

    @pytest.mark.parametrize("r", [0.5, RBAR, 2.0])
    def test_validates_sharply(self, r):
        assert validate(make_standard_double_bubble(r, 150)).angle_defect <= 1e-9

    def test_double_radius_rescales_by_half(self):
        factor, _ = optimal_rescale(make_standard_double_bubble(2 * RBAR, 200))
        assert factor == pytest.approx(0.5, abs=1e-3)

    def test_grid_minimum_at_rbar(self):
        grid = np.arange(0.7, 1.1, 1e-3)
        values = [penalized_energy(make_standard_double_bubble(float(r), 64)).penalized for r in grid]
        r_min = grid[int(np.argmin(values))]
        assert abs(r_min - RBAR) <= 2e-3


class TestGeneralizedBubble:
    def test_matches_standard_constant(self):
        val = generalized_bubble_energy(2 * np.pi / 3, 2 * np.pi / 3)
        assert abs(val - BUBBLE_F) < 1e-9

    def test_right_angles(self):
        assert generalized_bubble_energy(np.pi / 2, np.pi / 2) == pytest.approx(
            4 * math.sqrt(math.pi) * math.sqrt(math.pi + 1), abs=1e-12
        )

    def test_scan_in_alpha2_recorded(self):
        # numeric scan only; no monotonicity claim asserted beyond finiteness
        a1 = np.pi / 2
        table = [generalized_bubble_energy(a1, a2) for a2 in np.linspace(a1, 2.2, 12)]
        assert all(np.isfinite(table))

    def test_preconditions(self):
        with pytest.raises(InvalidInputError):
            generalized_bubble_energy(1.5, 1.0)
        with pytest.raises(InvalidInputError):
            generalized_bubble_energy(3.0, 3.5)

    def test_singular_angle(self):
        with pytest.raises(SingularAngleError):
            generalized_bubble_energy(np.pi / 2, np.pi)

    def test_constructed_network_matches_formula(self):
        a1, a2 = 0.9, 1.6
        net = make_generalized_bubble(a1, a2, 400)
        report = penalized_energy(net, 1.0)
        assert report.penalized == pytest.approx(generalized_bubble_energy(a1, a2), rel=1e-4)
        assert validate(net).angle_defect <= 1e-9

    def test_constructed_standard_case(self):
        net = make_generalized_bubble(2 * np.pi / 3, 2 * np.pi / 3, 400)
        assert penalized_energy(net).penalized == pytest.approx(BUBBLE_F, rel=1e-3)


class TestSerialization:
    def test_round_trip_bubble_bitwise(self, tmp_path):
        net = make_standard_double_bubble(RBAR, 60)
        path = tmp_path / "bubble.json"
        save_json(net, path)
        back = load_json(path)
        assert back.kind == net.kind
        for a, b in zip(back.curves, net.curves):
            assert np.array_equal(a.points, b.points)
        for a, b in zip(back.junctions, net.junctions):
            assert np.array_equal(a.position, b.position)
            assert a.frame_angle == b.frame_angle
            assert a.offsets == b.offsets

    def test_round_trip_all_kinds(self, tmp_path):
        nets = [
            make_circle(1.0, 32),
            make_teardrop(24),
            make_symmetric_double_drop(make_teardrop(24)),
            make_generalized_bubble(0.9, 1.6, 24),
            make_degenerate_figure_eight(48),
        ]
        for i, net in enumerate(nets):
            path = tmp_path / f"net{i}.json"
            save_json(net, path)
            back = load_json(path)
            assert back.kind == net.kind
            for a, b in zip(back.curves, net.curves):
                assert np.array_equal(a.points, b.points)

    def test_missing_kind(self):
        with pytest.raises(ParseError) as err:
            deserialize({"curves": [{"points": [[0, 0], [1, 0]]}]})
        assert "/kind" in str(err.value)

    def test_unknown_kind(self):
        with pytest.raises(ParseError):
            deserialize({"kind": "pentagon", "curves": [{"points": [[0, 0], [1, 0]]}]})

    def test_bad_angle_sum(self):
        doc = serialize(make_generalized_bubble(0.9, 1.6, 24))
        doc["angles"] = [0.9, 1.6, 1.9 * np.pi - 2.5]
        with pytest.raises(NetworkValidationError):
            deserialize(doc)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"kind": "closed", "curves": [{"points": [[0, 0], [1, Infinity], [0, 1]]}]}')
        with pytest.raises(ParseError):
            load_json(path)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_json(path)


class TestStandardFrame:
    def test_bubble_already_normalized(self):
        net = make_standard_double_bubble(RBAR, 64)
        normed = normalize_to_standard_frame(net)
        assert np.allclose(normed.junctions[0].position, 0.0, atol=1e-15)
        d = normed.junctions[0].outgoing_dir(0)
        assert np.allclose(d, [0.5, math.sqrt(3) / 2], atol=1e-12)

    def test_rotated_network_comes_back(self):
        net = rotate_network(make_standard_double_bubble(RBAR, 64), 1.234, about=(0.5, 0.5))
        normed = normalize_to_standard_frame(net)
        assert np.allclose(normed.junctions[0].position, 0.0, atol=1e-12)
        d = normed.junctions[0].outgoing_dir(0)
        assert np.allclose(d, [0.5, math.sqrt(3) / 2], atol=1e-12)
