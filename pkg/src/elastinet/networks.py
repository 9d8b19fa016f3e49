"""Curve networks: kinds, junction frames, reference shapes, JSON round-trip.

A network bundles one to three discrete curves with junction metadata.  At a
constrained junction the admissible outgoing tangent directions are encoded as
a single frame angle plus fixed per-curve offsets, which makes the prescribed
angles exact by construction and cheap to validate.

Kinds:

* ``closed``            one closed curve, no junctions
* ``drop``              one open curve with coincident endpoints, free corner
* ``double_drop``       two drops through a shared four-point, free angles
                        (in-memory extension used by the symmetric double-drop
                        minimizer; serialized with the same schema)
* ``theta``             three curves, two triple junctions, 120 degree frames
* ``degenerate_theta``  two curves through a four-point with angles paired
                        60/120 degrees (the zero-length third curve is not
                        stored; it contributes nothing to the energy)
* ``generalized_theta`` three curves, two junctions, prescribed angles
                        (a1, a2, a3) summing to 2*pi
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidCurveError,
    InvalidInputError,
    NetworkValidationError,
    ParseError,
    SingularAngleError,
)
from .geometry import (
    DiscreteCurve,
    endpoint_tangents,
    rotate_points,
    signed_angle,
    unit,
)

__all__ = [
    "KINDS",
    "Junction",
    "Network",
    "ValidationReport",
    "validate",
    "network_diameter",
    "curve_clamps",
    "translate_network",
    "rotate_network",
    "scale_network",
    "normalize_to_standard_frame",
    "make_circle",
    "make_ellipse",
    "make_teardrop",
    "make_symmetric_double_drop",
    "make_standard_double_bubble",
    "make_generalized_bubble",
    "make_degenerate_figure_eight",
    "generalized_bubble_energy",
    "optimal_bubble_radius",
    "serialize",
    "deserialize",
    "save_json",
    "load_json",
]

KINDS = ("closed", "drop", "double_drop", "theta", "degenerate_theta", "generalized_theta")

_TWO_THIRDS_PI = 2.0 * math.pi / 3.0

# Outgoing-direction offsets relative to the junction frame.  At the second
# junction of a theta the cyclic order of the curves reverses.
THETA_OFFSETS_START = (0.0, _TWO_THIRDS_PI, 2.0 * _TWO_THIRDS_PI)
THETA_OFFSETS_END = (0.0, 2.0 * _TWO_THIRDS_PI, _TWO_THIRDS_PI)

# Four-point slots in order (c0 start, c0 end, c1 start, c1 end); the two
# admissible pairings of 60/120 degree sectors around the point.
DEGENERATE_OFFSET_VARIANTS = (
    (0.0, math.pi / 3.0, 4.0 * math.pi / 3.0, math.pi),
    (0.0, 2.0 * math.pi / 3.0, 5.0 * math.pi / 3.0, math.pi),
)

_CURVE_COUNT = {
    "closed": 1,
    "drop": 1,
    "double_drop": 2,
    "theta": 3,
    "degenerate_theta": 2,
    "generalized_theta": 3,
}
_JUNCTION_COUNT = {
    "closed": 0,
    "drop": 0,
    "double_drop": 0,
    "theta": 2,
    "degenerate_theta": 1,
    "generalized_theta": 2,
}


def _wrap_pi(a):
    """Wrap angle(s) to (-pi, pi]."""
    return np.mod(np.asarray(a) + np.pi, 2.0 * np.pi) - np.pi


@dataclass(frozen=True)
class Junction:
    """Triple (or four-) point with a tangent frame.

    Outgoing direction of slot k is ``frame_angle + offsets[k]``.  Slots are
    curve indices for theta kinds and (c0 start, c0 end, c1 start, c1 end)
    for the degenerate four-point.
    """

    position: np.ndarray
    frame_angle: float
    offsets: tuple[float, ...]

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float).reshape(2)
        if not np.all(np.isfinite(pos)):
            raise InvalidInputError("junction position must be finite")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "offsets", tuple(float(o) for o in self.offsets))

    def outgoing_dir(self, slot: int) -> np.ndarray:
        return unit(self.frame_angle + self.offsets[slot])


@dataclass(frozen=True)
class Network:
    kind: str
    curves: tuple[DiscreteCurve, ...]
    junctions: tuple[Junction, ...] = ()
    prescribed_angles: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown network kind {self.kind!r}")
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "junctions", tuple(self.junctions))
        if len(self.curves) != _CURVE_COUNT[self.kind]:
            raise NetworkValidationError(
                f"kind {self.kind!r} needs {_CURVE_COUNT[self.kind]} curves, got {len(self.curves)}"
            )
        if len(self.junctions) != _JUNCTION_COUNT[self.kind]:
            raise NetworkValidationError(
                f"kind {self.kind!r} needs {_JUNCTION_COUNT[self.kind]} junctions, got {len(self.junctions)}"
            )
        if self.kind == "closed":
            if not self.curves[0].closed:
                raise NetworkValidationError("closed network needs a closed curve")
        elif any(c.closed for c in self.curves):
            raise NetworkValidationError(f"{self.kind} networks are built from open curves")
        if self.kind == "generalized_theta":
            if self.prescribed_angles is None:
                raise NetworkValidationError("generalized network needs prescribed angles")
            ang = tuple(float(a) for a in self.prescribed_angles)
            if len(ang) != 3 or any(not (0.0 < a < 2.0 * math.pi) for a in ang):
                raise NetworkValidationError("prescribed angles must lie in (0, 2*pi)")
            if abs(sum(ang) - 2.0 * math.pi) > 1e-9:
                raise NetworkValidationError("prescribed angles must sum to 2*pi")
            object.__setattr__(self, "prescribed_angles", ang)
        elif self.prescribed_angles is not None:
            raise NetworkValidationError("prescribed angles only apply to generalized networks")


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    junction_gap: float
    angle_defect: float


def network_diameter(network: Network) -> float:
    pts = np.vstack([c.points for c in network.curves])
    span = pts.max(axis=0) - pts.min(axis=0)
    return float(np.linalg.norm(span))


def _estimated_outgoing(curve: DiscreteCurve) -> tuple[np.ndarray, np.ndarray]:
    """Outgoing direction estimates at (start, end) of an open curve."""
    tau0, tau1 = endpoint_tangents(curve)
    return tau0, -tau1


def curve_clamps(network: Network, i: int):
    """Prescribed endpoint travel directions of curve i, or (None, None).

    Returns (start direction, incoming direction at the end); both unit
    vectors for junction-constrained kinds.
    """
    if network.kind in ("theta", "generalized_theta"):
        j0, j1 = network.junctions
        return j0.outgoing_dir(i), -j1.outgoing_dir(i)
    if network.kind == "degenerate_theta":
        (j,) = network.junctions
        return j.outgoing_dir(2 * i), -j.outgoing_dir(2 * i + 1)
    return None, None


def validate(network: Network, tol_pos: float | None = None, tol_ang: float = 1e-6) -> ValidationReport:
    """Check incidence and angle invariants of a network.

    ``tol_pos`` defaults to 1e-9 times the network diameter; ``tol_ang`` is in
    radians.  Junction tangents are estimated to second order from the first
    points of each curve, so exact constructions validate to round-off.
    """
    if tol_pos is None:
        tol_pos = 1e-9 * max(network_diameter(network), 1e-30)
    if tol_pos <= 0 or tol_ang <= 0:
        raise InvalidInputError("tolerances must be positive")

    gap = 0.0
    defect = 0.0
    kind = network.kind
    if kind == "closed":
        pass
    elif kind == "drop":
        pts = network.curves[0].points
        gap = float(np.linalg.norm(pts[0] - pts[-1]))
    elif kind == "double_drop":
        p = network.curves[0].points[0]
        for c in network.curves:
            gap = max(gap, float(np.linalg.norm(c.points[0] - p)))
            gap = max(gap, float(np.linalg.norm(c.points[-1] - p)))
    elif kind in ("theta", "generalized_theta"):
        j0, j1 = network.junctions
        for i, c in enumerate(network.curves):
            gap = max(gap, float(np.linalg.norm(c.points[0] - j0.position)))
            gap = max(gap, float(np.linalg.norm(c.points[-1] - j1.position)))
            d_start, d_end_in = _estimated_outgoing(c)
            defect = max(defect, abs(float(signed_angle(j0.outgoing_dir(i), d_start))))
            defect = max(defect, abs(float(signed_angle(j1.outgoing_dir(i), d_end_in))))
    elif kind == "degenerate_theta":
        (j,) = network.junctions
        for i, c in enumerate(network.curves):
            gap = max(gap, float(np.linalg.norm(c.points[0] - j.position)))
            gap = max(gap, float(np.linalg.norm(c.points[-1] - j.position)))
            d_start, d_end_out = _estimated_outgoing(c)
            defect = max(defect, abs(float(signed_angle(j.outgoing_dir(2 * i), d_start))))
            defect = max(defect, abs(float(signed_angle(j.outgoing_dir(2 * i + 1), d_end_out))))
        defect = max(defect, _degenerate_pattern_defect(j))
    else:  # pragma: no cover - kinds are exhausted above
        raise InvalidInputError(f"unknown kind {kind!r}")

    return ValidationReport(valid=(gap <= tol_pos and defect <= tol_ang), junction_gap=gap, angle_defect=defect)


def _degenerate_pattern_defect(j: Junction) -> float:
    """Deviation of the four-point offsets from the 60/120 pairing."""
    gaps = np.sort(np.mod(np.asarray(j.offsets), 2.0 * np.pi))
    gaps = np.diff(np.concatenate([gaps, [gaps[0] + 2.0 * np.pi]]))
    best = np.inf
    for pattern in ([1, 2, 1, 2], [2, 1, 2, 1]):
        d = float(np.max(np.abs(gaps - np.asarray(pattern) * (np.pi / 3.0))))
        best = min(best, d)
    return best


# ---------------------------------------------------------------------------
# rigid motions and rescaling


def _map_network(network: Network, point_map, frame_shift: float = 0.0) -> Network:
    curves = tuple(DiscreteCurve(point_map(c.points), c.closed) for c in network.curves)
    junctions = tuple(
        Junction(point_map(j.position[None, :])[0], j.frame_angle + frame_shift, j.offsets)
        for j in network.junctions
    )
    return Network(network.kind, curves, junctions, network.prescribed_angles)


def translate_network(network: Network, delta) -> Network:
    delta = np.asarray(delta, float)
    return _map_network(network, lambda p: p + delta)


def rotate_network(network: Network, angle: float, about=(0.0, 0.0)) -> Network:
    return _map_network(network, lambda p: rotate_points(p, angle, about), frame_shift=angle)


def scale_network(network: Network, factor: float, about=None) -> Network:
    """Dilate the network.  Defaults to scaling about the first junction."""
    if factor <= 0:
        raise InvalidInputError("scale factor must be positive")
    if about is None:
        about = network.junctions[0].position if network.junctions else np.zeros(2)
    about = np.asarray(about, float)
    return _map_network(network, lambda p: about + factor * (p - about))


def normalize_to_standard_frame(network: Network) -> Network:
    """Move the first junction to the origin and align curve 0 to 60 degrees.

    For junction-free kinds this just recenters (drop closure point, or the
    centroid of a closed curve) at the origin.
    """
    if network.junctions:
        j0 = network.junctions[0]
        net = translate_network(network, -j0.position)
        current = j0.frame_angle + j0.offsets[0]
        return rotate_network(net, math.pi / 3.0 - current)
    if network.kind in ("drop", "double_drop"):
        return translate_network(network, -network.curves[0].points[0])
    centroid = np.vstack([c.points for c in network.curves]).mean(axis=0)
    return translate_network(network, -centroid)


# ---------------------------------------------------------------------------
# reference constructions


def make_circle(radius: float, n: int) -> Network:
    """Regular counterclockwise n-gon on a circle of the given radius."""
    if radius <= 0:
        raise InvalidInputError("radius must be positive")
    if n < 8:
        raise InvalidInputError("need n >= 8 points")
    ang = 2.0 * np.pi * np.arange(n) / n
    pts = radius * np.column_stack([np.cos(ang), np.sin(ang)])
    return Network("closed", (DiscreteCurve(pts, closed=True),))


def make_ellipse(a: float, b: float, n: int) -> Network:
    """Closed ellipse with semi-axes a, b, near-uniform arclength sampling."""
    if a <= 0 or b <= 0:
        raise InvalidInputError("semi-axes must be positive")
    t = 2.0 * np.pi * np.arange(4 * n) / (4 * n)
    dense = np.column_stack([a * np.cos(t), b * np.sin(t)])
    from .geometry import resample_uniform

    curve = resample_uniform(DiscreteCurve(dense, closed=True), n)
    return Network("closed", (curve,))


def make_teardrop(n: int, scale: float = 1.0) -> Network:
    """Drop-shaped initializer: one lobe of a Gerono figure eight at the origin."""
    if n < 8:
        raise InvalidInputError("need n >= 8 segments")
    t = np.linspace(0.0, np.pi, 8 * n)
    dense = scale * np.column_stack([0.5 * np.sin(2.0 * t), np.sin(t)])
    dense[0] = 0.0
    dense[-1] = 0.0
    from .geometry import resample_uniform

    curve = resample_uniform(DiscreteCurve(dense, closed=False), n)
    return Network("drop", (curve,))


def mirror_drop_curve(curve: DiscreteCurve) -> DiscreteCurve:
    """Point reflection through the origin with reversed parametrization."""
    return DiscreteCurve((-curve.points[::-1]).copy(), closed=False)


def make_symmetric_double_drop(drop: Network) -> Network:
    """Pair a drop γ with its point reflection γ2(t) = -γ(1-t)."""
    if drop.kind != "drop":
        raise InvalidInputError("expected a drop network")
    c1 = drop.curves[0]
    c1 = DiscreteCurve(c1.points - c1.points[0], closed=False)
    return Network("double_drop", (c1, mirror_drop_curve(c1)))


def _arc_points(center, radius: float, angle0: float, sweep: float, n: int) -> np.ndarray:
    ang = angle0 + sweep * np.linspace(0.0, 1.0, n)
    return np.asarray(center, float) + radius * np.column_stack([np.cos(ang), np.sin(ang)])


def optimal_bubble_radius() -> float:
    """Arc radius minimizing the standard double-bubble energy."""
    return math.sqrt(8.0 * math.pi / (3.0 * math.sqrt(3.0) + 8.0 * math.pi))


def make_standard_double_bubble(r: float, n: int) -> Network:
    """Two 240 degree arcs of radius r plus the straight middle segment.

    Built in the frame used for the junction computations: first junction at
    the origin with outgoing directions 60/180/300 degrees, second junction at
    (-sqrt(3) r, 0).  Curve 0 is the upper arc (counterclockwise), curve 1 the
    segment, curve 2 the lower arc (clockwise).
    """
    if r <= 0:
        raise InvalidInputError("radius must be positive")
    if n < 8:
        raise InvalidInputError("need n >= 8 points per curve")
    sweep = 4.0 * np.pi / 3.0
    c_up = r * np.array([-math.sqrt(3.0) / 2.0, 0.5])
    c_dn = r * np.array([-math.sqrt(3.0) / 2.0, -0.5])
    p2 = np.array([-math.sqrt(3.0) * r, 0.0])

    upper = _arc_points(c_up, r, -np.pi / 6.0, sweep, n)
    lower = _arc_points(c_dn, r, np.pi / 6.0, -sweep, n)
    seg = np.linspace([0.0, 0.0], p2, n)
    # pin shared endpoints bitwise
    upper[0] = 0.0
    lower[0] = 0.0
    upper[-1] = p2
    lower[-1] = p2

    j1 = Junction(np.zeros(2), np.pi / 3.0, THETA_OFFSETS_START)
    j2 = Junction(p2, 2.0 * np.pi / 3.0, THETA_OFFSETS_END)
    curves = (
        DiscreteCurve(upper),
        DiscreteCurve(seg),
        DiscreteCurve(lower),
    )
    return Network("theta", curves, (j1, j2))


def generalized_bubble_energy(alpha1: float, alpha2: float) -> float:
    """Optimally rescaled energy of two circular arcs joined by a segment."""
    if not (0.0 < alpha1 <= alpha2) or alpha1 + alpha2 >= 2.0 * math.pi:
        raise InvalidInputError("need 0 < alpha1 <= alpha2 and alpha1 + alpha2 < 2*pi")
    s1, s2 = math.sin(alpha1), math.sin(alpha2)
    if abs(s1) < 1e-12 or abs(s2) < 1e-12:
        raise SingularAngleError("sin(alpha) vanishes; arc construction degenerates")
    r1 = alpha1 + alpha2 * s2 / s1
    r2 = alpha1 + alpha2 * s1 / s2 + s1
    if r1 <= 0.0 or r2 <= 0.0:
        raise SingularAngleError("closed form leaves its real domain for these angles")
    return 4.0 * math.sqrt(r1) * math.sqrt(r2)


def make_generalized_bubble(alpha1: float, alpha2: float, n: int, segment_length: float | None = None) -> Network:
    """Generalized-theta competitor: arcs of central angle 2*alpha joined by a segment.

    With ``segment_length`` omitted the construction uses the optimally
    rescaled size, whose energy matches ``generalized_bubble_energy``.
    """
    if not (0.0 < alpha1 <= alpha2) or alpha1 + alpha2 >= 2.0 * math.pi:
        raise InvalidInputError("need 0 < alpha1 <= alpha2 and alpha1 + alpha2 < 2*pi")
    if alpha2 >= math.pi:
        raise SingularAngleError("arc construction needs alpha < pi on both sides")
    if n < 8:
        raise InvalidInputError("need n >= 8 points per curve")
    s1, s2 = math.sin(alpha1), math.sin(alpha2)
    if segment_length is None:
        # equipartition E = L fixes the scale
        e_unit = 4.0 * (alpha1 * s1 + alpha2 * s2)
        l_unit = 1.0 + alpha1 / s1 + alpha2 / s2
        segment_length = math.sqrt(e_unit / l_unit)
    ell = float(segment_length)
    if ell <= 0:
        raise InvalidInputError("segment length must be positive")
    r_up = ell / (2.0 * s1)
    r_dn = ell / (2.0 * s2)
    p2 = np.array([-ell, 0.0])
    # upper arc leaves the origin at angle pi - alpha1, counterclockwise
    c_up = r_up * unit(math.pi - alpha1 + math.pi / 2.0)
    a_up0 = math.atan2(-c_up[1], -c_up[0])
    upper = _arc_points(c_up, r_up, a_up0, 2.0 * alpha1, n)
    # lower arc leaves at pi + alpha2, clockwise
    c_dn = r_dn * unit(math.pi + alpha2 - math.pi / 2.0)
    a_dn0 = math.atan2(-c_dn[1], -c_dn[0])
    lower = _arc_points(c_dn, r_dn, a_dn0, -2.0 * alpha2, n)
    seg = np.linspace([0.0, 0.0], p2, n)
    upper[0] = 0.0
    lower[0] = 0.0
    upper[-1] = p2
    lower[-1] = p2

    alpha3 = 2.0 * math.pi - alpha1 - alpha2
    j1 = Junction(np.zeros(2), math.pi - alpha1, (0.0, alpha1, alpha1 + alpha2))
    j2 = Junction(p2, alpha1, (0.0, 2.0 * math.pi - alpha1, 2.0 * math.pi - alpha1 - alpha2))
    curves = (DiscreteCurve(upper), DiscreteCurve(seg), DiscreteCurve(lower))
    return Network("generalized_theta", curves, (j1, j2), (alpha1, alpha2, alpha3))


def make_degenerate_figure_eight(n: int, scale: float | None = None) -> Network:
    """Figure-eight shaped degenerate theta: two mirrored lobes with flat caps.

    The upper lobe leaves the four-point at 60 degrees and returns at -60,
    the lower lobe is its point reflection, so the four tangents realize the
    60/120 pairing exactly.  Each lobe is two circular arcs followed by a
    straight horizontal cap, mirror symmetric about the y-axis: cutting the
    lobe at a horizontal-tangent point (the recovery construction) then
    splits a zero-curvature edge and changes the energy by exactly the
    inserted length.

    With ``scale`` omitted the lobes are optimally rescaled (E = L).
    """
    m = max(12, n // 2)
    r1 = 1.0
    sweep1 = math.pi / 6.0
    r2 = 0.5 * r1 * (1.0 - math.sqrt(3.0) / 2.0)
    sweep2 = math.pi / 2.0
    cap = r1 * (1.0 - math.sqrt(3.0) / 2.0) - r2
    len1 = r1 * sweep1
    len2 = r2 * sweep2
    s_half = len1 + len2 + cap
    c1 = r1 * unit(math.pi / 3.0 + math.pi / 2.0)
    switch = c1 + r1 * unit(-math.pi / 6.0 + sweep1)
    c2 = switch + r2 * unit(math.pi)
    y_apex = 0.5 * r1 + r2

    # sample the right half excluding the apex so the apex sits mid-edge
    step = s_half / (m - 0.5)
    s_vals = np.arange(m) * step
    right = np.empty((m, 2))
    on1 = s_vals <= len1 + 1e-15
    on2 = (~on1) & (s_vals <= len1 + len2 + 1e-15)
    on3 = ~(on1 | on2)
    th1 = -math.pi / 6.0 + s_vals[on1] / r1
    right[on1] = c1 + r1 * np.column_stack([np.cos(th1), np.sin(th1)])
    th2 = (s_vals[on2] - len1) / r2
    right[on2] = c2 + r2 * np.column_stack([np.cos(th2), np.sin(th2)])
    right[on3, 0] = cap - (s_vals[on3] - len1 - len2)
    right[on3, 1] = y_apex
    right[0] = 0.0

    left = right[::-1].copy()
    left[:, 0] = -left[:, 0]
    upper = np.vstack([right, left])

    lobe_up = DiscreteCurve(upper)
    lobe_dn = mirror_drop_curve(lobe_up)
    j = Junction(np.zeros(2), math.pi / 3.0, DEGENERATE_OFFSET_VARIANTS[0])
    net = Network("degenerate_theta", (lobe_up, lobe_dn), (j,))
    if scale is None:
        e_unit = 4.0 * (sweep1 / r1 + sweep2 / r2)
        l_unit = 4.0 * s_half
        scale = math.sqrt(e_unit / l_unit)
    return scale_network(net, float(scale), about=(0.0, 0.0))


# ---------------------------------------------------------------------------
# serialization


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ParseError(f"missing {key!r}", f"{path}/{key}")
    return doc[key]


def _finite_pair(value, path: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected a number pair: {exc}", path) from None
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise ParseError("expected a finite [x, y] pair", path)
    return arr


def serialize(network: Network) -> dict:
    """JSON-ready document; coordinates survive a round trip bit for bit."""
    doc: dict = {"kind": network.kind}
    if network.kind == "generalized_theta":
        doc["angles"] = [float(a) for a in network.prescribed_angles]
    doc["curves"] = [{"points": c.points.tolist()} for c in network.curves]
    doc["junctions"] = [
        {"position": j.position.tolist(), "frame_angle": float(j.frame_angle)}
        for j in network.junctions
    ]
    return doc


def _fit_offsets(frame, slot_dirs, candidates):
    """Assign each slot the candidate offset closest to its estimated direction."""
    offsets = []
    for d in slot_dirs:
        est = math.atan2(d[1], d[0])
        errs = [abs(float(_wrap_pi(est - (frame + c)))) for c in candidates]
        offsets.append(candidates[int(np.argmin(errs))])
    return tuple(offsets)


def deserialize(doc: dict) -> Network:
    """Parse a network document, rebuilding junction slot offsets from geometry."""
    if not isinstance(doc, dict):
        raise ParseError("document must be an object", "/")
    kind = _require(doc, "kind", "")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", "/kind")

    curves_doc = _require(doc, "curves", "")
    if not isinstance(curves_doc, list) or not curves_doc:
        raise ParseError("curves must be a non-empty list", "/curves")
    curves = []
    for ci, cdoc in enumerate(curves_doc):
        if not isinstance(cdoc, dict):
            raise ParseError("curve must be an object", f"/curves/{ci}")
        pts_doc = _require(cdoc, "points", f"/curves/{ci}")
        if not isinstance(pts_doc, list) or len(pts_doc) < 2:
            raise ParseError("points must list at least 2 pairs", f"/curves/{ci}/points")
        pts = np.empty((len(pts_doc), 2))
        for pi, p in enumerate(pts_doc):
            pts[pi] = _finite_pair(p, f"/curves/{ci}/points/{pi}")
        try:
            curves.append(DiscreteCurve(pts, closed=(kind == "closed")))
        except InvalidCurveError as exc:
            raise ParseError(str(exc), f"/curves/{ci}") from None

    junctions_doc = doc.get("junctions", [])
    if not isinstance(junctions_doc, list):
        raise ParseError("junctions must be a list", "/junctions")
    raw_junctions = []
    for ji, jdoc in enumerate(junctions_doc):
        if not isinstance(jdoc, dict):
            raise ParseError("junction must be an object", f"/junctions/{ji}")
        pos = _finite_pair(_require(jdoc, "position", f"/junctions/{ji}"), f"/junctions/{ji}/position")
        frame = _require(jdoc, "frame_angle", f"/junctions/{ji}")
        if not isinstance(frame, (int, float)) or not math.isfinite(frame):
            raise ParseError("frame_angle must be a finite number", f"/junctions/{ji}/frame_angle")
        raw_junctions.append((pos, float(frame)))

    angles = None
    if kind == "generalized_theta":
        ang_doc = _require(doc, "angles", "")
        if not isinstance(ang_doc, list) or len(ang_doc) != 3:
            raise ParseError("angles must list three numbers", "/angles")
        angles = []
        for ai, a in enumerate(ang_doc):
            if not isinstance(a, (int, float)) or not math.isfinite(a):
                raise ParseError("angle must be a finite number", f"/angles/{ai}")
            angles.append(float(a))
        angles = tuple(angles)
    elif "angles" in doc:
        raise ParseError("angles only apply to generalized networks", "/angles")

    junctions = _rebuild_junctions(kind, curves, raw_junctions, angles)
    return Network(kind, tuple(curves), junctions, angles)


def _rebuild_junctions(kind, curves, raw_junctions, angles):
    if kind in ("closed", "drop", "double_drop"):
        if raw_junctions:
            raise ParseError("this kind carries no junctions", "/junctions")
        return ()
    if kind in ("theta", "generalized_theta"):
        if len(raw_junctions) != 2:
            raise ParseError("expected exactly 2 junctions", "/junctions")
        out = []
        for ji, (pos, frame) in enumerate(raw_junctions):
            dirs = []
            for c in curves:
                d0, d1 = _estimated_outgoing(c)
                dirs.append(d0 if ji == 0 else d1)
            if angles is None:
                candidates = list(THETA_OFFSETS_START)
            else:
                a1, a2 = angles[0], angles[1]
                candidates = [0.0, a1, a1 + a2, 2.0 * math.pi - a1, 2.0 * math.pi - a1 - a2]
            offsets = _fit_offsets(frame, dirs, candidates)
            out.append(Junction(pos, frame, offsets))
        return tuple(out)
    if kind == "degenerate_theta":
        if len(raw_junctions) != 1:
            raise ParseError("expected exactly 1 junction", "/junctions")
        pos, frame = raw_junctions[0]
        dirs = []
        for c in curves:
            d0, d1 = _estimated_outgoing(c)
            dirs.extend([d0, d1])
        candidates = sorted(set(DEGENERATE_OFFSET_VARIANTS[0]) | set(DEGENERATE_OFFSET_VARIANTS[1]))
        offsets = _fit_offsets(frame, dirs, candidates)
        return (Junction(pos, frame, offsets),)
    raise ParseError(f"unknown kind {kind!r}", "/kind")  # pragma: no cover


def _reject_constant(name):
    raise ParseError(f"non-finite number {name!r} is not allowed", "/")


def load_json(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", "/") from None
    return deserialize(doc)


def save_json(network: Network, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize(network), fh)
        fh.write("\n")
