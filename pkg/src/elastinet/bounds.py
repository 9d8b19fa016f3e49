"""Numeric certification of the curvature lower bounds.

All checks share one discretization: the total absolute curvature of a smooth
arc is the sum of interior |turning angles| plus a half-turn correction at
each end measured against the second-order endpoint tangent estimate, and
corner angles between arcs are measured between those same estimates.  With
consistent definitions the discrete inequality

    integral |k| ds  >=  2*pi - sum(theta_i)

is a theorem for polygons (the polygon turning at a corner is at most the two
half-turn corrections plus the corner angle, and the total turning of any
closed polygon is at least 2*pi), so every check below holds up to round-off,
not up to discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy import curvature_samples, curve_energy, elastic_energy, penalized_energy
from .errors import HypothesisNotMetError, InvalidInputError
from .geometry import (
    DiscreteCurve,
    VertexAngleSet,
    endpoint_tangents,
    external_angle,
    polyline_length,
    rotate_points,
    unit,
)
from .networks import Junction, Network, THETA_OFFSETS_END, THETA_OFFSETS_START

__all__ = [
    "PiecewiseClosedCurve",
    "InequalityCheck",
    "AmGmCheck",
    "ThetaBoundCheck",
    "total_abs_curvature",
    "arc_abs_curvature",
    "gauss_bonnet_check",
    "drop_bound_check",
    "pair_loop",
    "pair_bound_check",
    "amgm_energy_bound",
    "theta_lower_bound_check",
    "turning_cauchy_schwarz",
    "tangent_gap_bound",
    "random_piecewise_closed_curve",
    "random_theta_network",
    "random_drop",
]

_FLOAT_SLACK = 1e-9


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class AmGmCheck:
    f_value: float
    bound: float
    holds: bool
    abs_curvature: float
    length: float


@dataclass(frozen=True)
class ThetaBoundCheck:
    f_value: float
    bound: float
    holds: bool
    pair_values: tuple[float, float, float]
    pair_bound: float
    pairs_hold: bool
    identity_defect: float


@dataclass(frozen=True)
class PiecewiseClosedCurve:
    """Chained open arcs closing up into a loop, with corner angles in between.

    Arc i must end where arc (i+1) % N starts.  Corner angles are computed
    from the endpoint tangent estimates of the incident arcs; corners within
    tolerance of pi are flagged (their orientation is ambiguous) and counted
    as contributing pi.
    """

    arcs: tuple[DiscreteCurve, ...]
    closure_tol: float = 1e-9

    def __post_init__(self):
        arcs = tuple(self.arcs)
        object.__setattr__(self, "arcs", arcs)
        if not arcs:
            raise InvalidInputError("need at least one arc")
        if any(a.closed for a in arcs):
            raise InvalidInputError("arcs must be open curves")
        scale = max(self.diameter(), 1e-30)
        for i, arc in enumerate(arcs):
            nxt = arcs[(i + 1) % len(arcs)]
            gap = float(np.linalg.norm(arc.points[-1] - nxt.points[0]))
            if gap > self.closure_tol * scale + self.closure_tol:
                raise InvalidInputError(f"arc {i} does not chain to arc {(i + 1) % len(arcs)} (gap {gap:g})")

    def diameter(self) -> float:
        pts = np.vstack([a.points for a in self.arcs])
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))

    def corner_angles(self) -> VertexAngleSet:
        angles = []
        pi_corners = []
        n = len(self.arcs)
        for i in range(n):
            _, tau_end = endpoint_tangents(self.arcs[i])
            tau_start, _ = endpoint_tangents(self.arcs[(i + 1) % n])
            th = external_angle(tau_end, tau_start)
            angles.append(th)
            if abs(th - math.pi) < 1e-9:
                pi_corners.append(i)
        return VertexAngleSet(tuple(angles), tuple(pi_corners))

    def total_length(self) -> float:
        return float(sum(polyline_length(a) for a in self.arcs))


def arc_abs_curvature(arc: DiscreteCurve) -> float:
    """Total |turning| of one open arc including the endpoint half-cells."""
    tau0, tau1 = endpoint_tangents(arc)
    kappa, ell = curvature_samples(arc, clamp_start=tau0, clamp_end=tau1)
    return float(np.sum(np.abs(kappa) * ell))


def total_abs_curvature(curve: PiecewiseClosedCurve) -> float:
    """Discrete integral of |k| over the smooth arcs; corner angles excluded."""
    return float(sum(arc_abs_curvature(a) for a in curve.arcs))


def gauss_bonnet_check(curve: PiecewiseClosedCurve) -> InequalityCheck:
    """integral |k| ds >= 2*pi - sum of corner angles."""
    lhs = total_abs_curvature(curve)
    rhs = 2.0 * math.pi - sum(curve.corner_angles().angles)
    tol = _FLOAT_SLACK * (1.0 + lhs + abs(rhs))
    return InequalityCheck(lhs=lhs, rhs=rhs, holds=bool(lhs >= rhs - tol))


def _drop_loop(drop: Network) -> PiecewiseClosedCurve:
    (curve,) = drop.curves
    gap = float(np.linalg.norm(curve.points[0] - curve.points[-1]))
    if gap > 1e-6 * max(1.0, curve.points.__abs__().max()):
        raise InvalidInputError("drop endpoints do not coincide")
    return PiecewiseClosedCurve((curve,), closure_tol=1e-6)


def drop_bound_check(drop: Network) -> InequalityCheck:
    """integral |k| ds >= pi for a drop (one free corner of arbitrary angle)."""
    if drop.kind != "drop":
        raise InvalidInputError(f"expected a drop network, got {drop.kind!r}")
    lhs = total_abs_curvature(_drop_loop(drop))
    tol = _FLOAT_SLACK * (1.0 + lhs)
    return InequalityCheck(lhs=lhs, rhs=math.pi, holds=bool(lhs >= math.pi - tol))


def pair_loop(theta: Network, i: int, j: int) -> PiecewiseClosedCurve:
    """Closed loop gamma_i followed by gamma_j reversed, corners at the junctions."""
    if theta.kind not in ("theta", "generalized_theta"):
        raise InvalidInputError("pair loops are built from theta networks")
    if i == j:
        raise InvalidInputError("need two distinct curves")
    return PiecewiseClosedCurve((theta.curves[i], theta.curves[j].reversed()), closure_tol=1e-6)


def pair_bound_check(loop: PiecewiseClosedCurve, tol_ang: float = 1e-2) -> InequalityCheck:
    """integral |k| ds >= 4*pi/3 for a loop with two pi/3 corners."""
    corners = loop.corner_angles().angles
    if len(corners) != 2:
        raise InvalidInputError(f"expected exactly 2 corners, got {len(corners)}")
    for th in corners:
        if abs(th - math.pi / 3.0) > tol_ang:
            raise InvalidInputError(f"corner angle {th:.6f} is not pi/3 within {tol_ang:g}")
    lhs = total_abs_curvature(loop)
    rhs = 4.0 * math.pi / 3.0
    tol = _FLOAT_SLACK * (1.0 + lhs)
    return InequalityCheck(lhs=lhs, rhs=rhs, holds=bool(lhs >= rhs - tol))


def amgm_energy_bound(curve_or_loop, c: float) -> AmGmCheck:
    """F >= c^2/L + L >= 2c whenever integral |k| >= c > 0.

    Raises HypothesisNotMetError when the measured total curvature falls
    short of c; that is a misuse signal, not a failed inequality.
    """
    if not (c > 0):
        raise InvalidInputError("c must be positive")
    if isinstance(curve_or_loop, PiecewiseClosedCurve):
        total_k = total_abs_curvature(curve_or_loop)
        length = curve_or_loop.total_length()
        elastic = 0.0
        for a in curve_or_loop.arcs:
            tau0, tau1 = endpoint_tangents(a)
            elastic += curve_energy(a, tau0, tau1)[0]
    elif isinstance(curve_or_loop, DiscreteCurve):
        kappa, ell = curvature_samples(curve_or_loop)
        total_k = float(np.sum(np.abs(kappa) * ell))
        elastic = elastic_energy(curve_or_loop)
        length = polyline_length(curve_or_loop)
    else:
        raise InvalidInputError("expected a DiscreteCurve or PiecewiseClosedCurve")
    if total_k < c - _FLOAT_SLACK * (1.0 + c):
        raise HypothesisNotMetError(f"total |k| = {total_k:g} < c = {c:g}")
    f_val = elastic + length
    mid = c * c / length + length
    tol = _FLOAT_SLACK * (1.0 + f_val + 2.0 * c)
    holds = bool(f_val >= mid - tol and mid >= 2.0 * c - tol)
    return AmGmCheck(f_value=f_val, bound=2.0 * c, holds=holds, abs_curvature=total_k, length=length)


def theta_lower_bound_check(theta: Network) -> ThetaBoundCheck:
    """F(Gamma) >= 4*pi via the three pairwise loops, each with F >= 8*pi/3.

    The pair energies reuse the junction-frame end cells of the network
    energy, so the identity F = (F_12 + F_23 + F_31) / 2 is exact.
    """
    if theta.kind not in ("theta", "generalized_theta"):
        raise InvalidInputError("expected a theta network")
    report = penalized_energy(theta, 1.0)
    f_val = report.penalized
    per = [ce.penalized for ce in report.per_curve]
    pairs = (per[0] + per[1], per[1] + per[2], per[2] + per[0])
    pair_bound = 8.0 * math.pi / 3.0
    tol = _FLOAT_SLACK * (1.0 + f_val)
    pairs_hold = all(p >= pair_bound - tol for p in pairs)
    identity_defect = abs(0.5 * sum(pairs) - f_val)
    holds = bool(f_val >= 4.0 * math.pi - tol)
    return ThetaBoundCheck(
        f_value=f_val,
        bound=4.0 * math.pi,
        holds=holds,
        pair_values=pairs,
        pair_bound=pair_bound,
        pairs_hold=bool(pairs_hold),
        identity_defect=identity_defect,
    )


def turning_cauchy_schwarz(curve: DiscreteCurve) -> InequalityCheck:
    """integral |k| ds <= sqrt(E * L), sharp for constant curvature."""
    kappa, ell = curvature_samples(curve)
    lhs = float(np.sum(np.abs(kappa) * ell))
    rhs = math.sqrt(max(elastic_energy(curve) * polyline_length(curve), 0.0))
    tol = _FLOAT_SLACK * (1.0 + rhs)
    return InequalityCheck(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs + tol))


def tangent_gap_bound(curve: DiscreteCurve) -> InequalityCheck:
    """|tau(1) - tau(0)| <= sqrt(F * L) for an open curve.

    F here includes the endpoint half-cells (measured against the estimated
    end tangents); without them an under-resolved curve could hide turning in
    its end edges and beat the bound.
    """
    if curve.closed:
        raise InvalidInputError("expected an open curve")
    tau0, tau1 = endpoint_tangents(curve)
    gap = float(np.linalg.norm(tau1 - tau0))
    elastic, length = curve_energy(curve, tau0, tau1)
    rhs = math.sqrt((elastic + length) * length)
    tol = _FLOAT_SLACK * (1.0 + rhs)
    return InequalityCheck(lhs=gap, rhs=rhs, holds=bool(gap <= rhs + tol))


# ---------------------------------------------------------------------------
# seeded fuzz generators


def _fourier_bump(rng, t: np.ndarray, scale: float, modes: int = 3) -> np.ndarray:
    out = np.zeros_like(t)
    for j in range(1, modes + 1):
        out += rng.normal(0.0, scale / j) * np.sin(j * np.pi * t)
    return out


def random_piecewise_closed_curve(rng, samples_per_arc: int = 80) -> PiecewiseClosedCurve:
    """Random piecewise-smooth closed curve: Fourier arcs joined at corners."""
    if rng.random() < 0.3:
        # one smooth loop closing on itself with a (usually small) corner
        k = samples_per_arc
        th = 2.0 * np.pi * np.arange(k + 1) / k
        r = 1.0 + sum(
            rng.uniform(-0.08, 0.08) * np.cos(j * th + rng.uniform(0, 2 * np.pi)) for j in range(2, 6)
        )
        pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
        pts[-1] = pts[0]
        return PiecewiseClosedCurve((DiscreteCurve(pts),), closure_tol=1e-9)
    m = int(rng.integers(2, 6))
    ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, m))
    if np.min(np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))) < 0.3:
        ang = 2.0 * np.pi * np.arange(m) / m + rng.uniform(-0.2, 0.2, m)
    rad = rng.uniform(0.6, 1.4, m)
    corners = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    arcs = []
    t = np.linspace(0.0, 1.0, samples_per_arc)
    for i in range(m):
        a, b = corners[i], corners[(i + 1) % m]
        chord = b - a
        normal = np.array([-chord[1], chord[0]])
        bump = _fourier_bump(rng, t, 0.15)
        pts = a[None, :] + t[:, None] * chord[None, :] + bump[:, None] * normal[None, :]
        pts[0] = a
        pts[-1] = b
        arcs.append(DiscreteCurve(pts))
    return PiecewiseClosedCurve(tuple(arcs), closure_tol=1e-9)


def _hermite(p0, v0, p1, v1, t: np.ndarray) -> np.ndarray:
    t = t[:, None]
    h00 = 2 * t**3 - 3 * t**2 + 1
    h10 = t**3 - 2 * t**2 + t
    h01 = -2 * t**3 + 3 * t**2
    h11 = t**3 - t**2
    return h00 * p0 + h10 * v0 + h01 * p1 + h11 * v1


def random_theta_network(rng, n: int = 70) -> Network:
    """Random valid theta: Hermite curves honoring random 120 degree frames."""
    p2 = rng.uniform(1.0, 2.0) * unit(rng.uniform(0.0, 2.0 * np.pi))
    f1 = rng.uniform(0.0, 2.0 * np.pi)
    f2 = rng.uniform(0.0, 2.0 * np.pi)
    j1 = Junction(np.zeros(2), f1, THETA_OFFSETS_START)
    j2 = Junction(p2, f2, THETA_OFFSETS_END)
    dist = float(np.linalg.norm(p2))
    t = np.linspace(0.0, 1.0, n)
    curves = []
    for i in range(3):
        speed0 = dist * rng.uniform(1.0, 2.0)
        speed1 = dist * rng.uniform(1.0, 2.0)
        v0 = speed0 * j1.outgoing_dir(i)
        v1 = speed1 * (-j2.outgoing_dir(i))
        pts = _hermite(np.zeros(2), v0, p2, v1, t)
        pts[0] = 0.0
        pts[-1] = p2
        curves.append(DiscreteCurve(pts))
    return Network("theta", tuple(curves), (j1, j2))


def random_drop(rng, n: int = 90) -> Network:
    """Random drop: a wobbly loop through the origin with a free corner."""
    k = n
    th = 2.0 * np.pi * np.arange(k + 1) / k
    r = 1.0 + sum(
        rng.uniform(-0.12, 0.12) * np.cos(j * th + rng.uniform(0, 2 * np.pi)) for j in range(1, 5)
    )
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    pts = pts - pts[0]
    pts[-1] = pts[0]
    pts = rotate_points(pts, rng.uniform(0.0, 2.0 * np.pi))
    return Network("drop", (DiscreteCurve(pts),))
