"""Discrete planar curves: polylines with turning-angle curvature.

A curve is an ordered list of points in the plane, open or closed.  Curvature
lives on vertices as signed turning angle divided by the dual length
(half the sum of the two incident edge lengths); counterclockwise turning is
positive.  This makes the total signed turning of a closed polygon an exact
multiple of the winding and keeps every downstream inequality sharp at the
discrete level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError, InvalidCurveError

__all__ = [
    "DiscreteCurve",
    "VertexAngleSet",
    "polyline_length",
    "resample_uniform",
    "edge_vectors",
    "edge_lengths",
    "edge_tangents",
    "turning_angles",
    "dual_lengths",
    "vertex_curvature",
    "vertex_arclengths",
    "external_angle",
    "signed_angle",
    "endpoint_tangents",
    "rot90",
    "unit",
    "rotate_points",
]


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidCurveError(f"points must have shape (n, 2), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidCurveError("points contain non-finite coordinates")
    return pts


@dataclass(frozen=True)
class DiscreteCurve:
    """Ordered point sequence approximating a regular plane curve.

    ``closed`` curves wrap around (the closing edge is implicit, the first
    point is not repeated).  Consecutive points must be distinct, the discrete
    analogue of |dγ/dx| != 0.
    """

    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = _as_points(self.points)
        object.__setattr__(self, "points", pts)
        n_min = 3 if self.closed else 2
        if len(pts) < n_min:
            raise InvalidCurveError(
                f"need at least {n_min} points for a {'closed' if self.closed else 'open'} curve"
            )
        if np.any(edge_lengths(pts, self.closed) == 0.0):
            raise InvalidCurveError("consecutive points must be distinct")

    @property
    def n_points(self) -> int:
        return len(self.points)

    def reversed(self) -> "DiscreteCurve":
        return DiscreteCurve(self.points[::-1].copy(), self.closed)

    def translated(self, delta) -> "DiscreteCurve":
        return DiscreteCurve(self.points + np.asarray(delta, float), self.closed)

    def rotated(self, angle: float, about=(0.0, 0.0)) -> "DiscreteCurve":
        return DiscreteCurve(rotate_points(self.points, angle, about), self.closed)

    def scaled(self, factor: float, about=(0.0, 0.0)) -> "DiscreteCurve":
        about = np.asarray(about, float)
        return DiscreteCurve(about + factor * (self.points - about), self.closed)


@dataclass(frozen=True)
class VertexAngleSet:
    """External angles at designated corner vertices of a piecewise curve."""

    angles: tuple[float, ...]
    pi_corners: tuple[int, ...] = field(default=())

    def __post_init__(self):
        for th in self.angles:
            if not (-1e-12 <= th <= np.pi + 1e-12):
                raise InvalidCurveError(f"corner angle {th} outside [0, pi]")


def rot90(v: np.ndarray) -> np.ndarray:
    """Counterclockwise quarter turn, works on (..., 2) arrays."""
    out = np.empty_like(v)
    out[..., 0] = -v[..., 1]
    out[..., 1] = v[..., 0]
    return out


def unit(angle: float) -> np.ndarray:
    return np.array([np.cos(angle), np.sin(angle)])


def rotate_points(points: np.ndarray, angle: float, about=(0.0, 0.0)) -> np.ndarray:
    about = np.asarray(about, float)
    c, s = np.cos(angle), np.sin(angle)
    rel = np.asarray(points, float) - about
    return about + rel @ np.array([[c, s], [-s, c]])


def _points_of(curve) -> tuple[np.ndarray, bool]:
    if isinstance(curve, DiscreteCurve):
        return curve.points, curve.closed
    return _as_points(curve), False


def edge_vectors(points, closed: bool = False) -> np.ndarray:
    pts = np.asarray(points, float)
    if closed:
        return np.roll(pts, -1, axis=0) - pts
    return pts[1:] - pts[:-1]


def edge_lengths(points, closed: bool = False) -> np.ndarray:
    return np.linalg.norm(edge_vectors(points, closed), axis=1)


def polyline_length(curve) -> float:
    """Total length of the polyline (including the closing edge if closed)."""
    pts, closed = _points_of(curve)
    if len(pts) < 2:
        raise InvalidCurveError("length needs at least 2 points")
    return float(edge_lengths(pts, closed).sum())


def edge_tangents(curve) -> np.ndarray:
    """Unit tangent of every segment, oriented along the parametrization."""
    pts, closed = _points_of(curve)
    e = edge_vectors(pts, closed)
    a = np.linalg.norm(e, axis=1)
    if np.any(a == 0.0):
        raise InvalidCurveError("zero-length edge")
    return e / a[:, None]


def signed_angle(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Signed angle from u to v in (-pi, pi], counterclockwise positive."""
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    cross = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    dot = u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]
    return np.arctan2(cross, dot)


def turning_angles(curve) -> np.ndarray:
    """Signed turning at each vertex: all vertices if closed, interior if open."""
    pts, closed = _points_of(curve)
    e = edge_vectors(pts, closed)
    if closed:
        return signed_angle(np.roll(e, 1, axis=0), e)
    return signed_angle(e[:-1], e[1:])


def dual_lengths(curve) -> np.ndarray:
    """Dual cell length per curvature vertex: (|e_in| + |e_out|) / 2."""
    pts, closed = _points_of(curve)
    a = edge_lengths(pts, closed)
    if closed:
        return 0.5 * (np.roll(a, 1) + a)
    return 0.5 * (a[:-1] + a[1:])


def vertex_curvature(curve) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex (kappa_i, ell_i) with kappa = turning angle / dual length.

    Closed curves carry curvature at every vertex, open curves only at
    interior vertices; endpoints of open curves hold no turning of their own.
    """
    pts, closed = _points_of(curve)
    if len(pts) < 3:
        raise InvalidCurveError("curvature needs at least 3 points")
    if np.any(edge_lengths(pts, closed) == 0.0):
        raise InvalidCurveError("zero-length edge")
    psi = turning_angles(curve)
    ell = dual_lengths(curve)
    return psi / ell, ell


def vertex_arclengths(curve) -> np.ndarray:
    """Arclength position of every point along the polyline, starting at 0."""
    pts, closed = _points_of(curve)
    a = edge_lengths(pts, closed)
    s = np.concatenate([[0.0], np.cumsum(a)])
    return s[: len(pts)] if closed else s


def external_angle(tangent_in, tangent_out) -> float:
    """Angle in [0, pi] between two unit tangents, orientation independent."""
    t_in = np.asarray(tangent_in, float)
    t_out = np.asarray(tangent_out, float)
    for t in (t_in, t_out):
        if abs(np.linalg.norm(t) - 1.0) > 1e-6:
            raise ContractViolationError(f"tangent {t} is not unit norm")
    dot = float(np.clip(np.dot(t_in, t_out), -1.0, 1.0))
    return float(np.arccos(dot))


def endpoint_tangents(curve) -> tuple[np.ndarray, np.ndarray]:
    """Second-order tangent estimates at the two ends of an open curve.

    The first edge direction is rotated back by half the turning at the first
    interior vertex (and symmetrically at the far end).  Exact on uniformly
    sampled circular arcs and on straight lines.
    """
    pts, closed = _points_of(curve)
    if closed:
        raise InvalidCurveError("endpoint tangents are defined for open curves")
    t = edge_tangents(curve)
    if len(t) == 1:
        return t[0].copy(), t[0].copy()
    psi_first = float(signed_angle(t[0], t[1]))
    psi_last = float(signed_angle(t[-2], t[-1]))
    tau0 = rotate_points(t[0][None, :], -0.5 * psi_first)[0]
    tau1 = rotate_points(t[-1][None, :], 0.5 * psi_last)[0]
    return tau0, tau1


def resample_uniform(curve, n: int) -> DiscreteCurve:
    """Resample to uniform spacing: n + 1 points (open) or n points (closed).

    Open curves keep their endpoints, closed curves keep the first point.
    All samples lie on the input polyline; the sample parameters are iterated
    to the equal-chord fixed point, so the output segment lengths agree to
    round-off and resampling an already-resampled curve is the identity
    within 1e-9.
    """
    if n < 3:
        raise InvalidCurveError("resampling needs n >= 3")
    pts, closed = _points_of(curve)
    ext = np.vstack([pts, pts[0]]) if closed else pts
    seg = np.linalg.norm(ext[1:] - ext[:-1], axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if total <= 0.0:
        raise InvalidCurveError("cannot resample a zero-length curve")

    m = n if closed else n + 1
    targets = np.arange(m) * (total / n) if closed else np.linspace(0.0, total, m)
    for _ in range(12):
        x = np.interp(targets, s, ext[:, 0])
        y = np.interp(targets, s, ext[:, 1])
        out = np.column_stack([x, y])
        loop = np.vstack([out, [np.interp(total, s, ext[:, 0]), np.interp(total, s, ext[:, 1])]]) if closed else out
        chord = np.linalg.norm(loop[1:] - loop[:-1], axis=1)
        spread = np.max(chord) - np.min(chord)
        if spread <= 1e-13 * total:
            break
        # redistribute parameters so the output chords equalize
        cum = np.concatenate([[0.0], np.cumsum(chord)])
        even = np.arange(m) * (cum[-1] / n) if closed else np.linspace(0.0, cum[-1], m)
        targets = np.interp(even, cum, np.concatenate([targets, [total]]) if closed else targets)
    if not closed:
        out[0] = pts[0]
        out[-1] = pts[-1]
    return DiscreteCurve(out, closed)
