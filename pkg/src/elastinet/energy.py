"""Penalized elastic energy F_alpha = integral of k^2 ds + alpha * length.

The discrete bending energy of a polyline is sum(psi_i^2 / ell_i) over
curvature vertices, psi the signed turning angle and ell the dual length.
Curves meeting a junction carry an extra half-cell term at each clamped end,
the turning between the prescribed frame direction and the adjacent edge over
a dual length of half that edge.  With those terms the discrete energy of a
sampled circular arc matches the continuum to O(h^2) and the discrete
Cauchy-Schwarz and Gauss-Bonnet chains used by the bound checks hold exactly.

Free ends (open standalone curves, drop closure points) carry no end term:
their contribution is an angle, not curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, InvalidCurveError, NoOptimalRescaleError
from .geometry import DiscreteCurve, rot90, signed_angle
from .networks import Network, curve_clamps, network_diameter, scale_network

__all__ = [
    "CurveEnergy",
    "EnergyReport",
    "elastic_energy",
    "curve_energy",
    "curvature_samples",
    "penalized_energy",
    "scaling_identity_check",
    "optimal_rescale",
    "equipartition_defect",
    "curve_energy_gradient",
]

DEGENERATE_LENGTH_FACTOR = 1e-12


@dataclass(frozen=True)
class CurveEnergy:
    length: float
    elastic: float
    penalized: float


@dataclass(frozen=True)
class EnergyReport:
    """Totals plus the per-curve breakdown; penalized = elastic + alpha * length."""

    length: float
    elastic: float
    penalized: float
    alpha: float
    per_curve: tuple[CurveEnergy, ...]
    degenerate_curves: tuple[int, ...] = ()


def _edges(points: np.ndarray, closed: bool) -> np.ndarray:
    if closed:
        return np.roll(points, -1, axis=0) - points
    return points[1:] - points[:-1]


def curvature_samples(curve: DiscreteCurve, clamp_start=None, clamp_end=None):
    """(kappa, ell) samples including clamped-end half cells.

    ``clamp_start`` is the prescribed travel direction leaving the first
    point, ``clamp_end`` the prescribed travel direction arriving at the last;
    either may be None for a free end.  The dual lengths of all samples of a
    closed or fully clamped curve partition its total length exactly.
    """
    pts, closed = curve.points, curve.closed
    e = _edges(pts, closed)
    a = np.linalg.norm(e, axis=1)
    if np.any(a == 0.0):
        raise InvalidCurveError("zero-length edge")
    t = e / a[:, None]
    if closed:
        psi = signed_angle(np.roll(e, 1, axis=0), e)
        ell = 0.5 * (np.roll(a, 1) + a)
        return psi / ell, ell
    psi = [signed_angle(e[:-1], e[1:])]
    ell = [0.5 * (a[:-1] + a[1:])]
    if clamp_start is not None:
        psi.insert(0, np.array([float(signed_angle(np.asarray(clamp_start, float), t[0]))]))
        ell.insert(0, np.array([0.5 * a[0]]))
    if clamp_end is not None:
        psi.append(np.array([float(signed_angle(t[-1], np.asarray(clamp_end, float)))]))
        ell.append(np.array([0.5 * a[-1]]))
    ell_all = np.concatenate(ell)
    return np.concatenate(psi) / ell_all, ell_all


def curve_energy(curve: DiscreteCurve, clamp_start=None, clamp_end=None) -> tuple[float, float]:
    """(elastic, length) of one curve with optional clamped ends."""
    kappa, ell = curvature_samples(curve, clamp_start, clamp_end)
    pts = curve.points
    length = float(np.linalg.norm(_edges(pts, curve.closed), axis=1).sum())
    return float(np.sum(kappa * kappa * ell)), length


def elastic_energy(curve: DiscreteCurve) -> float:
    """Bending energy of a standalone curve; free ends carry no turning."""
    return curve_energy(curve)[0]


def penalized_energy(network: Network, alpha: float = 1.0) -> EnergyReport:
    """F_alpha of a network; near-zero-length curves contribute nothing."""
    if not (alpha > 0) or not math.isfinite(alpha):
        raise InvalidConfigError("alpha must be positive and finite")
    diam = network_diameter(network)
    per = []
    degenerate = []
    e_tot = l_tot = 0.0
    for i, c in enumerate(network.curves):
        length = float(np.linalg.norm(_edges(c.points, c.closed), axis=1).sum())
        if length < DEGENERATE_LENGTH_FACTOR * diam:
            degenerate.append(i)
            per.append(CurveEnergy(0.0, 0.0, 0.0))
            continue
        cs, ce = curve_clamps(network, i)
        elastic, length = curve_energy(c, cs, ce)
        per.append(CurveEnergy(length, elastic, elastic + alpha * length))
        e_tot += elastic
        l_tot += length
    return EnergyReport(
        length=l_tot,
        elastic=e_tot,
        penalized=e_tot + alpha * l_tot,
        alpha=float(alpha),
        per_curve=tuple(per),
        degenerate_curves=tuple(degenerate),
    )


def scaling_identity_check(network: Network, alpha: float) -> float:
    """|F_1(G) - alpha^(-1/2) F_alpha(alpha^(-1/2) G)|, zero up to round-off."""
    if not (alpha > 0):
        raise InvalidConfigError("alpha must be positive")
    f1 = penalized_energy(network, 1.0).penalized
    lam = alpha ** -0.5
    f_alpha = penalized_energy(scale_network(network, lam), alpha).penalized
    return abs(f1 - lam * f_alpha)


def optimal_rescale(network: Network) -> tuple[float, Network]:
    """Dilation factor sqrt(E/L) and the rescaled network (equipartition E = L)."""
    report = penalized_energy(network, 1.0)
    if report.elastic <= 1e-14 * max(report.length, 1.0):
        raise NoOptimalRescaleError("straight network: no optimal rescaling exists")
    if report.length <= 0.0:
        raise InvalidCurveError("zero-length network")
    factor = math.sqrt(report.elastic / report.length)
    return factor, scale_network(network, factor)


def equipartition_defect(network: Network) -> float:
    """|E - L| / max(E, L); vanishes after optimal rescaling."""
    report = penalized_energy(network, 1.0)
    return abs(report.elastic - report.length) / max(report.elastic, report.length)


def curve_energy_gradient(
    points: np.ndarray,
    closed: bool,
    alpha: float = 1.0,
    clamp_start=None,
    clamp_end=None,
):
    """Exact gradient of the discrete F_alpha of one polyline.

    Returns (F, elastic, length, dF/dpoints, dF/dtheta_start, dF/dtheta_end)
    where the theta derivatives are with respect to the clamp direction
    angles (zero when the corresponding clamp is absent).  Used by the
    minimizer, which chains these through its DOF parametrizations; kept next
    to the energy definition so the two cannot drift apart.
    """
    p = np.asarray(points, float)
    m = len(p)
    e = _edges(p, closed)
    a = np.linalg.norm(e, axis=1)
    if np.any(a == 0.0):
        raise InvalidCurveError("zero-length edge")
    t = e / a[:, None]
    w = rot90(e) / (a * a)[:, None]

    grad_e = alpha * t.copy()
    elastic = 0.0
    d_theta_s = 0.0
    d_theta_e = 0.0

    if closed:
        psi = signed_angle(np.roll(e, 1, axis=0), e)
        ell = 0.5 * (np.roll(a, 1) + a)
        elastic += float(np.sum(psi * psi / ell))
        cw = 2.0 * psi / ell
        cl = -0.5 * psi * psi / (ell * ell)
        # vertex i touches edges i-1 and i
        grad_e += cw[:, None] * w + cl[:, None] * t
        grad_e += np.roll(-cw, -1)[:, None] * w + np.roll(cl, -1)[:, None] * t
        grad_p = np.roll(grad_e, 1, axis=0) - grad_e
    else:
        if m >= 3:
            psi = signed_angle(e[:-1], e[1:])
            ell = 0.5 * (a[:-1] + a[1:])
            elastic += float(np.sum(psi * psi / ell))
            cw = 2.0 * psi / ell
            cl = -0.5 * psi * psi / (ell * ell)
            grad_e[1:] += cw[:, None] * w[1:] + cl[:, None] * t[1:]
            grad_e[:-1] += -cw[:, None] * w[:-1] + cl[:, None] * t[:-1]
        if clamp_start is not None:
            d = np.asarray(clamp_start, float)
            psi_s = float(signed_angle(d, t[0]))
            ell_s = 0.5 * a[0]
            elastic += psi_s * psi_s / ell_s
            grad_e[0] += (2.0 * psi_s / ell_s) * w[0] + (-0.5 * psi_s * psi_s / (ell_s * ell_s)) * t[0]
            d_theta_s = -2.0 * psi_s / ell_s
        if clamp_end is not None:
            d = np.asarray(clamp_end, float)
            psi_e = float(signed_angle(t[-1], d))
            ell_e = 0.5 * a[-1]
            elastic += psi_e * psi_e / ell_e
            grad_e[-1] += -(2.0 * psi_e / ell_e) * w[-1] + (-0.5 * psi_e * psi_e / (ell_e * ell_e)) * t[-1]
            d_theta_e = 2.0 * psi_e / ell_e
        grad_p = np.zeros_like(p)
        grad_p[1:] += grad_e
        grad_p[:-1] -= grad_e

    length = float(a.sum())
    f_val = elastic + alpha * length
    return f_val, elastic, length, grad_p, d_theta_s, d_theta_e
