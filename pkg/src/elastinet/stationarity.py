"""Euler-Lagrange and junction-condition residuals.

A critical curve of the penalized elastic energy satisfies
2 k'' + k^3 - k = 0 in arclength; at a triple junction the curvatures sum to
zero and sum(2 k' nu + k^2 tau) vanishes.  These are audited on the discrete
curvature samples: second derivatives by three-point stencils in arclength
(central inside, one-sided at the ends), junction values by quadratic
extrapolation from the three nearest interior vertices, junction tangents
from the stored frames.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .geometry import DiscreteCurve, rot90, vertex_arclengths, vertex_curvature
from .networks import Network, curve_clamps

__all__ = [
    "ResidualReport",
    "AuditReport",
    "el_residual",
    "junction_residuals",
    "criticality_audit",
]


@dataclass(frozen=True)
class ResidualReport:
    interior_residuals: tuple[np.ndarray, ...]
    interior_max_abs: float
    junction_scalar: tuple[float, ...]
    junction_vector: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class AuditReport:
    passed: bool
    interior_tol: float
    junction_tol: float
    report: ResidualReport


def _second_derivative(values: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Three-point second derivative on a nonuniform grid (exact on quadratics)."""
    s0, s1, s2 = s[:-2], s[1:-1], s[2:]
    k0, k1, k2 = values[:-2], values[1:-1], values[2:]
    return 2.0 * (
        k0 / ((s1 - s0) * (s2 - s0))
        - k1 / ((s2 - s1) * (s1 - s0))
        + k2 / ((s2 - s1) * (s2 - s0))
    )


def el_residual(curve: DiscreteCurve) -> np.ndarray:
    """Pointwise 2 k'' + k^3 - k on the usable vertices of one curve."""
    if curve.n_points < 8:
        raise InvalidInputError("need at least 8 points for the residual stencils")
    kappa, _ = vertex_curvature(curve)
    if curve.closed:
        s_all = vertex_arclengths(curve)
        total = s_all[-1] + float(np.linalg.norm(curve.points[0] - curve.points[-1]))
        s_ext = np.concatenate([[s_all[0] - (total - s_all[-1])], s_all, [total]])
        k_ext = np.concatenate([[kappa[-1]], kappa, [kappa[0]]])
        ks = _second_derivative(k_ext, s_ext)
        return 2.0 * ks + kappa**3 - kappa
    s = vertex_arclengths(curve)[1:-1]
    ks = _second_derivative(kappa, s)
    k_in = kappa[1:-1]
    return 2.0 * ks + k_in**3 - k_in


def _quadratic_eval(s3: np.ndarray, k3: np.ndarray, s0: float) -> tuple[float, float]:
    """Value and slope at s0 of the quadratic through three (s, k) samples."""
    val = 0.0
    der = 0.0
    for i in range(3):
        others = [j for j in range(3) if j != i]
        denom = (s3[i] - s3[others[0]]) * (s3[i] - s3[others[1]])
        val += k3[i] * (s0 - s3[others[0]]) * (s0 - s3[others[1]]) / denom
        der += k3[i] * ((s0 - s3[others[0]]) + (s0 - s3[others[1]])) / denom
    return float(val), float(der)


def _endpoint_curvature(curve: DiscreteCurve) -> tuple[float, float, float, float]:
    """(k, k') extrapolated to both ends of an open curve."""
    kappa, _ = vertex_curvature(curve)
    s = vertex_arclengths(curve)
    length = s[-1]
    s_in = s[1:-1]
    k0, d0 = _quadratic_eval(s_in[:3], kappa[:3], 0.0)
    k1, d1 = _quadratic_eval(s_in[-3:], kappa[-3:], length)
    return k0, d0, k1, d1


def junction_residuals(network: Network) -> ResidualReport:
    """Scalar and vector junction conditions plus interior residuals."""
    if network.kind not in ("theta", "generalized_theta", "degenerate_theta"):
        raise InvalidInputError("junction residuals need a junction-constrained network")
    interior = tuple(el_residual(c) for c in network.curves)
    max_abs = max(float(np.max(np.abs(r))) for r in interior)

    n_junctions = len(network.junctions) if network.kind != "degenerate_theta" else 1
    scalars = []
    vectors = []
    ends_per_junction: list[list[tuple[int, int]]]
    if network.kind == "degenerate_theta":
        ends_per_junction = [[(i, e) for i in range(len(network.curves)) for e in (0, 1)]]
    else:
        ends_per_junction = [[(i, 0) for i in range(3)], [(i, 1) for i in range(3)]]

    for j, ends in enumerate(ends_per_junction):
        scalar = 0.0
        vector = np.zeros(2)
        for i, end in ends:
            k0, d0, k1, d1 = _endpoint_curvature(network.curves[i])
            cs, ce = curve_clamps(network, i)
            if end == 0:
                k, dk, tau = k0, d0, np.asarray(cs, float)
            else:
                k, dk, tau = k1, d1, np.asarray(ce, float)
            scalar += k
            vector = vector + 2.0 * dk * rot90(tau) + k * k * tau
        scalars.append(float(scalar))
        vectors.append(vector)
    return ResidualReport(
        interior_residuals=interior,
        interior_max_abs=max_abs,
        junction_scalar=tuple(scalars),
        junction_vector=tuple(vectors),
    )


def criticality_audit(network: Network, interior_tol: float = 1e-2, junction_tol: float = 1e-2) -> AuditReport:
    """Pass iff interior and junction residuals stay below the thresholds."""
    if network.kind in ("theta", "generalized_theta", "degenerate_theta"):
        report = junction_residuals(network)
        passed = report.interior_max_abs <= interior_tol and all(
            abs(s) <= junction_tol for s in report.junction_scalar
        ) and all(float(np.linalg.norm(v)) <= junction_tol for v in report.junction_vector)
    else:
        interior = tuple(el_residual(c) for c in network.curves)
        max_abs = max(float(np.max(np.abs(r))) for r in interior)
        report = ResidualReport(interior, max_abs, (), ())
        passed = max_abs <= interior_tol
    return AuditReport(passed=bool(passed), interior_tol=interior_tol, junction_tol=junction_tol, report=report)
