"""First-order minimization of the penalized elastic energy over networks.

Degrees of freedom per kind:

* ``closed``            every vertex is free
* ``drop``              interior vertices free, the closure point pinned at
                        the origin (free corner angle)
* ``theta`` /
  ``generalized_theta`` two junction positions, two frame angles, the six
                        slaved first/last edge lengths, and the interior
                        vertices; the first and last edge of every curve lie
                        exactly along the junction frame, so the prescribed
                        angles hold to machine precision along the whole run
* ``degenerate_theta``  four-point pinned at the origin, one frame angle,
                        four slaved edge lengths, interior vertices

The descent is plain gradient descent with Armijo backtracking (factor 0.5,
sufficient decrease 1e-4) and step growth after clean accepts.  Periodic
resampling keeps the vertices near-uniform; each resampling's energy jump is
recorded.  The gradient is the exact differential of the discrete energy with
respect to the free DOF (finite differences agree componentwise), chained
through the slaved-edge parametrization.

High frequencies relax quickly under gradient descent while long-wavelength
shape modes are stiffness-limited, so ``minimize_multilevel`` runs a
coarse-to-fine ladder: solve at a coarse resolution, upsample with a cubic
spline, polish.  Each rung is an ordinary ``minimize`` run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicSpline

from .energy import curve_energy_gradient, penalized_energy
from .errors import (
    ConstructionFailedError,
    InvalidConfigError,
    InvalidInputError,
    OptimizationError,
)
from .geometry import (
    DiscreteCurve,
    polyline_length,
    resample_uniform,
    rot90,
    signed_angle,
    unit,
    vertex_arclengths,
)
from .networks import (
    Junction,
    Network,
    ValidationReport,
    make_symmetric_double_drop,
    network_diameter,
    translate_network,
    validate,
)

__all__ = [
    "OptimizationConfig",
    "OptimizationResult",
    "ResampleEvent",
    "dof_map",
    "discrete_gradient",
    "minimize",
    "minimize_multilevel",
    "minimize_symmetric_double_drop",
    "recovery_sequence",
    "injectivity_report",
    "InjectivityReport",
]

DEGENERATION_FACTOR = 1e-3

# Slaved first/last edges are kept at a quarter of the mean spacing: the
# straight stub a slaved edge forces onto the curve biases the energy by
# O(k^2 * stub), so short stubs track the continuum markedly better, while
# the stub endpoint is not a free vertex and does not shrink the stable step.
STUB_FRACTION = 0.25


@dataclass(frozen=True)
class OptimizationConfig:
    n_per_curve: int = 200
    max_iters: int = 20000
    grad_tol: float = 1e-4
    energy_rel_tol: float = 1e-14
    angle_penalty_schedule: tuple[float, ...] = (1.0,)
    resample_every: int = 25
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    step_init: float = 1e-3
    step_growth: float = 2.0
    step_min: float = 1e-18
    seed: int = 0

    def __post_init__(self):
        if self.n_per_curve < 8:
            raise InvalidConfigError("n_per_curve must be at least 8")
        if self.max_iters < 0:
            raise InvalidConfigError("max_iters must be nonnegative")
        for name in ("grad_tol", "energy_rel_tol", "step_init", "step_growth", "step_min", "armijo_c"):
            if getattr(self, name) <= 0:
                raise InvalidConfigError(f"{name} must be positive")
        if not (0.0 < self.backtrack_factor < 1.0):
            raise InvalidConfigError("backtrack_factor must lie in (0, 1)")
        if self.resample_every < 0:
            raise InvalidConfigError("resample_every must be nonnegative (0 disables)")
        sched = tuple(float(w) for w in self.angle_penalty_schedule)
        if not sched or any(w <= 0 for w in sched) or any(b < a for a, b in zip(sched, sched[1:])):
            raise InvalidConfigError("angle_penalty_schedule must be positive and nondecreasing")
        object.__setattr__(self, "angle_penalty_schedule", sched)


@dataclass(frozen=True)
class ResampleEvent:
    """f_before -> f_resampled (uniform resampling) -> f_after (exact rescale)."""

    iteration: int
    f_before: float
    f_resampled: float
    f_after: float


@dataclass(frozen=True)
class OptimizationResult:
    final: Network
    energy_trace: np.ndarray
    elastic_trace: np.ndarray
    length_trace: np.ndarray
    grad_norm_trace: np.ndarray
    resample_events: tuple[ResampleEvent, ...]
    constraint_violation: ValidationReport
    termination: str
    iterations: int
    config: OptimizationConfig


# ---------------------------------------------------------------------------
# DOF parametrizations


def _poly_value(points: np.ndarray, closed: bool, clamp_start=None, clamp_end=None):
    """(F, E, L) of one polyline, or None when the geometry collapsed."""
    e = (np.roll(points, -1, axis=0) - points) if closed else (points[1:] - points[:-1])
    a = np.linalg.norm(e, axis=1)
    if np.any(a <= 0.0) or not np.all(np.isfinite(a)):
        return None
    t = e / a[:, None]
    if closed:
        psi = signed_angle(np.roll(e, 1, axis=0), e)
        ell = 0.5 * (np.roll(a, 1) + a)
        elastic = float(np.sum(psi * psi / ell))
    else:
        psi = signed_angle(e[:-1], e[1:])
        ell = 0.5 * (a[:-1] + a[1:])
        elastic = float(np.sum(psi * psi / ell))
        if clamp_start is not None:
            ps = float(signed_angle(clamp_start, t[0]))
            elastic += ps * ps / (0.5 * a[0])
        if clamp_end is not None:
            pe = float(signed_angle(t[-1], clamp_end))
            elastic += pe * pe / (0.5 * a[-1])
    length = float(a.sum())
    return elastic + length, elastic, length


class _ClosedDof:
    kind = "closed"

    def __init__(self, network: Network):
        self.template = network
        self.m = network.curves[0].n_points

    def pack(self) -> np.ndarray:
        return self.template.curves[0].points.ravel().copy()

    def value(self, x: np.ndarray):
        out = _poly_value(x.reshape(-1, 2), True)
        return (math.inf, math.inf, math.inf) if out is None else out

    def value_and_grad(self, x: np.ndarray):
        f, e, l, dp, _, _ = curve_energy_gradient(x.reshape(-1, 2), True)
        return f, e, l, dp.ravel()

    def point_sets(self, x: np.ndarray):
        return [x.reshape(-1, 2)]

    def rebuild(self, x: np.ndarray) -> Network:
        return Network("closed", (DiscreteCurve(x.reshape(-1, 2).copy(), closed=True),))

    def resample(self, x: np.ndarray):
        curve = resample_uniform(DiscreteCurve(x.reshape(-1, 2), closed=True), self.m)
        return self, curve.points.ravel()

    def rescale(self, x: np.ndarray, factor: float) -> np.ndarray:
        return factor * x


class _DropDof:
    kind = "drop"

    def __init__(self, network: Network):
        self.template = network
        self.m = network.curves[0].n_points

    def pack(self) -> np.ndarray:
        return self.template.curves[0].points[1:-1].ravel().copy()

    def _points(self, x: np.ndarray) -> np.ndarray:
        p = np.zeros((self.m, 2))
        p[1:-1] = x.reshape(-1, 2)
        return p

    def value(self, x: np.ndarray):
        out = _poly_value(self._points(x), False)
        return (math.inf, math.inf, math.inf) if out is None else out

    def value_and_grad(self, x: np.ndarray):
        f, e, l, dp, _, _ = curve_energy_gradient(self._points(x), False)
        return f, e, l, dp[1:-1].ravel()

    def point_sets(self, x: np.ndarray):
        return [self._points(x)]

    def rebuild(self, x: np.ndarray) -> Network:
        return Network("drop", (DiscreteCurve(self._points(x), closed=False),))

    def resample(self, x: np.ndarray):
        curve = resample_uniform(DiscreteCurve(self._points(x), closed=False), self.m - 1)
        return self, curve.points[1:-1].ravel()

    def rescale(self, x: np.ndarray, factor: float) -> np.ndarray:
        # scaling about the pinned closure point at the origin
        return factor * x


class _JunctionDof:
    """Theta and generalized theta: shared junctions, frames, slaved edges."""

    def __init__(self, network: Network):
        self.template = network
        self.counts = tuple(c.n_points for c in network.curves)
        self.offsets0 = network.junctions[0].offsets
        self.offsets1 = network.junctions[1].offsets
        self.header = 12  # J1, J2, phi1, phi2, h1[3], h2[3]

    def pack(self) -> np.ndarray:
        j0, j1 = self.template.junctions
        parts = [j0.position, j1.position, [j0.frame_angle, j1.frame_angle]]
        h1 = [float(np.linalg.norm(c.points[1] - j0.position)) for c in self.template.curves]
        h2 = [float(np.linalg.norm(c.points[-2] - j1.position)) for c in self.template.curves]
        parts.append(h1)
        parts.append(h2)
        parts.extend(c.points[2:-2].ravel() for c in self.template.curves)
        return np.concatenate([np.asarray(p, float).ravel() for p in parts])

    def _split(self, x: np.ndarray):
        j1 = x[0:2]
        j2 = x[2:4]
        phi1, phi2 = x[4], x[5]
        h1 = x[6:9]
        h2 = x[9:12]
        interiors = []
        pos = self.header
        for m in self.counts:
            k = (m - 4) * 2
            interiors.append(x[pos : pos + k].reshape(-1, 2))
            pos += k
        return j1, j2, phi1, phi2, h1, h2, interiors

    def point_sets(self, x: np.ndarray):
        j1, j2, phi1, phi2, h1, h2, interiors = self._split(x)
        sets = []
        for i, m in enumerate(self.counts):
            p = np.empty((m, 2))
            p[0] = j1
            p[1] = j1 + h1[i] * unit(phi1 + self.offsets0[i])
            p[2:-2] = interiors[i]
            p[-2] = j2 + h2[i] * unit(phi2 + self.offsets1[i])
            p[-1] = j2
            sets.append(p)
        return sets

    def _clamps(self, phi1: float, phi2: float, i: int):
        d0 = unit(phi1 + self.offsets0[i])
        d1 = -unit(phi2 + self.offsets1[i])
        return d0, d1

    def value(self, x: np.ndarray):
        _, _, phi1, phi2, h1, h2, _ = self._split(x)
        if np.any(h1 <= 0.0) or np.any(h2 <= 0.0):
            return math.inf, math.inf, math.inf
        f = e = l = 0.0
        for i, p in enumerate(self.point_sets(x)):
            cs, ce = self._clamps(phi1, phi2, i)
            out = _poly_value(p, False, cs, ce)
            if out is None:
                return math.inf, math.inf, math.inf
            f += out[0]
            e += out[1]
            l += out[2]
        return f, e, l

    def value_and_grad(self, x: np.ndarray):
        j1, j2, phi1, phi2, h1, h2, interiors = self._split(x)
        g = np.zeros_like(x)
        f = e = l = 0.0
        pos = self.header
        sets = self.point_sets(x)
        for i, m in enumerate(self.counts):
            cs, ce = self._clamps(phi1, phi2, i)
            fi, ei, li, dp, dth_s, dth_e = curve_energy_gradient(sets[i], False, 1.0, cs, ce)
            f += fi
            e += ei
            l += li
            d0 = unit(phi1 + self.offsets0[i])
            d1 = unit(phi2 + self.offsets1[i])
            g[0:2] += dp[0] + dp[1]
            g[2:4] += dp[-1] + dp[-2]
            # clamp_end direction is -u(phi2 + off): same angle derivative as phi2
            g[4] += dth_s + float(dp[1] @ (h1[i] * rot90(d0)))
            g[5] += dth_e + float(dp[-2] @ (h2[i] * rot90(d1)))
            g[6 + i] += float(dp[1] @ d0)
            g[9 + i] += float(dp[-2] @ d1)
            k = (m - 4) * 2
            g[pos : pos + k] = dp[2:-2].ravel()
            pos += k
        return f, e, l, g

    def rebuild(self, x: np.ndarray) -> Network:
        j1, j2, phi1, phi2, _, _, _ = self._split(x)
        sets = self.point_sets(x)
        junctions = (
            Junction(j1.copy(), float(phi1), self.offsets0),
            Junction(j2.copy(), float(phi2), self.offsets1),
        )
        curves = tuple(DiscreteCurve(p.copy(), closed=False) for p in sets)
        return Network(self.template.kind, curves, junctions, self.template.prescribed_angles)

    def resample(self, x: np.ndarray):
        net = self.rebuild(x)
        net = _slave_junction_edges(_resample_network(net))
        dof = _JunctionDof(net)
        return dof, dof.pack()

    def rescale(self, x: np.ndarray, factor: float) -> np.ndarray:
        out = factor * x
        out[4:6] = x[4:6]  # frame angles are scale invariant
        return out


class _FourPointDof:
    """Degenerate theta: four-point at the origin, one frame, slaved edges."""

    def __init__(self, network: Network):
        self.template = network
        self.counts = tuple(c.n_points for c in network.curves)
        self.offsets = network.junctions[0].offsets
        self.header = 5  # phi, h[4]

    def pack(self) -> np.ndarray:
        (j,) = self.template.junctions
        h = []
        for c in self.template.curves:
            h.append(float(np.linalg.norm(c.points[1] - j.position)))
            h.append(float(np.linalg.norm(c.points[-2] - j.position)))
        parts = [[j.frame_angle], h]
        parts.extend(c.points[2:-2].ravel() for c in self.template.curves)
        return np.concatenate([np.asarray(p, float).ravel() for p in parts])

    def _split(self, x: np.ndarray):
        phi = x[0]
        h = x[1:5]
        interiors = []
        pos = self.header
        for m in self.counts:
            k = (m - 4) * 2
            interiors.append(x[pos : pos + k].reshape(-1, 2))
            pos += k
        return phi, h, interiors

    def point_sets(self, x: np.ndarray):
        phi, h, interiors = self._split(x)
        sets = []
        for i, m in enumerate(self.counts):
            p = np.empty((m, 2))
            p[0] = 0.0
            p[1] = h[2 * i] * unit(phi + self.offsets[2 * i])
            p[2:-2] = interiors[i]
            p[-2] = h[2 * i + 1] * unit(phi + self.offsets[2 * i + 1])
            p[-1] = 0.0
            sets.append(p)
        return sets

    def value(self, x: np.ndarray):
        phi, h, _ = self._split(x)
        if np.any(h <= 0.0):
            return math.inf, math.inf, math.inf
        f = e = l = 0.0
        for i, p in enumerate(self.point_sets(x)):
            cs = unit(phi + self.offsets[2 * i])
            ce = -unit(phi + self.offsets[2 * i + 1])
            out = _poly_value(p, False, cs, ce)
            if out is None:
                return math.inf, math.inf, math.inf
            f += out[0]
            e += out[1]
            l += out[2]
        return f, e, l

    def value_and_grad(self, x: np.ndarray):
        phi, h, _ = self._split(x)
        g = np.zeros_like(x)
        f = e = l = 0.0
        pos = self.header
        sets = self.point_sets(x)
        for i, m in enumerate(self.counts):
            d0 = unit(phi + self.offsets[2 * i])
            d1 = unit(phi + self.offsets[2 * i + 1])
            fi, ei, li, dp, dth_s, dth_e = curve_energy_gradient(sets[i], False, 1.0, d0, -d1)
            f += fi
            e += ei
            l += li
            g[0] += dth_s + dth_e
            g[0] += float(dp[1] @ (h[2 * i] * rot90(d0))) + float(dp[-2] @ (h[2 * i + 1] * rot90(d1)))
            g[1 + 2 * i] += float(dp[1] @ d0)
            g[2 + 2 * i] += float(dp[-2] @ d1)
            k = (m - 4) * 2
            g[pos : pos + k] = dp[2:-2].ravel()
            pos += k
        return f, e, l, g

    def rebuild(self, x: np.ndarray) -> Network:
        phi, _, _ = self._split(x)
        sets = self.point_sets(x)
        j = Junction(np.zeros(2), float(phi), self.offsets)
        curves = tuple(DiscreteCurve(p.copy(), closed=False) for p in sets)
        return Network("degenerate_theta", curves, (j,))

    def resample(self, x: np.ndarray):
        net = self.rebuild(x)
        net = _slave_junction_edges(_resample_network(net))
        dof = _FourPointDof(net)
        return dof, dof.pack()

    def rescale(self, x: np.ndarray, factor: float) -> np.ndarray:
        out = factor * x
        out[0] = x[0]
        return out


_DOF_CLASSES = {
    "closed": _ClosedDof,
    "drop": _DropDof,
    "theta": _JunctionDof,
    "generalized_theta": _JunctionDof,
    "degenerate_theta": _FourPointDof,
}


def _slave_junction_edges(network: Network) -> Network:
    """Put the first/last edge of each curve onto its frame ray (short stub)."""
    if network.kind in ("theta", "generalized_theta"):
        j0, j1 = network.junctions
        curves = []
        for i, c in enumerate(network.curves):
            p = c.points.copy()
            stub = STUB_FRACTION * polyline_length(c) / (len(p) - 1)
            p[0] = j0.position
            p[-1] = j1.position
            p[1] = j0.position + stub * j0.outgoing_dir(i)
            p[-2] = j1.position + stub * j1.outgoing_dir(i)
            curves.append(DiscreteCurve(p, closed=False))
        return Network(network.kind, tuple(curves), network.junctions, network.prescribed_angles)
    if network.kind == "degenerate_theta":
        (j,) = network.junctions
        curves = []
        for i, c in enumerate(network.curves):
            p = c.points.copy()
            stub = STUB_FRACTION * polyline_length(c) / (len(p) - 1)
            p[0] = j.position
            p[-1] = j.position
            p[1] = j.position + stub * j.outgoing_dir(2 * i)
            p[-2] = j.position + stub * j.outgoing_dir(2 * i + 1)
            curves.append(DiscreteCurve(p, closed=False))
        return Network(network.kind, tuple(curves), network.junctions)
    return network


def _count_split(total_points: int, lengths: np.ndarray, floor: int = 8) -> list[int]:
    """Split a point budget across curves proportionally to length."""
    shares = lengths / lengths.sum()
    counts = np.maximum(floor, np.floor(total_points * shares).astype(int))
    while counts.sum() < total_points:
        counts[int(np.argmax(total_points * shares - counts))] += 1
    while counts.sum() > total_points:
        over = np.where(counts > floor)[0]
        counts[over[int(np.argmin(total_points * shares[over] - counts[over]))]] -= 1
    return [int(c) for c in counts]


def _resample_network(network: Network) -> Network:
    """Uniform resampling; the point budget follows the curve lengths.

    A short curve sampled as densely as a long one would set the stable step
    for the whole network, so the spacing is equalized across curves.  Counts
    are only redistributed once the spacing imbalance exceeds 10%, otherwise
    rounding would shuffle a vertex back and forth between curves on every
    resampling and keep reinjecting interpolation noise.
    """
    if len(network.curves) == 1:
        c = network.curves[0]
        n = c.n_points
        return Network(
            network.kind,
            (resample_uniform(c, n if c.closed else n - 1),),
            network.junctions,
            network.prescribed_angles,
        )
    lengths = np.array([polyline_length(c) for c in network.curves])
    counts = [c.n_points for c in network.curves]
    spacing = lengths / (np.asarray(counts) - 1)
    if np.max(np.abs(spacing / spacing.mean() - 1.0)) > 0.1:
        counts = _count_split(sum(counts), lengths)
    curves = tuple(
        resample_uniform(c, m - 1) for c, m in zip(network.curves, counts)
    )
    return Network(network.kind, curves, network.junctions, network.prescribed_angles)


def _spline_resample(curve: DiscreteCurve, n_points: int) -> DiscreteCurve:
    """Smooth arclength resampling used when changing resolution."""
    pts = curve.points
    if curve.closed:
        ext = np.vstack([pts, pts[0]])
        s = np.concatenate([[0.0], np.cumsum(np.linalg.norm(ext[1:] - ext[:-1], axis=1))])
        spline = CubicSpline(s, ext, bc_type="periodic")
        targets = np.arange(n_points) * (s[-1] / n_points)
        return DiscreteCurve(spline(targets), closed=True)
    s = vertex_arclengths(curve)
    spline = CubicSpline(s, pts, bc_type="natural")
    targets = np.linspace(0.0, s[-1], n_points)
    out = spline(targets)
    out[0] = pts[0]
    out[-1] = pts[-1]
    return DiscreteCurve(out, closed=False)


def _adapt_resolution(network: Network, n: int) -> Network:
    """Bring the network to an average of n points per curve, spacing equalized."""
    if len(network.curves) == 1:
        if network.curves[0].n_points == n:
            return network
        counts = [n]
    else:
        lengths = np.array([polyline_length(c) for c in network.curves])
        counts = _count_split(n * len(network.curves), lengths)
        if tuple(counts) == tuple(c.n_points for c in network.curves):
            return network
    curves = tuple(_spline_resample(c, m) for c, m in zip(network.curves, counts))
    return Network(network.kind, curves, network.junctions, network.prescribed_angles)


def _prepare(network: Network, n: int | None) -> Network:
    """Normalize an input network for descent: pin, adapt resolution, slave."""
    kind = network.kind
    if kind == "double_drop":
        raise InvalidInputError("use minimize_symmetric_double_drop for double drops")
    if kind not in _DOF_CLASSES:
        raise InvalidInputError(f"cannot minimize networks of kind {kind!r}")
    net = network
    if kind == "drop":
        net = translate_network(net, -net.curves[0].points[0])
        p = net.curves[0].points.copy()
        p[0] = 0.0
        p[-1] = 0.0
        net = Network("drop", (DiscreteCurve(p, closed=False),))
    elif kind == "degenerate_theta":
        net = translate_network(net, -net.junctions[0].position)
    if n is not None:
        net = _adapt_resolution(net, n)
    return _slave_junction_edges(net)


def dof_map(network: Network):
    """DOF parametrization used by the optimizer (after slaving), for audits."""
    net = _prepare(network, None)
    return _DOF_CLASSES[net.kind](net)


def discrete_gradient(network: Network) -> np.ndarray:
    """Exact gradient of the discrete F with respect to the free DOF."""
    dof = dof_map(network)
    return dof.value_and_grad(dof.pack())[3]


def _network_min_curve_length(sets) -> float:
    return min(float(np.linalg.norm(p[1:] - p[:-1], axis=1).sum()) for p in sets)


def _diameter_of_sets(sets) -> float:
    pts = np.vstack(sets)
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))


def minimize(network: Network, config: OptimizationConfig | None = None) -> OptimizationResult:
    """Gradient descent with Armijo backtracking on the network's free DOF."""
    config = config or OptimizationConfig()
    if config.max_iters == 0:
        report = penalized_energy(network, 1.0)
        return OptimizationResult(
            final=network,
            energy_trace=np.array([report.penalized]),
            elastic_trace=np.array([report.elastic]),
            length_trace=np.array([report.length]),
            grad_norm_trace=np.array([float("nan")]),
            resample_events=(),
            constraint_violation=validate(network, tol_ang=5e-2),
            termination="max_iters",
            iterations=0,
            config=config,
        )

    net = _prepare(network, config.n_per_curve)
    dof = _DOF_CLASSES[net.kind](net)
    x = dof.pack()

    f, e, l = dof.value(x)
    if not math.isfinite(f):
        raise OptimizationError("initial configuration has non-finite energy")

    f_trace, e_trace, l_trace, g_trace = [], [], [], []
    events = []
    step = config.step_init
    termination = "max_iters"
    it = 0
    window_descent = 0.0
    while it < config.max_iters:
        f, e, l, g = dof.value_and_grad(x)
        if not math.isfinite(f):
            raise OptimizationError(f"non-finite energy at iteration {it}")
        gn = float(np.linalg.norm(g))
        f_trace.append(f)
        e_trace.append(e)
        l_trace.append(l)
        g_trace.append(gn)
        if gn <= config.grad_tol:
            termination = "converged"
            break

        accepted = False
        t = step * config.step_growth
        while t >= config.step_min:
            x_new = x - t * g
            f_new = dof.value(x_new)[0]
            if f_new <= f - config.armijo_c * t * gn * gn:
                accepted = True
                break
            t *= config.backtrack_factor
        if not accepted:
            termination = "line_search_failed"
            break
        x = x_new
        window_descent += f - f_new
        step = t
        it += 1

        if config.resample_every and it % config.resample_every == 0:
            f_before = dof.value(x)[0]
            dof, x = dof.resample(x)
            f_mid, e_mid, l_mid = dof.value(x)
            # exact optimal rescaling: monotone, kills the slow dilation mode
            if math.isfinite(f_mid) and e_mid > 1e-14 * max(l_mid, 1.0):
                x = dof.rescale(x, math.sqrt(e_mid / l_mid))
            f_after = dof.value(x)[0]
            events.append(ResampleEvent(it, f_before, f_mid, f_after))
            sets = dof.point_sets(x)
            if _network_min_curve_length(sets) < DEGENERATION_FACTOR * _diameter_of_sets(sets):
                termination = "degeneration"
                break

        # convergence on descent progress alone: uniform resampling drifts the
        # energy by a little each time, which must not mask stagnation
        if it % 64 == 0:
            f_now = dof.value(x)[0]
            if window_descent <= config.energy_rel_tol * max(abs(f_now), 1.0):
                termination = "converged"
                break
            window_descent = 0.0

    f, e, l = dof.value(x)
    f_trace.append(f)
    e_trace.append(e)
    l_trace.append(l)
    g_trace.append(float(np.linalg.norm(dof.value_and_grad(x)[3])))

    final = dof.rebuild(x)
    return OptimizationResult(
        final=final,
        energy_trace=np.asarray(f_trace),
        elastic_trace=np.asarray(e_trace),
        length_trace=np.asarray(l_trace),
        grad_norm_trace=np.asarray(g_trace),
        resample_events=tuple(events),
        constraint_violation=validate(final, tol_ang=5e-2),
        termination=termination,
        iterations=it,
        config=config,
    )


def _ladder(n_target: int, coarsest: int = 40) -> list[int]:
    levels = [n_target]
    while levels[-1] > coarsest:
        levels.append(max(coarsest, (levels[-1] + 1) // 2))
    return levels[::-1]


def minimize_multilevel(
    network: Network,
    config: OptimizationConfig | None = None,
    levels: list[int] | None = None,
) -> tuple[OptimizationResult, tuple[OptimizationResult, ...]]:
    """Coarse-to-fine ladder of minimize() runs; returns (final, all levels)."""
    config = config or OptimizationConfig()
    if levels is None:
        levels = _ladder(config.n_per_curve)
    if levels[-1] != config.n_per_curve:
        raise InvalidConfigError("ladder must end at config.n_per_curve")
    net = network
    results = []
    for n in levels:
        res = minimize(net, replace(config, n_per_curve=n))
        results.append(res)
        net = res.final
    return results[-1], tuple(results)


def minimize_symmetric_double_drop(
    initial: Network,
    config: OptimizationConfig | None = None,
    multilevel: bool = True,
) -> OptimizationResult:
    """Minimize F over symmetric double drops by optimizing one lobe.

    Only the first drop carries DOF; the second is its point reflection
    through the four-point, so the symmetry defect is zero by construction
    and the total energy is exactly twice the lobe energy.
    """
    config = config or OptimizationConfig()
    if initial.kind == "double_drop":
        lobe = Network("drop", (initial.curves[0],))
    elif initial.kind == "drop":
        lobe = initial
    else:
        raise InvalidInputError("expected a drop or double_drop network")
    if multilevel:
        res, _ = minimize_multilevel(lobe, config)
    else:
        res = minimize(lobe, config)
    final = make_symmetric_double_drop(res.final)
    return OptimizationResult(
        final=final,
        energy_trace=2.0 * res.energy_trace,
        elastic_trace=2.0 * res.elastic_trace,
        length_trace=2.0 * res.length_trace,
        grad_norm_trace=2.0 * res.grad_norm_trace,
        resample_events=res.resample_events,
        constraint_violation=validate(final, tol_ang=5e-2),
        termination=res.termination,
        iterations=res.iterations,
        config=config,
    )


# ---------------------------------------------------------------------------
# recovery sequence (degenerate -> theta)


def _first_horizontal_cut(curve: DiscreteCurve) -> float:
    """Arclength of the first horizontal-tangent point, by sign change.

    The tangent's second component is interpolated linearly in arclength
    between edge midpoints; the first sign change is bisected to 1e-10 of the
    total length.  A run of exactly horizontal edges is cut at its center,
    keeping the cut away from any vertex that carries turning.
    """
    pts = curve.points
    e = pts[1:] - pts[:-1]
    a = np.linalg.norm(e, axis=1)
    ty = e[:, 1] / a
    s = np.concatenate([[0.0], np.cumsum(a)])
    mids = 0.5 * (s[:-1] + s[1:])
    total = s[-1]

    zero = np.nonzero(ty == 0.0)[0]
    change = np.nonzero(ty[:-1] * ty[1:] < 0.0)[0]
    first_zero = zero[0] if len(zero) else None
    first_change = change[0] if len(change) else None
    if first_zero is not None and (first_change is None or first_zero <= first_change):
        j0 = j1 = int(first_zero)
        while j1 + 1 < len(ty) and ty[j1 + 1] == 0.0:
            j1 += 1
        return float(0.5 * (s[j0] + s[j1 + 1]))
    if first_change is None:
        raise ConstructionFailedError("no horizontal tangent: input violates the orientation premise")
    j = int(first_change)

    def value(sq: float) -> float:
        return float(np.interp(sq, mids, ty))

    lo, hi = float(mids[j]), float(mids[j + 1])
    flo = value(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = value(mid)
        if fm == 0.0 or (hi - lo) < 1e-10 * total:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _split_at_arclength(curve: DiscreteCurve, s_cut: float) -> tuple[np.ndarray, np.ndarray]:
    pts = curve.points
    s = vertex_arclengths(curve)
    total = s[-1]
    eps = 1e-12 * total
    j = int(np.searchsorted(s, s_cut)) - 1
    j = max(0, min(j, len(pts) - 2))
    if abs(s_cut - s[j]) < eps:
        return pts[: j + 1].copy(), pts[j:].copy()
    if abs(s_cut - s[j + 1]) < eps:
        return pts[: j + 2].copy(), pts[j + 1 :].copy()
    t = (s_cut - s[j]) / (s[j + 1] - s[j])
    q = pts[j] + t * (pts[j + 1] - pts[j])
    head = np.vstack([pts[: j + 1], q])
    tail = np.vstack([q, pts[j + 1 :]])
    return head, tail


def recovery_sequence(degenerate: Network, n: int) -> Network:
    """Theta-network obtained by cutting a degenerate network and inserting
    three horizontal segments of length 1/n.

    The input must be oriented with curve 0 leaving the four-point at 60
    degrees (frame pi/3, first offset pairing); each curve is cut at its
    first horizontal-tangent point, the trailing halves are shifted left by
    1/n, and the three gaps are bridged by straight horizontal segments, so
    F grows by exactly 3/n up to round-off.
    """
    if degenerate.kind != "degenerate_theta":
        raise InvalidInputError("recovery sequences start from degenerate theta networks")
    if n < 1:
        raise InvalidInputError("n must be a positive integer")
    (j,) = degenerate.junctions
    net = translate_network(degenerate, -j.position)
    (j,) = net.junctions
    dirs = [j.frame_angle + off for off in j.offsets]
    want = [math.pi / 3.0, 2.0 * math.pi / 3.0, 5.0 * math.pi / 3.0, 4.0 * math.pi / 3.0]
    mism = max(abs(float(signed_angle(unit(d), unit(w)))) for d, w in zip(dirs, want))
    if mism > 1e-6:
        raise ConstructionFailedError(
            "input must be oriented with curve 0 leaving at 60 degrees (four-point frame pi/3)"
        )

    w = np.array([-1.0 / n, 0.0])
    new_curves = []
    for c in net.curves:
        s_cut = _first_horizontal_cut(c)
        head, tail = _split_at_arclength(c, s_cut)
        pts = np.vstack([head, tail + w])
        new_curves.append(DiscreteCurve(pts, closed=False))
    bridge = DiscreteCurve(np.array([[0.0, 0.0], 0.5 * w, w]), closed=False)
    new_curves.append(bridge)

    two_thirds = 2.0 * math.pi / 3.0
    j_r = Junction(np.zeros(2), math.pi / 3.0, (0.0, 2.0 * two_thirds, two_thirds))
    j_l = Junction(w.copy(), 0.0, (two_thirds, 2.0 * two_thirds, 0.0))
    return Network("theta", tuple(new_curves), (j_r, j_l))


# ---------------------------------------------------------------------------
# injectivity audit


@dataclass(frozen=True)
class InjectivityReport:
    self_intersections: tuple[int, ...]
    pairwise_crossings: tuple[tuple[int, int, int], ...]

    @property
    def total(self) -> int:
        return sum(self.self_intersections) + sum(c for _, _, c in self.pairwise_crossings)


def _segments(curve: DiscreteCurve) -> np.ndarray:
    pts = curve.points
    if curve.closed:
        return np.stack([pts, np.roll(pts, -1, axis=0)], axis=1)
    return np.stack([pts[:-1], pts[1:]], axis=1)


def _cross(o, a, b):
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (
        b[..., 0] - o[..., 0]
    )


def _proper_crossing_matrix(seg_a: np.ndarray, seg_b: np.ndarray) -> np.ndarray:
    p = seg_a[:, None, 0]
    q = seg_a[:, None, 1]
    r = seg_b[None, :, 0]
    s = seg_b[None, :, 1]
    d1 = _cross(p, q, r)
    d2 = _cross(p, q, s)
    d3 = _cross(r, s, p)
    d4 = _cross(r, s, q)
    return (d1 * d2 < 0) & (d3 * d4 < 0)


def _shared_endpoint_matrix(seg_a: np.ndarray, seg_b: np.ndarray, eps: float) -> np.ndarray:
    out = np.zeros((len(seg_a), len(seg_b)), dtype=bool)
    for ia in (0, 1):
        for ib in (0, 1):
            d = np.linalg.norm(seg_a[:, None, ia] - seg_b[None, :, ib], axis=-1)
            out |= d <= eps
    return out


def injectivity_report(network: Network) -> InjectivityReport:
    """Exact counts of transversal self-intersections and pairwise crossings.

    Contacts at shared endpoints (junctions, drop closure points) are not
    crossings and are excluded.
    """
    eps = 1e-12 * max(network_diameter(network), 1e-30)
    self_counts = []
    for c in network.curves:
        seg = _segments(c)
        k = len(seg)
        mat = _proper_crossing_matrix(seg, seg)
        mat &= ~_shared_endpoint_matrix(seg, seg, eps)
        iu = np.triu(np.ones((k, k), dtype=bool), 2)
        if c.closed:
            iu[0, k - 1] = False
        self_counts.append(int(np.sum(mat & iu)))
    pairwise = []
    for i in range(len(network.curves)):
        for j in range(i + 1, len(network.curves)):
            sa = _segments(network.curves[i])
            sb = _segments(network.curves[j])
            mat = _proper_crossing_matrix(sa, sb)
            mat &= ~_shared_endpoint_matrix(sa, sb, eps)
            pairwise.append((i, j, int(np.sum(mat))))
    return InjectivityReport(tuple(self_counts), tuple(pairwise))
