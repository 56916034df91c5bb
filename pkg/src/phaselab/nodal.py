"""Nodal-set extraction and the structural checks on zero loci.

Zero crossings are located by linear interpolation along grid edges, which is
second-order accurate and preserves sign-change bracketing.  Circle nodal
sets are sorted angle lists with crossing directions; torus nodal sets are
point clouds in the product metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Field
from .grids import circle_distance

__all__ = [
    "NodalSet",
    "CongruenceReport",
    "SymmetryReport",
    "DecayFit",
    "IndeterminateSignError",
    "extract_nodal_set",
    "hausdorff_distance",
    "check_congruent_intervals",
    "check_alternation",
    "check_rotation_symmetry",
    "cluster_fiber_angles",
    "fit_decay",
]


class IndeterminateSignError(ValueError):
    """An arc midpoint value is too small to carry a reliable sign."""


@dataclass(frozen=True)
class NodalSet:
    kind: str  # matches the grid kind it came from
    angles: np.ndarray  # sorted positions (angles / interval coordinates)
    directions: np.ndarray  # +1 rising, -1 falling, 0 touching
    lengths: tuple
    points: np.ndarray | None = None  # torus cloud, shape (N, 2)
    point_signs: np.ndarray | None = None
    point_axes: np.ndarray | None = None

    @property
    def count(self) -> int:
        if self.kind == "torus":
            return 0 if self.points is None else int(self.points.shape[0])
        return int(self.angles.size)

    @property
    def is_empty(self) -> bool:
        return self.count == 0


def _scan_line(values: np.ndarray, coords: np.ndarray, spacing: float, wrap: bool):
    """Sign-change crossings plus exact grid zeros along one line of samples."""
    v = values
    n = v.size
    pos, direction = [], []
    exact = np.flatnonzero(v == 0.0)
    for i in exact:
        left = v[(i - 1) % n] if (wrap or i > 0) else 0.0
        right = v[(i + 1) % n] if (wrap or i < n - 1) else 0.0
        d = np.sign(right - left)
        pos.append(coords[i])
        direction.append(int(d))
    last = n if wrap else n - 1
    for i in range(last):
        a, b = v[i], v[(i + 1) % n]
        if a * b < 0.0:
            t = a / (a - b)
            pos.append(coords[i] + t * spacing)
            direction.append(1 if b > 0 else -1)
    return np.asarray(pos, dtype=float), np.asarray(direction, dtype=int)


def extract_nodal_set(f: Field) -> NodalSet:
    g = f.grid
    if g.kind in ("circle", "interval"):
        wrap = g.kind == "circle"
        pos, direction = _scan_line(f.values, g.axis(0), g.h, wrap)
        if wrap:
            pos = pos % g.lengths[0]
        order = np.argsort(pos)
        return NodalSet(g.kind, pos[order], direction[order], g.lengths)

    # torus: interpolated crossings along both coordinate directions
    th, yy = g.axis(0), g.axis(1)
    h1, h2 = g.spacings
    v = f.values
    pts, signs, axes = [], [], []
    zero_mask = v == 0.0
    for i, j in zip(*np.nonzero(zero_mask)):
        pts.append((th[i], yy[j]))
        signs.append(0)
        axes.append(-1)
    a, b = v, np.roll(v, -1, axis=0)
    cross = a * b < 0.0
    for i, j in zip(*np.nonzero(cross)):
        t = a[i, j] / (a[i, j] - b[i, j])
        pts.append(((th[i] + t * h1) % g.lengths[0], yy[j]))
        signs.append(1 if b[i, j] > 0 else -1)
        axes.append(0)
    a, b = v, np.roll(v, -1, axis=1)
    cross = a * b < 0.0
    for i, j in zip(*np.nonzero(cross)):
        t = a[i, j] / (a[i, j] - b[i, j])
        pts.append((th[i], (yy[j] + t * h2) % g.lengths[1]))
        signs.append(1 if b[i, j] > 0 else -1)
        axes.append(1)
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    fiber = pts[:, 0] if pts.size else np.empty(0)
    return NodalSet(
        "torus",
        np.sort(fiber),
        np.zeros(fiber.size, dtype=int),
        g.lengths,
        points=pts,
        point_signs=np.asarray(signs, dtype=int),
        point_axes=np.asarray(axes, dtype=int),
    )


def hausdorff_distance(a: NodalSet, b: NodalSet) -> float:
    """Symmetric Hausdorff distance; +inf when exactly one set is empty."""
    if a.kind != b.kind:
        raise ValueError(f"nodal sets live on different grid kinds: {a.kind} vs {b.kind}")
    if a.is_empty and b.is_empty:
        return 0.0
    if a.is_empty or b.is_empty:
        return float("inf")
    if a.kind == "torus":
        pa, pb = a.points, b.points
        d0 = circle_distance(pa[:, None, 0], pb[None, :, 0], a.lengths[0])
        d1 = circle_distance(pa[:, None, 1], pb[None, :, 1], a.lengths[1])
        dm = np.hypot(d0, d1)
    elif a.kind == "circle":
        dm = circle_distance(a.angles[:, None], b.angles[None, :], a.lengths[0])
    else:
        dm = np.abs(a.angles[:, None] - b.angles[None, :])
    return float(max(dm.min(axis=1).max(), dm.min(axis=0).max()))


@dataclass(frozen=True)
class CongruenceReport:
    spacings: np.ndarray
    mean_spacing: float
    max_abs_deviation: float
    max_rel_deviation: float
    tolerance: float
    passed: bool


def _circle_spacings(angles: np.ndarray, circumference: float) -> np.ndarray:
    s = np.sort(angles)
    return np.diff(np.append(s, s[0] + circumference))


def check_congruent_intervals(ns: NodalSet, rel_tol: float = 1e-5) -> CongruenceReport:
    """Compare consecutive nodal spacings on the circle against their mean."""
    if ns.kind != "circle":
        raise ValueError("congruence check needs a circle nodal set")
    if ns.count < 2:
        raise ValueError("need at least two nodal points")
    spacings = _circle_spacings(ns.angles, ns.lengths[0])
    mean = float(np.mean(spacings))
    max_abs = float(np.max(np.abs(spacings - mean)))
    max_rel = max_abs / mean
    return CongruenceReport(spacings, mean, max_abs, max_rel, rel_tol, max_rel <= rel_tol)


def _interpolate_circle(f: Field, theta: float) -> float:
    g = f.grid
    L, h = g.lengths[0], g.h
    x = (theta % L) / h
    i = int(np.floor(x)) % g.shape[0]
    t = x - np.floor(x)
    v = f.values
    return float((1.0 - t) * v[i] + t * v[(i + 1) % g.shape[0]])


def check_alternation(f: Field, ns: NodalSet, indeterminate_tol: float = 1e-8) -> bool:
    """True iff the field sign alternates across consecutive nodal arcs."""
    if ns.is_empty:
        raise ValueError("alternation needs a nonempty nodal set")
    if f.grid.kind == "torus":
        angles = cluster_fiber_angles(ns, gap_threshold=4.0 * f.grid.h)
        profile = Field(
            _fiber_profile_grid(f), f.values.mean(axis=1), f.epsilon
        )
        ns1 = NodalSet("circle", angles, np.zeros(angles.size, dtype=int), (f.grid.lengths[0],))
        return check_alternation(profile, ns1, indeterminate_tol)
    L = f.grid.lengths[0]
    angles = np.sort(ns.angles)
    spacings = _circle_spacings(angles, L)
    signs = []
    for z, s in zip(angles, spacings):
        mid = (z + 0.5 * s) % L
        val = _interpolate_circle(f, mid)
        if abs(val) < indeterminate_tol:
            raise IndeterminateSignError(
                f"arc midpoint {mid:.6g} has |u| = {abs(val):.2e}; sign indeterminate"
            )
        signs.append(1 if val > 0 else -1)
    m = len(signs)
    return all(signs[i] != signs[(i + 1) % m] for i in range(m))


def _fiber_profile_grid(f: Field):
    from .grids import circle_grid

    return circle_grid(f.grid.shape[0], f.grid.lengths[0])


@dataclass(frozen=True)
class SymmetryReport:
    m: int
    shift_steps: int
    sign_flip_residual: float
    plain_residual: float
    tolerance: float
    passed: bool


def check_rotation_symmetry(f: Field, m: int, tol: float = 1e-7) -> SymmetryReport:
    """Residuals of the rotate-by-(L/m)-and-flip-sign symmetry.

    For an alternating m-interface solution, rotating by one nodal spacing
    flips the sign; rotating by two spacings is a plain invariance.  Requires
    the point count to be divisible by m so the rotation is a whole number of
    grid steps.
    """
    if m < 2 or m % 2 != 0:
        raise ValueError("m must be an even integer >= 2")
    n = f.grid.shape[0]
    if n % m != 0:
        raise ValueError(f"grid points ({n}) not divisible by m = {m}")
    k = n // m
    v = f.values
    flip = float(np.max(np.abs(np.roll(v, -k, axis=0) + v)))
    plain = float(np.max(np.abs(np.roll(v, -2 * k, axis=0) - v)))
    return SymmetryReport(m, k, flip, plain, tol, flip <= tol)


def cluster_fiber_angles(ns: NodalSet, gap_threshold: float) -> np.ndarray:
    """Cluster a torus nodal cloud by fiber angle; returns cluster centers."""
    if ns.kind != "torus":
        raise ValueError("fiber clustering needs a torus nodal set")
    if ns.points is None or ns.points.shape[0] == 0:
        return np.empty(0)
    L = ns.lengths[0]
    th = np.sort(ns.points[:, 0] % L)
    gaps = np.diff(np.append(th, th[0] + L))  # gaps[i] follows th[i], wrap-aware
    breaks = np.flatnonzero(gaps > gap_threshold)
    if breaks.size == 0:
        # single cluster wrapping the whole fiber
        ang = float(np.angle(np.mean(np.exp(2j * np.pi * th / L))))
        return np.array([(ang % (2.0 * np.pi)) * L / (2.0 * np.pi)])
    # rotate so the array starts right after a break; clusters become contiguous
    start = (breaks[0] + 1) % th.size
    ordered = np.roll(th, -start)
    ends = np.flatnonzero(np.roll(gaps, -start) > gap_threshold)
    starts = np.concatenate([[0], ends[:-1] + 1])
    centers = []
    for s, e in zip(starts, ends):
        block = ordered[s : e + 1]
        # unwrap the block around its first element before averaging
        rel = (block - block[0] + 0.5 * L) % L - 0.5 * L
        centers.append((block[0] + float(rel.mean())) % L)
    return np.sort(np.asarray(centers))


@dataclass(frozen=True)
class DecayFit:
    amplitude: float  # least-squares C in  |u^2 - 1| ~ C exp(-kappa * dist)
    kappa: float
    rms_residual: float
    n_points: int
    window: tuple
    pointwise_factor: float  # smallest multiplier making the bound hold everywhere

    @property
    def envelope_amplitude(self) -> float:
        """Smallest constant whose exponential bounds every resolvable point."""
        return self.amplitude * self.pointwise_factor

    def pointwise_bound_holds(self, slack: float = 1e-2) -> bool:
        return self.pointwise_factor <= 1.0 + slack


NOISE_FLOOR = 1e-13  # |u^2 - 1| below this is double-precision rounding junk


def fit_decay(f: Field, ns: NodalSet) -> DecayFit:
    """Least-squares exponential fit of |u^2 - 1| against nodal distance.

    The fit window excludes a 2*eps collar around the nodal set (the linear
    regime has not set in there) and the far tail within eps of the maximal
    distance.  The pointwise factor is evaluated over every grid point whose
    gap exceeds the rounding floor; beyond it |u^2 - 1| is pure floating
    noise (the true value has underflowed) and carries no decay information.
    """
    if f.grid.kind not in ("circle", "interval"):
        raise ValueError("decay fit supports 1-D fields")
    if ns.is_empty:
        raise ValueError("decay fit needs a nonempty nodal set")
    eps = f.epsilon
    coords = f.grid.axis(0)
    if f.grid.kind == "circle":
        d = circle_distance(coords[:, None], ns.angles[None, :], f.grid.lengths[0]).min(axis=1)
    else:
        d = np.abs(coords[:, None] - ns.angles[None, :]).min(axis=1)
    dist_max = float(d.max())
    if dist_max < 5.0 * eps:
        raise ValueError(f"field never gets 5*eps away from its nodal set (max {dist_max:.3g})")
    gap = np.abs(f.values**2 - 1.0)
    window = (2.0 * eps, dist_max - eps)
    mask = (d >= window[0]) & (d <= window[1]) & (gap > 1e-15)
    if int(mask.sum()) < 10:
        raise ValueError(f"only {int(mask.sum())} points in the fit window; need 10")
    slope, intercept = np.polyfit(d[mask], np.log(gap[mask]), 1)
    kappa = -float(slope)
    amplitude = float(np.exp(intercept))
    resid = np.log(gap[mask]) - (intercept + slope * d[mask])
    rms = float(np.sqrt(np.mean(resid**2)))
    # worst-case ratio gap / (C exp(-kappa d)), computed in log space
    live = gap > NOISE_FLOOR
    log_ratio = np.log(gap[live]) + kappa * d[live] - np.log(amplitude)
    factor = float(np.exp(np.max(log_ratio)))
    return DecayFit(amplitude, kappa, rms, int(mask.sum()), window, factor)
