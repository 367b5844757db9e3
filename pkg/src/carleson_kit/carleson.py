"""Carleson norms of discrete and curve measures, and two companion
constants: the kernel-test constant and the empirical embedding constant
on polynomials.

All ratios use Euclidean units: arc lengths in radians, curve mass as
Euclidean arc length.  Suprema over arcs run over the dyadic arcs of depth
up to a requested bound, so every reported norm is a lower bound for the
true supremum and is nondecreasing in the depth.  Squares are evaluated
closed at the boundary circle so that measures with unimodular atoms are
handled; for measures supported inside the open disk this agrees with the
open square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .disk import (
    TAU,
    Arc,
    CarlesonSquare,
    as_complex,
    dyadic_arc,
    hyperbolic_grid,
)
from .errors import DomainError


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite positive measure sum_i mass_i * delta(point_i), |point_i| <= 1."""

    points: np.ndarray
    masses: np.ndarray

    def __init__(self, atoms):
        pts = []
        ms = []
        for p, m in atoms:
            p = as_complex(p)
            m = float(m)
            if abs(p) > 1.0 + 1e-12:
                raise DomainError(f"atom outside the closed disk: |z| = {abs(p):.6g}")
            if m <= 0.0:
                raise DomainError(f"atom masses must be positive, got {m}")
            pts.append(p)
            ms.append(m)
        object.__setattr__(self, "points", np.asarray(pts, dtype=complex))
        object.__setattr__(self, "masses", np.asarray(ms, dtype=float))

    def __len__(self) -> int:
        return self.points.shape[0]

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def mass_in_square(self, square: CarlesonSquare) -> float:
        if len(self) == 0:
            return 0.0
        inside = square.contains_many(self.points)
        return float(self.masses[inside].sum())


def _segment_length_in_square(a: complex, b: complex, square: CarlesonSquare) -> float:
    """Exact length of [a, b] inside the square, by breakpoint subdivision."""
    d = b - a
    seg_len = abs(d)
    if seg_len == 0.0:
        return 0.0
    ts = [0.0, 1.0]
    # crossings of the inner circle |p(t)| = r0
    r0 = square.inner_radius
    if r0 > 0.0:
        qa = abs(d) ** 2
        qb = 2.0 * (np.conj(d) * a).real
        qc = abs(a) ** 2 - r0 * r0
        disc = qb * qb - 4.0 * qa * qc
        if disc > 0.0:
            sq = math.sqrt(disc)
            for t in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)):
                if 0.0 < t < 1.0:
                    ts.append(t)
    # crossings of the two boundary rays
    if square.base.length < TAU - 1e-15:
        for theta in (square.base.start, square.base.end):
            e = complex(math.cos(theta), math.sin(theta))
            denom = (np.conj(e) * d).imag
            if denom != 0.0:
                t = -(np.conj(e) * a).imag / denom
                if 0.0 < t < 1.0:
                    ts.append(t)
    ts.sort()
    total = 0.0
    for t0, t1 in zip(ts, ts[1:]):
        if t1 - t0 <= 0.0:
            continue
        mid = a + 0.5 * (t0 + t1) * d
        if square.contains(mid):
            total += (t1 - t0) * seg_len
    return total


@dataclass(frozen=True)
class CurveMeasure:
    """Arc length carried by one or more polylines inside the open disk."""

    polylines: tuple

    def __init__(self, polylines):
        chains = []
        for chain in polylines:
            pts = np.asarray([as_complex(p) for p in chain], dtype=complex)
            if pts.shape[0] < 2:
                continue
            if np.any(np.abs(pts) >= 1.0):
                raise DomainError("polyline vertices must lie inside the open disk")
            chains.append(pts)
        object.__setattr__(self, "polylines", tuple(chains))

    @classmethod
    def single(cls, vertices) -> "CurveMeasure":
        return cls([vertices])

    def total_mass(self) -> float:
        return float(sum(np.sum(np.abs(np.diff(c))) for c in self.polylines))

    def segments(self):
        for chain in self.polylines:
            for a, b in zip(chain, chain[1:]):
                yield complex(a), complex(b)

    def mass_in_square(self, square: CarlesonSquare) -> float:
        return float(
            sum(_segment_length_in_square(a, b, square) for a, b in self.segments())
        )


def _segment_angle_window(a: complex, b: complex) -> tuple[float, float]:
    """A (start, extent) angular window containing the segment's angles."""
    ta = math.atan2(a.imag, a.real) % TAU
    tb = math.atan2(b.imag, b.real) % TAU
    fwd = (tb - ta) % TAU
    if fwd <= TAU - fwd:
        return ta, fwd
    return tb, TAU - fwd


def _candidate_indices(window: tuple[float, float], depth: int) -> range:
    """Indices of depth-``depth`` dyadic arcs meeting the angular window."""
    n = 1 << depth
    cell = TAU / n
    start, extent = window
    j0 = int(math.floor(start / cell))
    j1 = int(math.floor((start + extent) / cell))
    return range(j0, j1 + 1)  # reduce modulo n at use sites


def carleson_norm(measure, depth: int = 12) -> float:
    """sup over dyadic arcs of depth <= depth of mass(S(I)) / |I| (Euclidean).

    Only arcs whose square can receive mass are evaluated; the membership
    predicate is the same one ``mass_in_square`` uses, so this equals the
    brute-force supremum over the same arcs.
    """
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    best = 0.0
    if isinstance(measure, DiscreteMeasure):
        if len(measure) == 0:
            return 0.0
        angles = np.angle(measure.points) % TAU
        radii = np.abs(measure.points)
        for d in range(depth + 1):
            n = 1 << d
            norm_len = 1.0 / n
            alive = radii >= 1.0 - norm_len
            if not np.any(alive):
                continue
            idx = np.unique(np.minimum((angles[alive] / (TAU / n)).astype(int), n - 1))
            for j in idx:
                arc = dyadic_arc(d, int(j))
                m = measure.mass_in_square(CarlesonSquare(arc, closed=True))
                best = max(best, m / arc.length)
        return best
    if isinstance(measure, CurveMeasure):
        segs = list(measure.segments())
        if not segs:
            return 0.0
        windows = [_segment_angle_window(a, b) for a, b in segs]
        max_radius = [max(abs(a), abs(b)) for a, b in segs]
        for d in range(depth + 1):
            n = 1 << d
            norm_len = 1.0 / n
            buckets: dict[int, list[int]] = {}
            for i, ((a, b), w) in enumerate(zip(segs, windows)):
                if max_radius[i] < 1.0 - norm_len:
                    continue
                for j in _candidate_indices(w, d):
                    buckets.setdefault(j % n, []).append(i)
            for j, seg_ids in buckets.items():
                arc = dyadic_arc(d, j)
                square = CarlesonSquare(arc, closed=True)
                m = sum(
                    _segment_length_in_square(segs[i][0], segs[i][1], square)
                    for i in seg_ids
                )
                best = max(best, m / arc.length)
        return best
    raise DomainError(f"unsupported measure type: {type(measure).__name__}")


def kernel_test_constant(measure: DiscreteMeasure, lam_grid=None) -> float:
    """sup over a grid of  sum_i mass_i |k_lam(point_i)|^2.

    The default grid is the layered disk grid plus the interior atoms of the
    measure themselves, which is where the supremum concentrates.
    """
    if not isinstance(measure, DiscreteMeasure):
        raise DomainError("kernel test is defined for discrete measures")
    if len(measure) == 0:
        return 0.0
    if lam_grid is None:
        interior = measure.points[np.abs(measure.points) < 1.0 - 1e-12]
        lam_grid = np.concatenate([hyperbolic_grid(), interior])
    lam_grid = np.asarray(lam_grid, dtype=complex)
    if np.any(np.abs(lam_grid) >= 1.0):
        raise DomainError("kernel test grid must consist of interior points")
    best = 0.0
    chunk = 4096
    for i in range(0, lam_grid.shape[0], chunk):
        lam = lam_grid[i: i + chunk]
        w = (1.0 - np.abs(lam)[:, None] ** 2) / np.abs(
            1.0 - np.conj(lam)[:, None] * measure.points[None, :]
        ) ** 2
        vals = w @ measure.masses
        best = max(best, float(vals.max()))
    return best


def embedding_constant_empirical(measure: DiscreteMeasure, test_degree: int) -> float:
    """Largest eigenvalue of the L2(mu) quadratic form on polynomials.

    The form matrix is A[j, k] = sum_i mass_i point_i^k conj(point_i)^j for
    0 <= j, k <= test_degree; Hardy-space norms make the coefficient basis
    orthonormal, so the constant is the top eigenvalue of A.
    """
    if test_degree < 0:
        raise DomainError("test degree must be nonnegative")
    if len(measure) == 0:
        return 0.0
    powers = np.vander(measure.points, test_degree + 1, increasing=True)  # (n, deg+1)
    a = (powers.conj() * measure.masses[:, None]).T @ powers
    a = 0.5 * (a + a.conj().T)
    eig = np.linalg.eigvalsh(a)
    return float(max(eig[-1], 0.0))
