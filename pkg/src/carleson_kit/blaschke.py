"""Finite Blaschke products, interpolation-type constants of finite
sequences, and greedy nets on curves with pseudo-hyperbolic mesh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import carleson as carleson_mod
from .disk import as_complex, blaschke_factor, layer_index, pseudo_hyperbolic, require_interior
from .errors import DomainError


class BlaschkeProduct:
    """Product of Blaschke factors over a finite list of simple interior zeros.

    The empty product is the constant 1.  Repeated zeros are rejected;
    degenerate inputs should model multiplicity by perturbation.
    """

    __slots__ = ("zeros",)

    def __init__(self, zeros=()):
        zs = [require_interior(z, "Blaschke zero") for z in zeros]
        if len(set(zs)) != len(zs):
            raise DomainError("Blaschke zeros must be pairwise distinct (simple zeros)")
        self.zeros = tuple(zs)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        zs = np.asarray(z, dtype=complex)
        out = np.ones_like(zs)
        for lam in self.zeros:
            out = out * blaschke_factor(lam, zs)
        if np.isscalar(z) or isinstance(z, (complex, float, int)):
            return complex(out)
        return out

    def log_abs(self, z):
        """log |B(z)|, elementwise; -inf at the zeros."""
        zs = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            out = np.zeros(zs.shape, dtype=float)
            for lam in self.zeros:
                out = out + np.log(np.abs(blaschke_factor(lam, zs)))
        if np.isscalar(z) or isinstance(z, (complex, float, int)):
            return float(out)
        return out


@dataclass(frozen=True)
class InterpolationReport:
    """Constants attached to a finite interior sequence.

    delta   = min over lam of prod_{mu != lam} |b_mu(lam)|
    alpha   = min pairwise pseudo-hyperbolic distance (1.0 for singletons)
    carleson_norm = Carleson norm of sum (1 - |lam|^2) delta_lam
    """

    delta: float
    alpha: float
    carleson_norm: float


def _check_distinct(points) -> list[complex]:
    pts = [require_interior(p, "sequence point") for p in points]
    if not pts:
        raise DomainError("the sequence must be nonempty")
    if len(set(pts)) != len(pts):
        raise DomainError("sequence points must be pairwise distinct")
    return pts


def interpolation_constants(points, depth: int = 12) -> InterpolationReport:
    """delta, separation alpha and the Carleson norm of the point-mass measure."""
    pts = _check_distinct(points)
    n = len(pts)
    if n == 1:
        delta = 1.0
        alpha = 1.0
    else:
        arr = np.asarray(pts, dtype=complex)
        dist = np.abs(arr[:, None] - arr[None, :]) / np.abs(1.0 - np.conj(arr[:, None]) * arr[None, :])
        np.fill_diagonal(dist, 1.0)
        alpha = float(dist.min())
        delta = float(np.exp(np.log(dist).sum(axis=1).min()))
    measure = carleson_mod.DiscreteMeasure([(p, 1.0 - abs(p) ** 2) for p in pts])
    norm = carleson_mod.carleson_norm(measure, depth)
    return InterpolationReport(delta=delta, alpha=alpha, carleson_norm=norm)


def projection_norm_formula(points, lam) -> float:
    """Norm of the skew projection onto the kernel at lam along the others.

    Equals (prod_{mu != lam} |b_mu(lam)|)^{-1}; lam must belong to the
    sequence.
    """
    pts = _check_distinct(points)
    lam = as_complex(lam)
    if lam not in pts:
        raise DomainError("lam must be one of the sequence points")
    prod = 1.0
    for mu in pts:
        if mu != lam:
            prod *= abs(blaschke_factor(mu, lam))
    if prod == 0.0:
        raise DomainError("degenerate sequence: coinciding points")
    return 1.0 / prod


def place_net_on_curve(vertices, alpha: float) -> list[complex]:
    """Greedy pseudo-hyperbolic alpha-net on the vertices of a polyline.

    Vertices are visited layer by layer (dyadic layer 0 first) and within a
    layer in the given order; a vertex joins the net when its
    pseudo-hyperbolic distance to every selected point exceeds alpha.  The
    result is alpha-separated and every input vertex lies within alpha of
    the net (strictly, outside of exact-tie vertices, which floating point
    never produces in practice).
    """
    if not (0.0 < alpha < 0.1):
        raise DomainError(f"net mesh must lie in (0, 0.1), got {alpha}")
    pts = [require_interior(v, "curve vertex") for v in vertices]
    if not pts:
        return []
    order = sorted(range(len(pts)), key=lambda i: (layer_index(pts[i]), i))
    selected: list[complex] = []
    sel_arr = np.zeros(0, dtype=complex)
    for i in order:
        v = pts[i]
        if selected.__len__():
            d = np.abs(sel_arr - v) / np.abs(1.0 - np.conj(sel_arr) * v)
            if not np.all(d > alpha):
                continue
        selected.append(v)
        sel_arr = np.asarray(selected, dtype=complex)
    return selected


def net_is_valid(vertices, net, alpha: float) -> tuple[bool, bool, bool]:
    """(separated, dense, product_small): the three net postconditions.

    separated: |b_lam(mu)| > alpha for distinct net points;
    dense: every vertex has a net point with |b_lam(z)| < alpha;
    product_small: |B(z)| < alpha at every vertex for B the net's product.
    """
    net = [as_complex(p) for p in net]
    verts = np.asarray([as_complex(v) for v in vertices], dtype=complex)
    if not net:
        return (True, len(verts) == 0, len(verts) == 0)
    arr = np.asarray(net, dtype=complex)
    n = len(net)
    separated = True
    if n > 1:
        d = np.abs(arr[:, None] - arr[None, :]) / np.abs(1.0 - np.conj(arr[:, None]) * arr[None, :])
        np.fill_diagonal(d, np.inf)
        separated = bool(d.min() > alpha)
    dv = np.abs(arr[None, :] - verts[:, None]) / np.abs(1.0 - np.conj(arr[None, :]) * verts[:, None])
    dense = bool(np.all(dv.min(axis=1) < alpha))
    product = BlaschkeProduct(net)
    product_small = bool(np.all(np.abs(product(verts)) < alpha))
    return separated, dense, product_small
