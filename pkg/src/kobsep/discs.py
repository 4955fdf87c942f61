"""Extremal analytic discs: complex lines in B^2, geodesics G_{a,b} of H_2, bidisk graphs.

Every disc variant has a parametrization ``point(t)`` (vectorized), a
``tangent(t)``, the inverse ``parameter_of(p)`` and an equation ``residual(p)``.
The affine variants also carry a linear equation l1*z1 + l2*z2 + l0 = 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import moebius1d as m1
from .autos2d import ProjAuto2, in_ball, siegel_margin
from .errors import (
    CoincidentMaps,
    DegenerateRotation,
    DomainError,
    NotOnDisc,
    VariantError,
)

PIVOT_TOL = 1e-12
ROTATION_TOL = 1e-9


def _pts(t) -> np.ndarray:
    return np.asarray(t, dtype=complex)


def _stack(z1, z2, t) -> np.ndarray:
    out = np.stack(np.broadcast_arrays(_pts(z1), _pts(z2)), axis=-1)
    return out


@dataclass(frozen=True)
class BallLine:
    """{base + t * direction} intersected with B^2."""

    base: tuple
    direction: tuple
    ambient = "ball"

    def __post_init__(self):
        b = tuple(complex(x) for x in self.base)
        d = tuple(complex(x) for x in self.direction)
        if len(b) != 2 or len(d) != 2:
            raise DomainError("base and direction must be points of C^2")
        if abs(d[0]) + abs(d[1]) == 0:
            raise DomainError("direction must be nonzero")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "direction", d)
        # distance from the origin to the line must be < 1
        bv, dv = np.array(b), np.array(d)
        foot = bv - np.vdot(dv, bv) / np.vdot(dv, dv) * dv
        if not np.vdot(foot, foot).real < 1.0:
            raise DomainError("line misses the unit ball")

    def point(self, t):
        t = _pts(t)
        return _stack(self.base[0] + t * self.direction[0], self.base[1] + t * self.direction[1], t)

    def tangent(self, t=None) -> np.ndarray:
        return np.array(self.direction)

    def parameter_of(self, p):
        p = np.asarray(p, dtype=complex)
        d = np.array(self.direction)
        return (p - np.array(self.base)) @ d.conj() / np.vdot(d, d).real

    def residual(self, p):
        p = np.asarray(p, dtype=complex)
        return np.linalg.norm(p - self.point(self.parameter_of(p)), axis=-1)

    def equation(self) -> np.ndarray:
        (b1, b2), (d1, d2) = self.base, self.direction
        return np.array([d2, -d1, d1 * b2 - d2 * b1])

    def contains_domain_point(self, t) -> np.ndarray:
        return in_ball(self.point(np.atleast_1d(t)))


@dataclass(frozen=True)
class HorizontalLine:
    """L_alpha = {(z, alpha) : |z|^2 < 1 - |alpha|^2} in B^2."""

    alpha: complex
    ambient = "ball"

    def __post_init__(self):
        a = complex(self.alpha)
        if not abs(a) < 1.0:
            raise DomainError("|alpha| must be < 1")
        object.__setattr__(self, "alpha", a)

    def point(self, t):
        t = _pts(t)
        return _stack(t, np.full_like(t, self.alpha), t)

    def tangent(self, t=None) -> np.ndarray:
        return np.array([1.0 + 0j, 0j])

    def parameter_of(self, p):
        return np.asarray(p, dtype=complex)[..., 0]

    def residual(self, p):
        return np.abs(np.asarray(p, dtype=complex)[..., 1] - self.alpha)

    def equation(self) -> np.ndarray:
        return np.array([0j, 1.0 + 0j, -self.alpha])

    def contains_domain_point(self, t) -> np.ndarray:
        return in_ball(self.point(np.atleast_1d(t)))


@dataclass(frozen=True)
class SiegelGeodesic:
    """G_{a,b} = {z + a w + b = 0} intersected with H_2, parametrized by w."""

    a: complex
    b: complex
    ambient = "siegel"

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a != 0 and not (b / a).imag < 1.0 / (4.0 * abs(a) ** 2):
            raise DomainError("the line z + aw + b = 0 misses H_2")

    def point(self, w):
        w = _pts(w)
        return _stack(-self.a * w - self.b, w, w)

    def tangent(self, w=None) -> np.ndarray:
        return np.array([-self.a, 1.0 + 0j])

    def parameter_of(self, p):
        return np.asarray(p, dtype=complex)[..., 1]

    def residual(self, p):
        p = np.asarray(p, dtype=complex)
        return np.abs(p[..., 0] + self.a * p[..., 1] + self.b)

    def equation(self) -> np.ndarray:
        return np.array([1.0 + 0j, self.a, self.b])

    def contains_domain_point(self, w) -> np.ndarray:
        return np.atleast_1d(siegel_margin(self.point(np.atleast_1d(w)))) > 0


@dataclass(frozen=True)
class VerticalLine:
    """G_b = {z = -b} in H_2, parametrized by w over H_b = {Im w > |b|^2}."""

    b: complex
    ambient = "siegel"

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b))

    def point(self, w):
        w = _pts(w)
        return _stack(np.full_like(w, -self.b), w, w)

    def tangent(self, w=None) -> np.ndarray:
        return np.array([0j, 1.0 + 0j])

    def parameter_of(self, p):
        return np.asarray(p, dtype=complex)[..., 1]

    def residual(self, p):
        return np.abs(np.asarray(p, dtype=complex)[..., 0] + self.b)

    def equation(self) -> np.ndarray:
        return np.array([1.0 + 0j, 0j, self.b])

    def contains_domain_point(self, w) -> np.ndarray:
        return np.atleast_1d(siegel_margin(self.point(np.atleast_1d(w)))) > 0


@dataclass(frozen=True)
class BidiskGraph:
    """{(z, g(xi * pre(z)))} in the bidisk; g and pre default to the identity.

    ``BidiskGraph()`` is the diagonal, ``BidiskGraph(xi=x)`` is D_xi and
    ``BidiskGraph(g)`` the graph of a disk automorphism.  With ``transposed``
    the roles of the coordinates are swapped.
    """

    g: Optional[m1.DiskAuto] = None
    xi: complex = 1.0 + 0j
    pre: Optional[m1.DiskAuto] = None
    transposed: bool = False
    ambient = "bidisk"

    def __post_init__(self):
        xi = complex(self.xi)
        if abs(xi) > 1.0 + 1e-15:
            raise DomainError("|xi| must be <= 1")
        object.__setattr__(self, "xi", xi)
        for name in ("g", "pre"):
            if getattr(self, name) is not None:
                object.__setattr__(self, name, m1.to_disk(getattr(self, name)))

    def _map(self, z):
        u = _pts(z) if self.pre is None else self.pre(_pts(z))
        u = self.xi * u
        return u if self.g is None else self.g(u)

    def _dmap(self, z):
        z = _pts(z)
        d = self.xi
        if self.pre is not None:
            d = d * self.pre.derivative(z)
            z = self.pre(z)
        if self.g is not None:
            d = d * self.g.derivative(self.xi * z)
        return d

    def _order(self, a, b):
        return (b, a) if self.transposed else (a, b)

    def point(self, z):
        z = _pts(z)
        return _stack(*self._order(z, self._map(z)), z)

    def tangent(self, z) -> np.ndarray:
        return np.array(self._order(1.0 + 0j, complex(self._dmap(z))))

    def parameter_of(self, p):
        return np.asarray(p, dtype=complex)[..., 1 if self.transposed else 0]

    def residual(self, p):
        p = np.asarray(p, dtype=complex)
        z, w = (p[..., 1], p[..., 0]) if self.transposed else (p[..., 0], p[..., 1])
        return np.abs(w - self._map(z))

    def derivative(self, z):
        return self._dmap(z)

    def contains_domain_point(self, z) -> np.ndarray:
        z = np.atleast_1d(_pts(z))
        inside = np.abs(z) < 1.0
        return inside & (np.abs(self._map(np.where(inside, z, 0))) < 1.0)

    @property
    def is_unique_extremal(self) -> bool:
        """Only the diagonal-type discs D_xi with |xi| = 1 are unique extremals."""
        return (self.g is None and self.pre is None and not self.transposed
                and abs(abs(self.xi) - 1.0) < 1e-15)


AnalyticDisc = Union[BallLine, HorizontalLine, SiegelGeodesic, VerticalLine, BidiskGraph]
AFFINE = (BallLine, HorizontalLine, SiegelGeodesic, VerticalLine)


def _require_affine(*ds):
    for d in ds:
        if not isinstance(d, AFFINE):
            raise VariantError(f"{type(d).__name__} is not an affine line")


def line_from_equation(l: np.ndarray, ambient: str) -> AnalyticDisc:
    """Build the disc variant for the locus l1*z1 + l2*z2 + l0 = 0."""
    l = np.asarray(l, dtype=complex)
    scale = np.max(np.abs(l[:2]))
    if scale == 0:
        raise VariantError("degenerate line equation")
    small = lambda x: abs(x) < PIVOT_TOL * scale
    l1, l2, l0 = l
    if ambient == "ball":
        if small(l1):
            return HorizontalLine(-l0 / l2)
        if small(l2):
            return BallLine((-l0 / l1, 0j), (0j, 1.0 + 0j))
        return BallLine((0j, -l0 / l2), (1.0 + 0j, -l1 / l2))
    if ambient == "siegel":
        if small(l1):
            raise VariantError("a line w = const is not a geodesic variant")
        if small(l2):
            return VerticalLine(l0 / l1)
        return SiegelGeodesic(l2 / l1, l0 / l1)
    raise VariantError(f"no affine lines in ambient {ambient!r}")


def same_locus(d1: AnalyticDisc, d2: AnalyticDisc, tol: float = 1e-9) -> bool:
    _require_affine(d1, d2)
    if d1.ambient != d2.ambient:
        return False
    e1, e2 = d1.equation(), d2.equation()
    return m1.projective_distance(e1[None, :], e2[None, :]) < tol


def line_image(phi: ProjAuto2, d: AnalyticDisc) -> AnalyticDisc:
    """Image of an affine disc under a ball/Siegel automorphism, computed on the dual vector."""
    _require_affine(d)
    m = phi.to_domain(d.ambient).matrix
    return line_from_equation(d.equation() @ np.linalg.inv(m), d.ambient)


@dataclass(frozen=True)
class Point:
    p: np.ndarray = field(compare=False)
    kind = "point"


@dataclass(frozen=True)
class Parallel:
    kind = "parallel"


@dataclass(frozen=True)
class Coincident:
    kind = "coincident"


def line_intersect(d1: AnalyticDisc, d2: AnalyticDisc):
    """Point(p) | Parallel() | Coincident() for two affine lines in the same ambient."""
    _require_affine(d1, d2)
    if d1.ambient != d2.ambient:
        raise VariantError("lines live in different ambient domains")
    e1, e2 = d1.equation(), d2.equation()
    e1 = e1 / np.max(np.abs(e1[:2]))
    e2 = e2 / np.max(np.abs(e2[:2]))
    a = np.array([e1[:2], e2[:2]])
    det = np.linalg.det(a)
    if abs(det) < PIVOT_TOL:
        if np.linalg.matrix_rank(np.array([e1, e2]), tol=PIVOT_TOL) < 2:
            return Coincident()
        return Parallel()
    return Point(np.linalg.solve(a, -np.array([e1[2], e2[2]])))


# ---------------------------------------------------------------------------
# Intersections used by the certificates
# ---------------------------------------------------------------------------


def lalpha_intersection(r: float, theta: float) -> tuple[complex, bool]:
    """Intersection of L_alpha with its image under the hyperbolic normal form (r, theta).

    Returns z0 = (1 - sqrt(1 - r^2) e^{-i theta})/r and whether sqrt(1 - r^2) < cos(theta),
    which is equivalent to |z0| < 1.
    """
    s = math.sqrt(1.0 - r * r)
    z0 = (1.0 - s * cmath.exp(-1j * theta)) / r
    return z0, s < math.cos(theta)


def siegel_geodesic_intersection(a: complex, b: complex, theta: float) -> tuple[complex, complex]:
    """The point (z0, w0) on G_{a,b} whose image under (z, w) -> (e^{i theta} z, w + 1) is on G_{a,b}."""
    a, b = complex(a), complex(b)
    if a == 0:
        raise DomainError("a must be nonzero")
    den = 1.0 - cmath.exp(1j * theta)
    if abs(den) < ROTATION_TOL:
        raise DegenerateRotation("theta is a multiple of 2*pi")
    z0 = a / den
    return z0, -(b + z0) / a


def choose_b(a: complex, theta: float, margin: float = 0.1) -> complex:
    """A b for which the intersection point lies in H_2 with Im w0 - |z0|^2 > margin.

    Searches b = -z0 - i t a with t doubling, which puts w0 = i t.
    """
    a = complex(a)
    z0, _ = siegel_geodesic_intersection(a, 0j, theta)
    t = 1.0
    while t - abs(z0) ** 2 <= margin:
        t *= 2.0
    return -z0 - 1j * t * a


def _quadratic_roots(A: complex, B: complex, C: complex, tol: float = 1e-14) -> list[complex]:
    scale = max(abs(A), abs(B), abs(C))
    A, B, C = A / scale, B / scale, C / scale
    if abs(A) < tol:
        return [] if abs(B) < tol else [-C / B]
    sq = cmath.sqrt(B * B - 4 * A * C)
    q = -0.5 * (B + sq) if abs(B + sq) >= abs(B - sq) else -0.5 * (B - sq)
    if q == 0:
        return [0j, 0j]
    return [q / A, C / q]


def graph_intersection(g1: m1.Auto1, g2: m1.Auto1) -> list[complex]:
    """Roots of g1(z) = g2(z) inside the unit disk."""
    g1, g2 = m1.to_disk(g1), m1.to_disk(g2)
    m, n = g1.matrix, g2.matrix
    if m1.projective_distance(m, n) < 1e-12:
        raise CoincidentMaps("the maps coincide")
    (a1, b1), (c1, d1) = m
    (a2, b2), (c2, d2) = n
    A = a1 * c2 - a2 * c1
    B = a1 * d2 + b1 * c2 - a2 * d1 - b2 * c1
    C = b1 * d2 - b2 * d1
    roots = []
    for z in _quadratic_roots(A, B, C):
        # the cleared coefficients carry cancellation error, so polish on g1 - g2 itself
        for _ in range(3):
            if not abs(z) < 1.0:
                break
            dh = complex(g1.derivative(z) - g2.derivative(z))
            if dh == 0:
                break
            z = z - complex(g1(z) - g2(z)) / dh
        if abs(z) < 1.0:
            roots.append(complex(z))
    return sorted(roots, key=abs)


def winding_isolation(h, z0: complex, radius: float = 1e-3, n: int = 512) -> tuple[int, float]:
    """Zero count of h inside |z - z0| = radius (argument principle) and min |h| on the circle."""
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    vals = np.asarray(h(z0 + radius * np.exp(1j * t)), dtype=complex)
    ang = np.angle(np.roll(vals, -1) / vals)
    return int(round(ang.sum() / (2.0 * np.pi))), float(np.min(np.abs(vals)))


def transversality(d1: AnalyticDisc, d2: AnalyticDisc, p, tol: float = 1e-10) -> float:
    """Isolation margin of the intersection of two discs at p.

    For two bidisk graphs this is |G1'(z) - G2'(z)| (G_j the graph maps);
    otherwise the angle between the complex tangent lines, in [0, pi/2].
    """
    if d1.ambient != d2.ambient:
        raise VariantError("discs live in different ambient domains")
    p = np.asarray(p, dtype=complex)
    for d in (d1, d2):
        if float(d.residual(p)) > tol * (1.0 + np.linalg.norm(p)):
            raise NotOnDisc(f"point not on {type(d).__name__} (residual {float(d.residual(p)):.3g})")
    t1, t2 = d1.parameter_of(p), d2.parameter_of(p)
    if (isinstance(d1, BidiskGraph) and isinstance(d2, BidiskGraph)
            and d1.transposed == d2.transposed):
        return float(abs(d1.derivative(t1) - d2.derivative(t2)))
    u, v = d1.tangent(t1), d2.tangent(t2)
    c = abs(np.vdot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return float(math.acos(min(1.0, c)))
