"""Automorphisms of the ball B^2, the Siegel domain H_2 and the bidisk.

Ball and Siegel maps are projective 3x3 matrices acting on homogeneous
coordinates (z1, z2, 1).  A map tagged ``siegel`` stores its matrix in Siegel
coordinates; ``ball_matrix`` transports it through the fixed Cayley map

    (z1, z2) -> (z, w) = (z2/(1 + z1), i(1 - z1)/(1 + z1)).

The ball form is J = diag(1, 1, -1); automorphisms satisfy M* J M = lambda J.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import moebius1d as m1
from .errors import DomainError, ModelMismatch, PoleError, RangeError, ToleranceAmbiguity

J = np.diag([1.0, 1.0, -1.0]).astype(complex)
# ball homogeneous coordinates -> Siegel homogeneous coordinates
CAYLEY2 = np.array([[0, 1, 0], [-1j, 0, 1j], [1, 0, 1]], dtype=complex)
CAYLEY2_INV = np.linalg.inv(CAYLEY2)

DOMAIN_SLACK = 1e-12
POLE_TOL = 1e-14
DOMAINS = ("ball", "siegel")


def _unit_det(m: np.ndarray) -> np.ndarray:
    """Scale to |det| = 1; when the determinant is lost to cancellation use the Frobenius norm."""
    n = np.linalg.norm(m)
    if n == 0 or not np.isfinite(n):
        raise ValueError("singular matrix")
    m = m / n
    d = abs(np.linalg.det(m))
    if d < 1e-9:
        return m
    return m / d ** (1.0 / 3.0)


def _points(p) -> tuple[np.ndarray, bool]:
    p = np.asarray(p, dtype=complex)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    if p.shape[-1] != 2:
        raise DomainError(f"expected points of C^2, got shape {p.shape}")
    return p, single


def in_ball(p, slack: float = 0.0) -> np.ndarray:
    p, _ = _points(p)
    return np.sum(np.abs(p) ** 2, axis=1) < 1.0 + slack


def siegel_margin(p) -> np.ndarray:
    """Im w - |z|^2 for points (z, w); positive exactly on H_2."""
    p, single = _points(p)
    m = p[:, 1].imag - np.abs(p[:, 0]) ** 2
    return m[0] if single else m


def in_siegel(p, slack: float = 0.0) -> np.ndarray:
    return np.atleast_1d(siegel_margin(p)) > -slack


def _projective_apply(m: np.ndarray, p: np.ndarray) -> np.ndarray:
    h = np.vstack([p.T, np.ones(p.shape[0])])
    out = m @ h
    if np.any(np.abs(out[2]) < POLE_TOL):
        raise PoleError("point sent to infinity")
    return (out[:2] / out[2]).T


@dataclass(frozen=True, eq=False)
class ProjAuto2:
    """Projective automorphism of B^2 (``domain='ball'``) or H_2 (``domain='siegel'``)."""

    matrix: np.ndarray
    domain: str = "ball"

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"domain must be one of {DOMAINS}")
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("expected a 3x3 matrix")
        m = _unit_det(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, domain: str = "ball") -> "ProjAuto2":
        return cls(np.eye(3), domain)

    @property
    def ball_matrix(self) -> np.ndarray:
        if self.domain == "ball":
            return self.matrix
        return CAYLEY2_INV @ self.matrix @ CAYLEY2

    @property
    def siegel_matrix(self) -> np.ndarray:
        if self.domain == "siegel":
            return self.matrix
        return CAYLEY2 @ self.matrix @ CAYLEY2_INV

    def to_domain(self, domain: str) -> "ProjAuto2":
        if domain == self.domain:
            return self
        return ProjAuto2(self.ball_matrix if domain == "ball" else self.siegel_matrix, domain)

    def form_residual(self) -> float:
        """max |M* J M - lambda J| / |M|^2 for the ball-frame matrix.

        Scaling by |M|^2 makes this a backward error: a J-unitary matrix of norm N
        carries rounding of order N^2 eps in M* J M, and N grows exponentially
        along hyperbolic powers.
        """
        m = self.ball_matrix
        g = m.conj().T @ J @ m
        n2 = np.linalg.norm(m, 2) ** 2
        lam = np.trace(g @ J).real / 3.0
        # lam may round to ~0 once M is numerically rank one; a clearly negative
        # lam means M swaps the ball and its exterior
        if lam < -1e-12 * n2:
            return math.inf
        return float(np.max(np.abs(g - max(lam, 0.0) * J)) / n2)

    def __call__(self, p):
        return apply2(self, p)

    def __matmul__(self, other: "ProjAuto2") -> "ProjAuto2":
        return compose2(self, other)

    def inverse(self) -> "ProjAuto2":
        return ProjAuto2(np.linalg.inv(self.matrix), self.domain)

    def power(self, n: int) -> "ProjAuto2":
        return power2(self, n)


def apply2(f: ProjAuto2, p):
    """Apply f to a point of C^2 or an (N, 2) array of points in its domain (closure allowed)."""
    pts, single = _points(p)
    if f.domain == "ball":
        if not np.all(in_ball(pts, DOMAIN_SLACK)):
            raise DomainError("point outside the closed ball")
    elif not np.all(in_siegel(pts, DOMAIN_SLACK * (1 + np.abs(pts[:, 1])))):
        raise DomainError("point outside the closed Siegel domain")
    out = _projective_apply(f.matrix, pts)
    return out[0] if single else out


def compose2(f: ProjAuto2, g: ProjAuto2) -> ProjAuto2:
    if f.domain != g.domain:
        raise ModelMismatch(f"cannot compose a {f.domain} map with a {g.domain} map")
    return ProjAuto2(f.matrix @ g.matrix, f.domain)


def power2(f: ProjAuto2, n: int) -> ProjAuto2:
    base = f if n >= 0 else f.inverse()
    m = np.eye(3, dtype=complex)
    b = base.matrix
    k = abs(int(n))
    while k:
        if k & 1:
            m = _unit_det(m @ b)
        k >>= 1
        if k:
            b = _unit_det(b @ b)
    return ProjAuto2(m, f.domain)


def projective_equal(f: ProjAuto2, g: ProjAuto2, tol: float = 1e-9) -> bool:
    return m1.projective_distance(f.ball_matrix, g.ball_matrix) < tol


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------


def ball_hyperbolic(r: float, theta: float) -> ProjAuto2:
    """(z, w) -> ((z + r)/(1 + rz), e^{i theta} sqrt(1 - r^2) w / (1 + rz))."""
    if not 0.0 < r < 1.0:
        raise RangeError("r must lie in (0, 1)")
    c = cmath.exp(1j * theta) * math.sqrt(1.0 - r * r)
    return ProjAuto2(np.array([[1, 0, r], [0, c, 0], [r, 0, 1]], dtype=complex), "ball")


def ball_hyperbolic_params(f: ProjAuto2, tol: float = 1e-9) -> tuple[float, float]:
    """Recover (r, theta) from a map in the normal form of ``ball_hyperbolic``."""
    m = f.ball_matrix
    m = m / m[0, 0]
    r = m[0, 2].real
    off = [m[0, 1], m[1, 0], m[1, 2], m[2, 1], m[0, 2].imag, m[2, 0] - r, m[2, 2] - 1]
    if max(abs(x) for x in off) > tol or not 0.0 < r < 1.0:
        raise RangeError("matrix is not in the hyperbolic normal form")
    c = m[1, 1]
    if abs(abs(c) - math.sqrt(1 - r * r)) > tol:
        raise RangeError("matrix is not in the hyperbolic normal form")
    return r, cmath.phase(c) % m1.TWO_PI


def siegel_parabolic_heisenberg(theta: float) -> ProjAuto2:
    """(z, w) -> (e^{i theta} z, w + 1) on H_2."""
    return ProjAuto2(np.array([[cmath.exp(1j * theta), 0, 0], [0, 1, 1], [0, 0, 1]]), "siegel")


def siegel_parabolic_shear() -> ProjAuto2:
    """(z, w) -> (z - i, w - 2z + i) on H_2."""
    return ProjAuto2(np.array([[1, 0, -1j], [-2, 1, 1j], [0, 0, 1]]), "siegel")


def fuchsian_lift(phi: m1.DiskAuto, psi: float = 0.0) -> ProjAuto2:
    """Extend e^{i t}(z + a)/(1 + conj(a) z) to the ball automorphism

        (z, w) -> (phi(z), e^{i psi} sqrt(1 - |a|^2) w / (1 + conj(a) z)).
    """
    phi = m1.to_disk(phi)
    a = phi.center
    e = cmath.exp(1j * phi.phase)
    c = cmath.exp(1j * psi) * math.sqrt(1.0 - abs(a) ** 2)
    return ProjAuto2(np.array([[e, 0, e * a], [0, c, 0], [a.conjugate(), 0, 1]]), "ball")


# ---------------------------------------------------------------------------
# Cayley map B^2 -> H_2
# ---------------------------------------------------------------------------


def cayley2(p):
    """(z1, z2) -> (z2/(1 + z1), i(1 - z1)/(1 + z1))."""
    pts, single = _points(p)
    out = _projective_apply(CAYLEY2, pts)
    return out[0] if single else out


def cayley2_inverse(q):
    pts, single = _points(q)
    out = _projective_apply(CAYLEY2_INV, pts)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def _su21(f: ProjAuto2) -> np.ndarray:
    m = f.ball_matrix
    g = m.conj().T @ J @ m
    lam = np.trace(g @ J).real / 3.0
    a = m / math.sqrt(lam)
    return a * np.linalg.det(a) ** (-1.0 / 3.0)


def goldman_discriminant(tau: complex) -> float:
    """|t|^4 - 8 Re(t^3) + 18 |t|^2 - 27: positive for loxodromic, negative for regular elliptic."""
    t2 = abs(tau) ** 2
    return t2 * t2 - 8.0 * (tau ** 3).real + 18.0 * t2 - 27.0


def classify2(f: ProjAuto2, eps: float = 1e-10) -> str:
    """'hyperbolic', 'parabolic' or 'elliptic' according to the fixed points in the closed ball.

    The trace discriminant separates loxodromic (two boundary fixed points) from
    regular elliptic maps.  On its zero set the repeated eigenvalue's eigenspace
    decides: a Jordan block means a single boundary fixed point (parabolic),
    a semisimple matrix has an interior fixed point (elliptic).
    """
    a = _su21(f)
    ev = np.linalg.eigvals(a)
    rho = float(np.max(np.abs(ev)))
    disc = goldman_discriminant(np.trace(a))
    if disc > eps or rho > 1.0 + 1e-4:
        return "hyperbolic"
    if disc < -eps:
        return "elliptic"
    # on the discriminant locus: look for a J-negative (interior) eigenvector
    scale = max(np.linalg.norm(a, 2), 1.0)
    for lam in _eigen_clusters(ev):
        _, sv, vh = np.linalg.svd(a - lam * np.eye(3))
        sv = sv / scale
        if np.any((sv > 1e-8) & (sv < 1e-4)):
            raise ToleranceAmbiguity(f"eigenstructure too close to degenerate (singular values {sv})")
        basis = vh[sv <= 1e-8].conj().T
        if basis.shape[1] == 0:
            raise ToleranceAmbiguity("eigenvalue cluster without an eigenvector")
        form = basis.conj().T @ J @ basis
        if np.linalg.eigvalsh(form).min() < -1e-9:
            return "elliptic"
    return "parabolic"


def _eigen_clusters(ev, tol: float = 1e-4) -> list[complex]:
    clusters: list[list[complex]] = []
    for lam in ev:
        for c in clusters:
            if abs(c[0] - lam) < tol:
                c.append(lam)
                break
        else:
            clusters.append([lam])
    return [complex(np.mean(c)) for c in clusters]


def boundary_fixed_points(f: ProjAuto2, tol: float = 1e-8) -> list[np.ndarray]:
    """Boundary fixed points (ball coordinates) from null eigenvectors off the unit circle."""
    a = _su21(f)
    ev, vecs = np.linalg.eig(a)
    out = []
    for lam, v in zip(ev, vecs.T):
        if abs(abs(lam) - 1.0) > 1e-6 and abs(v[2]) > tol:
            p = v[:2] / v[2]
            if abs(np.vdot(p, p).real - 1.0) < 1e-6:
                out.append(p)
    return out


# ---------------------------------------------------------------------------
# Bidisk
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BidiskAuto:
    """Coordinatewise pair (phi1, phi2) of disk automorphisms."""

    first: m1.DiskAuto
    second: m1.DiskAuto

    def __post_init__(self):
        object.__setattr__(self, "first", m1.to_disk(self.first))
        object.__setattr__(self, "second", m1.to_disk(self.second))

    @classmethod
    def identity(cls) -> "BidiskAuto":
        return cls(m1.DiskAuto.identity(), m1.DiskAuto.identity())

    def __call__(self, p):
        pts, single = _points(p)
        out = np.column_stack([self.first(pts[:, 0]), self.second(pts[:, 1])])
        return out[0] if single else out

    def __matmul__(self, other: "BidiskAuto") -> "BidiskAuto":
        return BidiskAuto(self.first @ other.first, self.second @ other.second)

    def inverse(self) -> "BidiskAuto":
        return BidiskAuto(self.first.inverse(), self.second.inverse())

    def power(self, n: int) -> "BidiskAuto":
        return BidiskAuto(self.first.power(n), self.second.power(n))
