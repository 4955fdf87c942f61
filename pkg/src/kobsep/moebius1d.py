"""Automorphisms of the unit disk and the upper half-plane.

Disk maps are stored in canonical parameters ``z -> e^{i phase} (z + center) / (1 + conj(center) z)``;
half-plane maps as real coefficients with ``ad - bc = 1``.  Both expose a 2x2
``matrix`` so the group machinery can treat them uniformly.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import (
    CoincidentPoints,
    DomainError,
    IdentityInput,
    ModelMismatch,
    NotFixed,
    PoleError,
    WrongClass,
)

INF = complex(math.inf, 0.0)
TWO_PI = 2.0 * math.pi

POLE_TOL = 1e-14
DOMAIN_SLACK = 1e-12
CLASSIFY_EPS = 1e-9
FIXED_TOL = 1e-9

# Cayley map C(z) = i(1 - z)/(1 + z), disk -> upper half-plane, and its inverse.
_C = np.array([[-1j, 1j], [1.0, 1.0]])
_C_INV = np.array([[1.0, -1j], [-1.0, -1j]])


def _is_inf(z) -> bool:
    return isinstance(z, complex) and cmath.isinf(z) or isinstance(z, float) and math.isinf(z)


def projective_normalize(m: np.ndarray) -> np.ndarray:
    """Scale a matrix to unit Frobenius norm with a canonical phase.

    The phase reference is the first entry (row-major) whose modulus is within
    1e-6 of the largest one, so nearly tied entries resolve by position.
    """
    m = np.asarray(m, dtype=complex)
    m = m / np.linalg.norm(m)
    flat = m.ravel()
    mods = np.abs(flat)
    k = int(np.argmax(mods >= (1.0 - 1e-6) * mods.max()))
    return m * (abs(flat[k]) / flat[k])


def projective_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry distance between two matrices modulo nonzero scalars."""
    return float(np.max(np.abs(projective_normalize(a) - projective_normalize(b))))


def _sl_normalize(m: np.ndarray) -> np.ndarray:
    return m / np.sqrt(np.linalg.det(m) + 0j)


# ---------------------------------------------------------------------------
# Automorphism types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskAuto:
    """z -> e^{i phase} (z + center) / (1 + conj(center) z) on the unit disk."""

    phase: float = 0.0
    center: complex = 0j

    def __post_init__(self):
        c = complex(self.center)
        if not abs(c) < 1.0:
            raise DomainError(f"center must lie in the unit disk, got {c}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)

    @classmethod
    def identity(cls) -> "DiskAuto":
        return cls(0.0, 0j)

    @classmethod
    def hyperbolic(cls, r: float) -> "DiskAuto":
        """The normal form z -> (z + r)/(1 + r z)."""
        return cls(0.0, complex(r))

    @classmethod
    def rotation(cls, theta: float) -> "DiskAuto":
        return cls(theta, 0j)

    @classmethod
    def from_matrix(cls, m) -> "DiskAuto":
        """Read canonical parameters off a matrix proportional to [[a, b], [conj b, conj a]]."""
        m = _sl_normalize(np.asarray(m, dtype=complex))
        a = 0.5 * (m[0, 0] + np.conj(m[1, 1]))
        b = 0.5 * (m[0, 1] + np.conj(m[1, 0]))
        return cls(2.0 * cmath.phase(a), complex(b / a))

    @property
    def matrix(self) -> np.ndarray:
        """SU(1,1) representative, determinant 1."""
        h = cmath.exp(0.5j * self.phase) / math.sqrt(1.0 - abs(self.center) ** 2)
        a, b = h, h * self.center
        return np.array([[a, b], [np.conj(b), np.conj(a)]])

    @property
    def trace(self) -> float:
        return float(2.0 * self.matrix[0, 0].real)

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "DiskAuto") -> "DiskAuto":
        return compose(self, other)

    def inverse(self) -> "DiskAuto":
        return inverse(self)

    def power(self, n: int) -> "DiskAuto":
        return power(self, n)

    def derivative(self, z):
        m = self.matrix
        return 1.0 / (m[1, 0] * np.asarray(z) + m[1, 1]) ** 2


@dataclass(frozen=True)
class HalfPlaneAuto:
    """z -> (a z + b)/(c z + d) with real coefficients and ad - bc = 1."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-9:
            raise DomainError(f"coefficients must satisfy ad - bc = 1 (got {det!r}); "
                              "use HalfPlaneAuto.from_coefficients to normalize")

    @classmethod
    def from_coefficients(cls, a, b, c, d) -> "HalfPlaneAuto":
        det = a * d - b * c
        if not det > 0:
            raise DomainError("ad - bc must be positive for a half-plane automorphism")
        s = math.sqrt(det)
        return cls(a / s, b / s, c / s, d / s)

    @classmethod
    def from_matrix(cls, m) -> "HalfPlaneAuto":
        m = np.asarray(m, dtype=complex)
        m = _sl_normalize(m)
        flat = m.ravel()
        k = int(np.argmax(np.abs(flat)))
        m = m * (abs(flat[k]) / flat[k])
        re = m.real
        return cls.from_coefficients(re[0, 0], re[0, 1], re[1, 0], re[1, 1])

    @classmethod
    def identity(cls) -> "HalfPlaneAuto":
        return cls()

    @classmethod
    def translation(cls, t: float) -> "HalfPlaneAuto":
        return cls(1.0, t, 0.0, 1.0)

    @classmethod
    def dilation(cls, k: float) -> "HalfPlaneAuto":
        """z -> k z for k > 0."""
        s = math.sqrt(k)
        return cls(s, 0.0, 0.0, 1.0 / s)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "HalfPlaneAuto") -> "HalfPlaneAuto":
        return compose(self, other)

    def inverse(self) -> "HalfPlaneAuto":
        return inverse(self)

    def power(self, n: int) -> "HalfPlaneAuto":
        return power(self, n)

    def derivative(self, z):
        return 1.0 / (self.c * np.asarray(z) + self.d) ** 2


Auto1 = Union[DiskAuto, HalfPlaneAuto]


# ---------------------------------------------------------------------------
# Group operations
# ---------------------------------------------------------------------------


def apply(f: Auto1, z):
    """Evaluate f at z (scalar or array).

    Points of the closed domain are accepted so boundary fixed points can be
    evaluated; for half-plane maps ``INF`` is accepted as a scalar.
    """
    if isinstance(f, HalfPlaneAuto) and np.isscalar(z) and _is_inf(complex(z)):
        return INF if abs(f.c) < POLE_TOL else complex(f.a / f.c)
    zz = np.asarray(z, dtype=complex)
    if isinstance(f, DiskAuto):
        if np.any(np.abs(zz) > 1.0 + DOMAIN_SLACK):
            raise DomainError("point outside the closed unit disk")
        den = 1.0 + np.conj(f.center) * zz
        if np.any(np.abs(den) < POLE_TOL):
            raise PoleError("denominator vanishes")
        out = cmath.exp(1j * f.phase) * (zz + f.center) / den
    elif isinstance(f, HalfPlaneAuto):
        if np.any(zz.imag < -DOMAIN_SLACK):
            raise DomainError("point below the real axis")
        den = f.c * zz + f.d
        if np.any(np.abs(den) < POLE_TOL):
            raise PoleError("denominator vanishes")
        out = (f.a * zz + f.b) / den
    else:
        raise TypeError(f"not a one-dimensional automorphism: {f!r}")
    return complex(out) if out.ndim == 0 else out


def compose(f: Auto1, g: Auto1) -> Auto1:
    """f o g, renormalized."""
    if type(f) is not type(g):
        raise ModelMismatch(f"cannot compose {type(f).__name__} with {type(g).__name__}")
    return type(f).from_matrix(f.matrix @ g.matrix)


def inverse(f: Auto1) -> Auto1:
    if isinstance(f, DiskAuto):
        return DiskAuto(-f.phase, -f.center * cmath.exp(1j * f.phase))
    return HalfPlaneAuto(f.d, -f.b, -f.c, f.a)


def power(f: Auto1, n: int) -> Auto1:
    base = f if n >= 0 else inverse(f)
    m = np.linalg.matrix_power(base.matrix, abs(int(n)))
    return type(f).from_matrix(m)


def is_identity(f: Auto1, eps: float = CLASSIFY_EPS) -> bool:
    return projective_distance(f.matrix, np.eye(2)) < eps


# ---------------------------------------------------------------------------
# Cayley transport
# ---------------------------------------------------------------------------


def cayley(z):
    """Disk -> upper half-plane, C(z) = i(1 - z)/(1 + z)."""
    if np.isscalar(z) and abs(1.0 + complex(z)) < POLE_TOL:
        raise PoleError("Cayley map has a pole at z = -1")
    zz = np.asarray(z, dtype=complex)
    if np.any(np.abs(1.0 + zz) < POLE_TOL):
        raise PoleError("Cayley map has a pole at z = -1")
    out = 1j * (1.0 - zz) / (1.0 + zz)
    return complex(out) if out.ndim == 0 else out


def cayley_inverse(w):
    """Upper half-plane (with INF) -> disk."""
    if np.isscalar(w) and _is_inf(complex(w)):
        return complex(-1.0)
    ww = np.asarray(w, dtype=complex)
    if np.any(np.abs(1j + ww) < POLE_TOL):
        raise PoleError("inverse Cayley map has a pole at w = -i")
    out = (1j - ww) / (1j + ww)
    return complex(out) if out.ndim == 0 else out


def cayley_transport(f: Auto1) -> Auto1:
    """Conjugate by the Cayley map: DiskAuto -> HalfPlaneAuto and back."""
    if isinstance(f, DiskAuto):
        return HalfPlaneAuto.from_matrix(_C @ f.matrix @ _C_INV)
    if isinstance(f, HalfPlaneAuto):
        return DiskAuto.from_matrix(_C_INV @ f.matrix @ _C)
    raise TypeError(f"not a one-dimensional automorphism: {f!r}")


def to_halfplane(f: Auto1) -> HalfPlaneAuto:
    return f if isinstance(f, HalfPlaneAuto) else cayley_transport(f)


def to_disk(f: Auto1) -> DiskAuto:
    return f if isinstance(f, DiskAuto) else cayley_transport(f)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    tag = "identity"


@dataclass(frozen=True)
class Elliptic:
    fixed_point: complex
    angle: float
    tag = "elliptic"


@dataclass(frozen=True)
class Parabolic:
    fixed_point: complex
    sign: int
    tag = "parabolic"


@dataclass(frozen=True)
class Hyperbolic:
    attracting: complex
    repelling: complex
    length: float
    r: float
    tag = "hyperbolic"

    def __post_init__(self):
        if not self.length > 0 or not 0.0 < self.r < 1.0:
            raise ValueError("hyperbolic class needs length > 0 and r in (0, 1)")


ConjugacyClass = Union[Identity, Elliptic, Parabolic, Hyperbolic]


def _roots_disk(f: DiskAuto, kind: str) -> list:
    m = f.matrix
    a, b = m[0, 0], m[0, 1]
    ia = a.imag
    if kind == "parabolic":
        return [complex(1j * ia / np.conj(b))]
    if kind == "hyperbolic":
        s = math.sqrt(max(abs(b) ** 2 - ia ** 2, 0.0))
        return [complex((1j * ia + s) / np.conj(b)), complex((1j * ia - s) / np.conj(b))]
    # elliptic: keep the root inside the disk
    if abs(b) < 1e-15:
        return [0j]
    s = math.sqrt(max(ia ** 2 - abs(b) ** 2, 0.0))
    cands = [complex(1j * (ia + s) / np.conj(b)), complex(1j * (ia - s) / np.conj(b))]
    return [min(cands, key=abs)]


def _roots_halfplane(f: HalfPlaneAuto, kind: str) -> list:
    a, b, c, d = f.a, f.b, f.c, f.d
    if abs(c) < 1e-15:
        if kind == "parabolic":
            return [INF]
        return [INF, complex(b / (d - a))]
    if kind == "parabolic":
        return [complex((a - d) / (2 * c))]
    disc = (a + d) ** 2 - 4.0
    if kind == "hyperbolic":
        s = math.sqrt(max(disc, 0.0))
        return [complex((a - d + s) / (2 * c)), complex((a - d - s) / (2 * c))]
    s = math.sqrt(max(-disc, 0.0))
    root = complex(a - d, s) / (2 * c)
    return [root if root.imag > 0 else root.conjugate()]


def _derivative_at(f: Auto1, p: complex) -> complex:
    if _is_inf(p):
        # chart u = 1/z at infinity
        return complex(f.d / f.a)
    return complex(f.derivative(p))


def _parabolic_sign(f: Auto1) -> int:
    h = to_halfplane(f)
    m = h.matrix.real
    if np.trace(m) < 0:
        m = -m
    n = m - np.eye(2)
    return 1 if n[0, 1] - n[1, 0] > 0 else -1


def classify(f: Auto1, eps: float = CLASSIFY_EPS) -> ConjugacyClass:
    """Conjugacy type from the trace of the normalized matrix.

    Parabolic signs refer to the half-plane picture (conjugate to z + sign),
    reached through the Cayley map for disk maps.
    """
    if is_identity(f, eps):
        return Identity()
    t = abs(f.trace)
    if t < 2.0 - eps:
        (p,) = _fixed_roots(f, "elliptic")
        angle = cmath.phase(_derivative_at(f, p)) % TWO_PI
        return Elliptic(p, angle)
    if t <= 2.0 + eps:
        (p,) = _fixed_roots(f, "parabolic")
        return Parabolic(p, _parabolic_sign(f))
    p1, p2 = _fixed_roots(f, "hyperbolic")
    if abs(_derivative_at(f, p1)) > 1.0:
        p1, p2 = p2, p1
    r = math.sqrt((t - 2.0) * (t + 2.0)) / t
    return Hyperbolic(p1, p2, math.atanh(r), r)


def _fixed_roots(f: Auto1, kind: str) -> list:
    return _roots_disk(f, kind) if isinstance(f, DiskAuto) else _roots_halfplane(f, kind)


def _sort_key(p: complex):
    return (math.inf, 0.0) if _is_inf(p) else (p.real, p.imag)


def fixed_points(f: Auto1, eps: float = CLASSIFY_EPS) -> list[tuple[complex, str]]:
    """Fixed points in the closed domain with 'interior'/'boundary' tags."""
    cls = classify(f, eps)
    if cls.tag == "identity":
        raise IdentityInput("the identity fixes every point")
    if cls.tag == "elliptic":
        return [(cls.fixed_point, "interior")]
    if cls.tag == "parabolic":
        return [(cls.fixed_point, "boundary")]
    pts = sorted([cls.attracting, cls.repelling], key=_sort_key)
    return [(p, "boundary") for p in pts]


class Multiplier(NamedTuple):
    derivative: complex
    eigenvalues: tuple


def multiplier(f: Auto1, fixed_point: complex, tol: float = FIXED_TOL) -> Multiplier:
    """Derivative at a fixed point, plus the eigenvalue pair of the coefficient matrix.

    The matrix is scaled to trace 2 whenever |trace| >= 2, which turns the
    normal form (z + r)/(1 + rz) into [[1, r], [r, 1]] with eigenvalues 1 -+ r.
    Eigenvalues are returned in increasing modulus.
    """
    p = complex(fixed_point)
    image = apply(f, p)
    if _is_inf(p) or _is_inf(image):
        if not (_is_inf(p) and _is_inf(image)):
            raise NotFixed(f"{p} is not fixed")
    elif abs(image - p) > tol:
        raise NotFixed(f"|f(p) - p| = {abs(image - p):.3g}")
    m = _sl_normalize(f.matrix)
    tr = np.trace(m)
    if abs(tr) >= 2.0 - CLASSIFY_EPS:
        m = m * (2.0 / tr)
    ev = np.linalg.eigvals(m)
    ev = sorted((complex(e) for e in ev), key=abs)
    if all(abs(e.imag) < 1e-12 for e in ev):
        ev = [e.real for e in ev]
    return Multiplier(_derivative_at(f, p), tuple(ev))


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------


def _halfplane_sending(zero_to: complex, inf_to: complex) -> HalfPlaneAuto:
    """A half-plane automorphism G with G(0) = zero_to and G(inf) = inf_to (real or INF)."""
    if _is_inf(inf_to):
        return HalfPlaneAuto.translation(zero_to.real)
    if _is_inf(zero_to):
        return HalfPlaneAuto(inf_to.real, -1.0, 1.0, 0.0)
    xa, xr = zero_to.real, inf_to.real
    s = math.copysign(1.0, xr - xa)
    return HalfPlaneAuto.from_coefficients(xr, xa * s, 1.0, s)


def _disk_sending(a: complex, b: complex) -> DiskAuto:
    """A disk automorphism with 1 -> a and -1 -> b (a != b on the unit circle).

    Built as K^{-1} o (w -> w + K(a)) o C with K(z) = i(b + z)/(b - z), the Cayley
    map that sends b to infinity; this avoids the pole of C near -1.
    """
    k_inv = np.array([[b, -1j * b], [1.0, 1j]])
    x = (1j * (b + a) / (b - a)).real
    return DiskAuto.from_matrix(k_inv @ np.array([[1.0, x], [0.0, 1.0]]) @ _C)


def hyperbolic_normalize(f: Auto1) -> tuple[float, Auto1]:
    """Return (r, g) with g^{-1} o f o g equal to the normal form (z + r)/(1 + rz).

    For half-plane input the normal form is its Cayley image z -> (1-r)/(1+r) z
    and g is a half-plane map.
    """
    if isinstance(f, DiskAuto):
        cls = classify(f)
        if cls.tag != "hyperbolic":
            raise WrongClass(f"expected a hyperbolic automorphism, got {cls.tag}")
        return cls.r, _disk_sending(cls.attracting, cls.repelling)
    cls = classify(f)
    if cls.tag != "hyperbolic":
        raise WrongClass(f"expected a hyperbolic automorphism, got {cls.tag}")
    return cls.r, _halfplane_sending(cls.attracting, cls.repelling)


def parabolic_normalize(f: Auto1) -> tuple[int, HalfPlaneAuto]:
    """Return (sign, g) with g^{-1} o F o g = z + sign, F the half-plane picture of f."""
    h = to_halfplane(f)
    cls = classify(h)
    if cls.tag != "parabolic":
        raise WrongClass(f"expected a parabolic automorphism, got {cls.tag}")
    x = cls.fixed_point
    g1 = HalfPlaneAuto.identity() if _is_inf(x) else HalfPlaneAuto(x.real, -1.0, 1.0, 0.0)
    f1 = compose(inverse(g1), compose(h, g1))
    m = f1.matrix.real
    t = m[0, 1] / m[1, 1]
    g = compose(g1, HalfPlaneAuto.dilation(abs(t)))
    return (1 if t > 0 else -1), g


def translation_to(z: complex) -> DiskAuto:
    """The disk automorphism u -> (u + z)/(1 + conj(z) u), sending 0 to z."""
    return DiskAuto(0.0, complex(z))


def geodesic_aligner(z: complex, w: complex) -> DiskAuto:
    """Disk automorphism psi with psi(0) = z and psi(d_M(z, w)) = w.

    psi carries the diameter (-1, 1) onto the geodesic through z and w.
    """
    z, w = complex(z), complex(w)
    if abs(z - w) < 1e-14:
        raise CoincidentPoints("z and w coincide")
    u = (w - z) / (1.0 - z.conjugate() * w)
    beta = cmath.phase(u)
    return DiskAuto(beta, z * cmath.exp(-1j * beta))
