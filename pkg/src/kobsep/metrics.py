"""Invariant metrics and distances on the disk, half-plane, bidisk, ball and Siegel slices.

Normalization: the Poincare metric is |v|/(1 - |z|^2), so d(0, t) = artanh t on
the disk and the half-plane density is |dw|/(2 Im w).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


def _as_complex(z) -> complex:
    return complex(z)


def _check_disk(*zs):
    for z in zs:
        if not abs(z) < 1.0:
            raise DomainError(f"{z} is not in the unit disk")


def _check_halfplane(*ws):
    for w in ws:
        if not complex(w).imag > 0:
            raise DomainError(f"{w} is not in the upper half-plane")


def _pair(p) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    if p.shape != (2,):
        raise DomainError(f"expected a point of C^2, got shape {p.shape}")
    return p


def poincare_metric(z, v) -> float:
    z = _as_complex(z)
    _check_disk(z)
    return abs(v) / (1.0 - abs(z) ** 2)


def mobius_distance(z, w) -> float:
    """|z - w| / |1 - conj(w) z|, a number in [0, 1)."""
    z, w = _as_complex(z), _as_complex(w)
    _check_disk(z, w)
    return abs(z - w) / abs(1.0 - w.conjugate() * z)


def disk_distance(z, w) -> float:
    return math.atanh(mobius_distance(z, w))


def halfplane_mobius_distance(z, w) -> float:
    z, w = _as_complex(z), _as_complex(w)
    _check_halfplane(z, w)
    return abs(z - w) / abs(z - w.conjugate())


def halfplane_distance(z, w) -> float:
    return math.atanh(halfplane_mobius_distance(z, w))


def bidisk_metric(p, v) -> float:
    p, v = _pair(p), _pair(v)
    return max(poincare_metric(p[0], v[0]), poincare_metric(p[1], v[1]))


def bidisk_distance(p, q) -> float:
    p, q = _pair(p), _pair(q)
    return max(disk_distance(p[0], q[0]), disk_distance(p[1], q[1]))


def _check_ball(*ps):
    for p in ps:
        if not np.vdot(p, p).real < 1.0:
            raise DomainError(f"{p} is not in the unit ball")


def ball_metric(p, v) -> float:
    """Kobayashi metric of the unit ball, equal to |v| at the origin."""
    p, v = _pair(p), _pair(v)
    _check_ball(p)
    s = 1.0 - np.vdot(p, p).real
    pv = np.vdot(p, v)  # <v, p>
    return math.sqrt(np.vdot(v, v).real / s + abs(pv) ** 2 / s ** 2)


def ball_distance(p, q) -> float:
    p, q = _pair(p), _pair(q)
    _check_ball(p, q)
    num = (1.0 - np.vdot(p, p).real) * (1.0 - np.vdot(q, q).real)
    den = abs(1.0 - np.vdot(q, p)) ** 2
    t = 1.0 - num / den
    return math.atanh(math.sqrt(max(t, 0.0)))


def siegel_slice_distance(w1, w2) -> float:
    """Distance in the slice {0} x {Im w > 0} of the Siegel domain (half-plane metric)."""
    return halfplane_distance(w1, w2)


def ds_disk_distance(s: float, z1, z2) -> float:
    """Distance inside the slice disk D_s = {(z, is) : |z|^2 < s}."""
    if not s > 0:
        raise DomainError("s must be positive")
    z1, z2 = _as_complex(z1), _as_complex(z2)
    for z in (z1, z2):
        if not abs(z) ** 2 < s:
            raise DomainError(f"{z} is not in the disk of radius sqrt({s})")
    rt = math.sqrt(s)
    return disk_distance(z1 / rt, z2 / rt)


def parabolic_escape_bound(kind: str, s: float) -> float:
    """Upper bound for d_K(a_s, phi(a_s)) along the explicit paths for each parabolic type.

    heisenberg: a_s = (0, is), phi(a_s) = (0, is + 1); horizontal segment in the slice.
    shear: a_s = (i, is), phi(a_s) = (0, i(s - 1)); vertical segment in the slice
    followed by the radial segment in D_s.
    """
    if not s > 1:
        raise DomainError("s must exceed 1")
    if kind == "heisenberg":
        return 1.0 / (2.0 * s)
    if kind == "shear":
        return 0.5 * math.log(s / (s - 1.0)) + math.atanh(1.0 / math.sqrt(s))
    raise ValueError(f"unknown parabolic kind {kind!r}")
