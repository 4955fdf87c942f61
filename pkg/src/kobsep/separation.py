"""Separation certificates and coincidence-side injectivity scans.

A certificate records an extremal disc, two distinct points p, q on it, a group
word carrying p to q, and an isolation margin for the self-intersection of the
projected disc.  Every field can be re-checked from the stored data alone.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import discs as D
from . import moebius1d as m1
from .autos2d import (
    BidiskAuto,
    ProjAuto2,
    ball_hyperbolic_params,
    classify2,
    in_ball,
    power2,
    siegel_margin,
    siegel_parabolic_heisenberg,
)
from .errors import (
    BudgetExceeded,
    DegenerateDirection,
    DegenerateInput,
    DegenerateRotation,
    DomainError,
    NotOnDisc,
    WrongClass,
)
from .groups import Presentation, Word, enumerate_words, eta_solve, is_trivial

RESIDUAL_TOL = 1e-10
MARGIN_TOL = 1e-8
WINDING_RADIUS = 1e-3

BALL_ASSUMPTIONS = (
    "complex lines through the ball are its unique extremal discs",
)
SIEGEL_ASSUMPTIONS = (
    "the geodesics z + a w + b = 0 are unique complex geodesics of H_2 (taken as given)",
    "the extremal disc is proper and embedded (taken as given)",
)
BIDISK_ASSUMPTIONS = (
    "the diagonal is the unique extremal disc through its points in the diagonal direction",
    "both metrics are invariant under the conjugating biholomorphism (factorwise disk automorphisms)",
)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class SeparationCertificate:
    ambient: str
    presentation: Presentation
    disc: Any
    p: np.ndarray
    q: np.ndarray
    word: Word
    residual: float
    margin: float
    conjugators: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    assumptions: tuple = ()

    @property
    def element(self):
        return self.presentation.evaluate(self.word)

    def checks(self) -> dict:
        """Recompute every certificate quantity from the stored data."""
        p, q = np.asarray(self.p, dtype=complex), np.asarray(self.q, dtype=complex)
        g = self.element
        out = {
            "word_residual": float(np.linalg.norm(np.asarray(g(p)) - q)),
            "p_on_disc": float(self.disc.residual(p)),
            "q_on_disc": float(self.disc.residual(q)),
            "separation": float(np.linalg.norm(p - q)),
            "p_inside": _inside(self.ambient, p),
            "q_inside": _inside(self.ambient, q),
            "unique_extremal": _unique_extremal(self.disc),
        }
        try:
            out["margin"] = isolation_margin(self.ambient, self.disc, g, p, q)
        except NotOnDisc:
            # q is off the disc or its image; already reported through the residuals
            out["margin"] = 0.0
        return out

    def failures(self, residual_tol: float = RESIDUAL_TOL, margin_tol: float = MARGIN_TOL) -> list[str]:
        c = self.checks()
        bad = []
        for key in ("word_residual", "p_on_disc", "q_on_disc"):
            if not c[key] < residual_tol:
                bad.append(f"{key} = {c[key]:.3g}")
        if not c["separation"] > 1e-12:
            bad.append("p and q coincide")
        if not c["p_inside"] or not c["q_inside"]:
            bad.append("witness outside the domain")
        if not c["unique_extremal"]:
            bad.append("disc is not a unique-extremal variant")
        if not c["margin"] > margin_tol:
            bad.append(f"isolation margin {c['margin']:.3g}")
        return bad

    def validate(self, residual_tol: float = RESIDUAL_TOL, margin_tol: float = MARGIN_TOL) -> bool:
        return not self.failures(residual_tol, margin_tol)


def _inside(ambient: str, p: np.ndarray) -> bool:
    if ambient == "ball":
        return bool(in_ball(p))
    if ambient == "siegel":
        return bool(siegel_margin(p) > 0)
    return bool(np.all(np.abs(p) < 1.0))


def _unique_extremal(disc) -> bool:
    if isinstance(disc, D.BidiskGraph):
        return disc.is_unique_extremal
    return isinstance(disc, (D.BallLine, D.HorizontalLine, D.SiegelGeodesic))


def isolation_margin(ambient: str, disc, g, p, q) -> float:
    """Transversality of the disc and its image under g at q, with a winding fallback for graphs."""
    if ambient == "bidisk":
        g1, g2 = g.first, g.second
        z = complex(np.asarray(p)[0])
        margin = D.transversality(D.BidiskGraph(g1), D.BidiskGraph(g2), (z, g1(z)))
        if margin > MARGIN_TOL:
            return margin
        count, low = D.winding_isolation(lambda u: g1(u) - g2(u), z, WINDING_RADIUS)
        return low if count == 1 else 0.0
    image = D.line_image(g, disc)
    if D.same_locus(image, disc):
        return 0.0
    return D.transversality(disc, image, q)


def _finish(cert: SeparationCertificate) -> SeparationCertificate:
    c = cert.checks()
    cert.residual = max(c["word_residual"], c["p_on_disc"], c["q_on_disc"])
    cert.margin = c["margin"]
    bad = cert.failures()
    if bad:
        raise DegenerateInput("certificate does not validate: " + "; ".join(bad))
    return cert


def certify_ball_hyperbolic(phi: ProjAuto2, budget: int = 500) -> SeparationCertificate:
    """Certificate for a hyperbolic ball automorphism in the normal form (r, theta).

    Searches the first iterate n whose parameters satisfy sqrt(1 - r_n^2) < cos(theta_n)
    and uses the horizontal line L_alpha through the intersection with its image.
    """
    if classify2(phi) != "hyperbolic":
        raise WrongClass("expected a hyperbolic ball automorphism")
    phi = phi.to_domain("ball")
    r, theta = ball_hyperbolic_params(phi)
    ell = math.atanh(r)
    for n in range(1, budget + 1):
        s_n = 1.0 / math.cosh(n * ell)  # sqrt(1 - r_n^2)
        theta_n = (n * theta) % m1.TWO_PI
        if s_n < math.cos(theta_n):
            break
    else:
        raise BudgetExceeded(f"no iterate n <= {budget} satisfies the intersection condition")
    r_n = math.tanh(n * ell)
    z0, inside = D.lalpha_intersection(r_n, theta_n)
    alpha = 0.1
    while not (alpha < s_n and abs(z0) ** 2 < 1.0 - alpha * alpha):
        alpha *= 0.5
        if alpha < 1e-12:
            raise DegenerateInput("no admissible alpha")
    disc = D.HorizontalLine(alpha)
    G = Presentation.cyclic(phi, "phi")
    word = Word(((0, n),))
    q = np.array([z0, alpha], dtype=complex)
    p = np.asarray(power2(phi, -n)(q))
    cert = SeparationCertificate(
        "ball", G, disc, p, q, word, math.nan, math.nan,
        parameters={"r": r, "theta": theta, "n": n, "alpha": alpha, "r_n": r_n, "theta_n": theta_n},
        assumptions=BALL_ASSUMPTIONS,
    )
    return _finish(cert)


def certify_siegel_parabolic(theta: float, a: complex = 1.0, b: Optional[complex] = None) -> SeparationCertificate:
    """Certificate for the rotational parabolic (z, w) -> (e^{i theta} z, w + 1), theta not 0 mod 2 pi.

    q = (z0, w0) lies on G_{a,b} and so does gamma(q); the word gamma^{-1} carries p = gamma(q) to q.
    """
    if abs(cmath.exp(1j * theta) - 1.0) < D.ROTATION_TOL:
        raise DegenerateRotation("theta is a multiple of 2*pi")
    a = complex(a)
    b = D.choose_b(a, theta) if b is None else complex(b)
    z0, w0 = D.siegel_geodesic_intersection(a, b, theta)
    gamma = siegel_parabolic_heisenberg(theta)
    disc = D.SiegelGeodesic(a, b)
    q = np.array([z0, w0], dtype=complex)
    p = np.asarray(gamma(q))
    G = Presentation.cyclic(gamma, "gamma")
    cert = SeparationCertificate(
        "siegel", G, disc, p, q, Word(((0, -1),)), math.nan, math.nan,
        parameters={"theta": theta, "a": a, "b": b, "z0": z0, "w0": w0,
                    "domain_margin": float(siegel_margin(q))},
        assumptions=SIEGEL_ASSUMPTIONS,
    )
    return _finish(cert)


# ---------------------------------------------------------------------------
# Bidisk
# ---------------------------------------------------------------------------


@dataclass
class BidiskNormalization:
    """phi_tilde_j = conjugators[j] o phi_j^{exponents[j]} o conjugators[j]^{-1}."""

    phi1: m1.DiskAuto
    phi2: m1.DiskAuto
    conjugators: tuple
    exponents: tuple
    case: str
    generators: tuple = ()  # conjugated generators c_j o phi_j o c_j^{-1}
    extra: dict = field(default_factory=dict)


def _class(f) -> str:
    tag = m1.classify(f).tag
    if tag in ("identity", "elliptic"):
        raise DegenerateInput(f"factor is {tag}; both factors must be hyperbolic or parabolic")
    return tag


def _align_hyperbolic(r: float, target: float):
    """psi with psi^{-1} o phi_r o psi sending 0 to tanh(target)."""
    s = eta_solve(target, r, math.pi / 2)
    z = 1j * s
    w = m1.DiskAuto.hyperbolic(r)(z)
    return m1.geodesic_aligner(z, w), s


def _hyp_hyp(f1, f2):
    r1, g1 = m1.hyperbolic_normalize(f1)
    r2, g2 = m1.hyperbolic_normalize(f2)
    M1, M2 = math.atanh(r1), math.atanh(r2)
    swap = M1 > M2
    if swap:
        (f1, r1, g1, M1), (f2, r2, g2, M2) = (f2, r2, g2, M2), (f1, r1, g1, M1)
    if M2 - M1 < 1e-6:
        k2, target, case = 2, 2.0 * M2, "hyperbolic-equal"
    else:
        k2, target, case = 1, M2, "hyperbolic-unequal"
    psi, s = _align_hyperbolic(r1, target)
    c1 = psi.inverse() @ g1.inverse()
    c2 = g2.inverse()
    res = [(c1, 1), (c2, k2)]
    if swap:
        res.reverse()
    return res, case, {"s": s, "target": target}


def _hyp_par(fh, fp, hyp_first: bool):
    r1, g1 = m1.hyperbolic_normalize(fh)
    sign, gp = m1.parabolic_normalize(fp)
    y = 0.5 * math.sqrt(1.0 / (r1 * r1) - 1.0)
    z_h = 1j * y
    # d_M(iy, iy + 1) = 1/sqrt(1 + 4y^2) = r1 in the half-plane
    z_d = complex(m1.cayley_inverse(z_h))
    w_d = complex(m1.cayley_inverse(z_h + sign))
    psi = m1.geodesic_aligner(z_d, w_d)
    c1 = g1.inverse()
    c2 = psi.inverse() @ m1.to_disk(gp).inverse()
    res = [(c1, 1), (c2, 1)]
    if not hyp_first:
        res.reverse()
    return res, "hyperbolic-parabolic" if hyp_first else "parabolic-hyperbolic", {"y": y}


# The explicit parabolic pair in the half-plane: z -> z + 1 and psi, which agree at i.
PAIR_PSI = m1.HalfPlaneAuto.from_coefficients(7 / 5, -1 / 5, 4 / 5, 3 / 5)
PAIR_GAMMA = m1.HalfPlaneAuto.from_coefficients(1.0, -2.0, 2.0, 0.0)  # z -> (z - 2)/(2z)
PAIR_SCALE = m1.HalfPlaneAuto.dilation(4 / 5)


def _par_par(f1, f2):
    s1, g1 = m1.parabolic_normalize(f1)
    s2, g2 = m1.parabolic_normalize(f2)
    c1 = g1.inverse()  # c1 F1^{s1} c1^{-1} = z + 1
    c2 = (PAIR_GAMMA @ PAIR_SCALE) @ g2.inverse()  # c2 F2^{-s2} c2^{-1} = psi
    return [(m1.to_disk(c1), s1), (m1.to_disk(c2), -s2)], "parabolic-parabolic", {}


def normalize_bidisk_pair(phi1, phi2) -> BidiskNormalization:
    """Conjugate (and possibly power) the factors so that the new pair agrees at 0 but differs."""
    f1, f2 = m1.to_disk(phi1), m1.to_disk(phi2)
    t1, t2 = _class(f1), _class(f2)
    if t1 == t2 == "hyperbolic":
        res, case, extra = _hyp_hyp(f1, f2)
    elif t1 == "hyperbolic":
        res, case, extra = _hyp_par(f1, f2, True)
    elif t2 == "hyperbolic":
        res, case, extra = _hyp_par(f2, f1, False)
    else:
        res, case, extra = _par_par(f1, f2)
    (c1, k1), (c2, k2) = res
    gen1 = c1 @ f1 @ c1.inverse()
    gen2 = c2 @ f2 @ c2.inverse()
    n1, n2 = gen1.power(k1), gen2.power(k2)
    if abs(n1(0) - n2(0)) > 1e-12:
        raise DegenerateInput(f"normalized pair disagrees at 0 by {abs(n1(0) - n2(0)):.3g}")
    if m1.projective_distance(n1.matrix, n2.matrix) <= 1e-8:
        raise DegenerateInput("normalized pair coincides")
    return BidiskNormalization(n1, n2, (c1, c2), (k1, k2), case, (gen1, gen2), extra)


def certify_bidisk(phi1, phi2) -> SeparationCertificate:
    """Certificate on the diagonal of the bidisk for the group generated by (phi1, id) and (id, phi2)."""
    nb = normalize_bidisk_pair(phi1, phi2)
    roots = D.graph_intersection(nb.phi1, nb.phi2)
    if not roots:
        raise DegenerateInput("normalized graphs do not meet in the disk")
    z = min(roots, key=abs)
    gen1, gen2 = nb.generators
    ident = m1.DiskAuto.identity()
    G = Presentation((BidiskAuto(gen1, ident), BidiskAuto(ident, gen2)), ("a", "b"))
    word = Word(((0, nb.exponents[0]), (1, nb.exponents[1])))
    p = np.array([z, z], dtype=complex)
    q = np.array([nb.phi1(z), nb.phi2(z)], dtype=complex)
    cert = SeparationCertificate(
        "bidisk", G, D.BidiskGraph(), p, q, word, math.nan, math.nan,
        conjugators={"first": nb.conjugators[0], "second": nb.conjugators[1]},
        parameters={"case": nb.case, "exponents": list(nb.exponents), "root": z, **nb.extra},
        assumptions=BIDISK_ASSUMPTIONS,
    )
    return _finish(cert)


# ---------------------------------------------------------------------------
# Coincidence side
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Compact parameter window: a rectangle or a closed disk around ``center``."""

    center: complex
    half_width: float
    half_height: float = 0.0
    shape: str = "rect"

    def grid(self, n: int) -> np.ndarray:
        if self.shape == "disk":
            xs = np.linspace(-self.half_width, self.half_width, n)
            zz = (xs[None, :] + 1j * xs[:, None]).ravel()
            zz = zz[np.abs(zz) <= self.half_width]
            return self.center + zz
        xs = np.linspace(-self.half_width, self.half_width, n)
        ys = np.linspace(-self.half_height, self.half_height, n)
        return (self.center + xs[None, :] + 1j * ys[:, None]).ravel()

    def contains(self, t) -> np.ndarray:
        d = np.asarray(t, dtype=complex) - self.center
        if self.shape == "disk":
            return np.abs(d) <= self.half_width * (1 + 1e-12)
        return (np.abs(d.real) <= self.half_width * (1 + 1e-12)) & (np.abs(d.imag) <= self.half_height * (1 + 1e-12))


def default_region(disc) -> Region:
    if isinstance(disc, D.BidiskGraph):
        return Region(0j, 0.9, shape="disk")
    if isinstance(disc, D.HorizontalLine):
        return Region(0j, math.sqrt(max(0.81 - abs(disc.alpha) ** 2, 0.0)), shape="disk")
    if isinstance(disc, D.BallLine):
        b, d = np.array(disc.base), np.array(disc.direction)
        nd = np.vdot(d, d).real
        tc = -np.vdot(d, b) / nd
        foot2 = np.vdot(b + tc * d, b + tc * d).real
        return Region(complex(tc), math.sqrt(max(0.81 - foot2, 0.0) / nd), shape="disk")
    if isinstance(disc, D.VerticalLine):
        # a strip narrower than one unit translation
        return Region(complex(0.0, abs(disc.b) ** 2 + 1.1), 0.45, 1.0)
    if isinstance(disc, D.SiegelGeodesic):
        a, b = disc.a, disc.b
        # maximizer of Im w - |a w + b|^2
        wc = (1j / (2 * abs(a) ** 2) - b) / a if a != 0 else complex(0, abs(b) ** 2 + 1.1)
        return Region(wc, 0.45, 0.45)
    raise D.VariantError(f"no default region for {type(disc).__name__}")


@dataclass
class Coincidence:
    word: str
    t1: complex
    t2: complex
    residual: float


@dataclass
class CoincidenceReport:
    disc: Any
    grid: int
    word_budget: int
    status: str
    witnesses: list
    region: Region
    points_checked: int
    elements_checked: int
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def injectivity_scan(G: Presentation, disc, grid: int = 32, word_budget: int = 6,
                     region: Optional[Region] = None, tol: float = 1e-9,
                     max_words: int = 200_000, max_witnesses: int = 10) -> CoincidenceReport:
    """Look for grid parameters t1 and t2 in the region with g(disc(t1)) = disc(t2), g != id."""
    if grid < 1:
        raise ValueError("grid must be positive")
    region = region or default_region(disc)
    ts = region.grid(grid)
    ts = ts[disc.contains_domain_point(ts)]
    pts = disc.point(ts)
    elements = [el for el in enumerate_words(G, word_budget, max_words) if not is_trivial(el.auto)]
    witnesses = []
    for el in elements:
        img = np.asarray(el.auto(pts))
        res = np.asarray(disc.residual(img))
        t2 = np.asarray(disc.parameter_of(img))
        hit = (res < tol * (1.0 + np.linalg.norm(img, axis=-1))) & region.contains(t2)
        for k in np.flatnonzero(hit)[: max_witnesses - len(witnesses)]:
            witnesses.append(Coincidence(el.word.format(G.labels), complex(ts[k]), complex(t2[k]), float(res[k])))
        if len(witnesses) >= max_witnesses:
            break
    status = "fail" if witnesses else "pass"
    return CoincidenceReport(disc, grid, word_budget, status, witnesses, region, len(ts), len(elements))


def perturbed_vertical_disc(b: complex, delta: float, zeta0: complex) -> D.SiegelGeodesic:
    """The disc zeta -> (-b + delta (zeta - zeta0), zeta) as a geodesic z + a w + b' = 0."""
    return D.SiegelGeodesic(-delta, complex(b) + delta * complex(zeta0))


def vertical_perturbation(b: complex, delta: float, zeta0: complex, grid: int = 32,
                          word_budget: int = 6, half_width: float = 0.45) -> CoincidenceReport:
    """Injectivity scan of the tilted vertical line under the pure translation (z, w) -> (z, w + 1)."""
    b, zeta0 = complex(b), complex(zeta0)
    if not delta > 0:
        raise DomainError("delta must be positive")
    if not zeta0.imag > abs(b) ** 2:
        raise DomainError("zeta0 must satisfy Im zeta0 > |b|^2")
    disc = perturbed_vertical_disc(b, delta, zeta0)
    G = Presentation.cyclic(siegel_parabolic_heisenberg(0.0), "t")
    height = min(half_width, 0.5 * (zeta0.imag - abs(b) ** 2))
    region = Region(zeta0, half_width, height)
    rep = injectivity_scan(G, disc, grid, word_budget, region)
    ts = region.grid(grid)
    rep.extra["sup_distance_to_vertical"] = float(delta * np.max(np.abs(ts - zeta0)))
    rep.extra["diameter_bound"] = float(delta * 2 * math.hypot(half_width, height))
    return rep


@dataclass
class ExtremalCurve:
    """f(xi) = (m(xi), s(lam xi)) (or with coordinates swapped) through a bidisk point.

    ``left_inverse`` projects to the dominant coordinate and undoes m.
    """

    move: m1.DiskAuto
    other: m1.DiskAuto
    lam: complex
    dominant: int
    scale: complex

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=complex)
        a, b = self.move(xi), self.other(self.lam * xi)
        return np.stack([a, b] if self.dominant == 0 else [b, a], axis=-1)

    def left_inverse(self, p):
        p = np.asarray(p, dtype=complex)
        return self.move.inverse()(p[..., self.dominant])

    def derivative0(self) -> np.ndarray:
        a = complex(self.move.derivative(0))
        b = complex(self.other.derivative(0)) * self.lam
        return np.array([a, b] if self.dominant == 0 else [b, a])

    @property
    def metric_value(self) -> float:
        """Kobayashi length of the direction v: |v| = |scale| |f'(0)| with f extremal."""
        return abs(self.scale)

    def as_disc(self) -> D.BidiskGraph:
        return D.BidiskGraph(self.other, self.lam, self.move.inverse(), transposed=self.dominant == 1)


def bidisk_extremal(point, v) -> ExtremalCurve:
    """Extremal curve through (alpha, beta) in direction v (both components nonzero)."""
    alpha, beta = (complex(x) for x in point)
    v1, v2 = (complex(x) for x in v)
    if abs(alpha) >= 1 or abs(beta) >= 1:
        raise DomainError("point must lie in the bidisk")
    if v1 == 0 or v2 == 0:
        raise DegenerateDirection("direction must have both components nonzero")
    k1, k2 = 1 - abs(alpha) ** 2, 1 - abs(beta) ** 2
    if abs(v1) / k1 >= abs(v2) / k2:
        lam = v2 * k1 / (v1 * k2)
        return ExtremalCurve(m1.translation_to(alpha), m1.translation_to(beta), lam, 0, v1 / k1)
    lam = v1 * k2 / (v2 * k1)
    return ExtremalCurve(m1.translation_to(beta), m1.translation_to(alpha), lam, 1, v2 / k2)
