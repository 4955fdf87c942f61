"""Finitely generated groups of automorphisms: words, orbits, displacements, annulus moduli."""
from __future__ import annotations

import builtins
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import metrics
from . import moebius1d as m1
from .autos2d import BidiskAuto, ProjAuto2, cayley2_inverse, classify2
from .errors import BudgetExceeded, DomainError, RangeError, TargetTooSmall, WrongClass

MAX_WORD_LENGTH = 16
DEFAULT_MAX_WORDS = 200_000
DEDUP_TOL = 1e-9
KINDS = ("disk", "bidisk", "ball", "siegel")


# ---------------------------------------------------------------------------
# Per-kind algebra
# ---------------------------------------------------------------------------


def _kind_of(g) -> str:
    if isinstance(g, (m1.DiskAuto, m1.HalfPlaneAuto)):
        return "disk"
    if isinstance(g, BidiskAuto):
        return "bidisk"
    if isinstance(g, ProjAuto2):
        return g.domain
    raise TypeError(f"unsupported automorphism {type(g).__name__}")


def _identity_like(g):
    if isinstance(g, m1.DiskAuto):
        return m1.DiskAuto.identity()
    if isinstance(g, m1.HalfPlaneAuto):
        return m1.HalfPlaneAuto.identity()
    if isinstance(g, BidiskAuto):
        return BidiskAuto.identity()
    return ProjAuto2.identity(g.domain)


def _key(g) -> np.ndarray:
    """Projectively normalized coefficient vector used for deduplication."""
    if isinstance(g, BidiskAuto):
        return np.concatenate([m1.projective_normalize(g.first.matrix).ravel(),
                               m1.projective_normalize(g.second.matrix).ravel()])
    return m1.projective_normalize(np.asarray(g.matrix, dtype=complex)).ravel()


def is_trivial(g, eps: float = m1.CLASSIFY_EPS) -> bool:
    if isinstance(g, BidiskAuto):
        return m1.is_identity(g.first, eps) and m1.is_identity(g.second, eps)
    if isinstance(g, ProjAuto2):
        return m1.projective_distance(g.matrix, np.eye(3)) < eps
    return m1.is_identity(g, eps)


def is_elliptic(g) -> bool:
    """True for a nontrivial element with a fixed point inside the domain."""
    if is_trivial(g):
        return False
    if isinstance(g, BidiskAuto):
        tags = {m1.classify(g.first).tag, m1.classify(g.second).tag}
        return tags <= {"elliptic", "identity"}
    if isinstance(g, ProjAuto2):
        return classify2(g) == "elliptic"
    return m1.classify(g).tag == "elliptic"


def ambient_distance(kind: str, x, y, model: str = "disk") -> float:
    """Kobayashi distance in the ambient domain of a presentation."""
    if kind == "disk":
        return metrics.halfplane_distance(x, y) if model == "halfplane" else metrics.disk_distance(x, y)
    if kind == "bidisk":
        return metrics.bidisk_distance(x, y)
    if kind == "ball":
        return metrics.ball_distance(x, y)
    if kind == "siegel":
        return metrics.ball_distance(cayley2_inverse(x), cayley2_inverse(y))
    raise DomainError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Presentations and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    """Freely reduced word as (generator index, nonzero exponent) pairs, read left to right."""

    letters: tuple = ()

    def __post_init__(self):
        letters = tuple((int(i), int(e)) for i, e in self.letters)
        for (i, e), nxt in zip(letters, letters[1:] + ((None, None),)):
            if e == 0:
                raise ValueError("exponents must be nonzero")
            if nxt[0] == i:
                raise ValueError("adjacent letters must use distinct generators")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def from_letters(cls, seq: Sequence[tuple[int, int]]) -> "Word":
        """Freely reduce a sequence of (index, exponent) pairs."""
        out: list[list[int]] = []
        for i, e in seq:
            if e == 0:
                continue
            if out and out[-1][0] == i:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([i, e])
        return cls(tuple(map(tuple, out)))

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def is_empty(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.letters)))

    def exponent_sum(self) -> int:
        return sum(e for _, e in self.letters)

    def format(self, labels: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "id"
        name = (lambda i: labels[i]) if labels else (lambda i: f"g{i}")
        return " ".join(name(i) if e == 1 else f"{name(i)}^{e}" for i, e in self.letters)

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class Presentation:
    """Group generated by a list of automorphisms of one ambient domain."""

    generators: tuple
    labels: tuple = ()
    kind: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a presentation needs at least one generator")
        kinds = {_kind_of(g) for g in gens}
        if len(kinds) != 1:
            raise DomainError(f"generators mix ambient kinds {sorted(kinds)}")
        kind = kinds.pop()
        if self.kind and self.kind != kind:
            raise DomainError(f"declared kind {self.kind!r} but generators act on {kind!r}")
        if kind == "disk" and len({type(g) for g in gens}) != 1:
            raise DomainError("disk generators must all use the same model")
        for g in gens:
            if is_trivial(g):
                raise DomainError("generators must not be the identity")
        labels = tuple(self.labels) or tuple(f"g{i}" for i in range(len(gens)))
        if len(labels) != len(gens):
            raise ValueError("one label per generator")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def cyclic(cls, g, label: str = "g") -> "Presentation":
        return cls((g,), (label,))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def model(self) -> str:
        return "halfplane" if isinstance(self.generators[0], m1.HalfPlaneAuto) else "disk"

    def identity(self):
        return _identity_like(self.generators[0])

    def evaluate(self, word: Word):
        out = self.identity()
        for i, e in word.letters:
            out = out @ self.generators[i].power(e)
        return out

    def distance(self, x, y) -> float:
        return ambient_distance(self.kind, x, y, self.model)

    def apply(self, g, x):
        return g(x)

    def is_cyclic_hyperbolic_1d(self) -> bool:
        return self.kind == "disk" and self.rank == 1 and m1.classify(self.generators[0]).tag == "hyperbolic"


@dataclass
class Element:
    word: Word
    auto: Any


def _letters_from_sequence(seq: list[tuple[int, int]]) -> Word:
    return Word.from_letters(seq)


def enumerate_words(G: Presentation, max_len: int, max_words: int = DEFAULT_MAX_WORDS,
                    dedup: bool = True) -> list[Element]:
    """All freely reduced words of length <= max_len, with automorphisms.

    Elements whose projective coefficient vectors agree to 1e-9 are merged and the
    shortest word is kept.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    if max_len > MAX_WORD_LENGTH:
        raise BudgetExceeded(f"max_len {max_len} exceeds the guard {MAX_WORD_LENGTH}")
    k = G.rank
    total = 1 + sum(2 * k * (2 * k - 1) ** (n - 1) for n in range(1, max_len + 1))
    if total > max_words:
        raise BudgetExceeded(f"{total} words exceed the budget {max_words}")

    letters = [(i, s) for i in range(k) for s in (1, -1)]
    gens = {(i, s): (G.generators[i] if s == 1 else G.generators[i].inverse()) for i, s in letters}
    out = [Element(Word(), G.identity())]
    frontier = [([], None, G.identity())]
    for _ in range(max_len):
        nxt = []
        for seq, last, auto in frontier:
            for letter in letters:
                if last is not None and letter == (last[0], -last[1]):
                    continue
                new_seq = seq + [letter]
                new_auto = auto @ gens[letter]
                nxt.append((new_seq, letter, new_auto))
                out.append(Element(_letters_from_sequence(new_seq), new_auto))
        frontier = nxt
    return dedupe(out) if dedup else out


def dedupe(elements: list[Element], tol: float = DEDUP_TOL) -> list[Element]:
    """Merge elements with equal projective matrices; earlier entries win."""
    if len(elements) < 2:
        return list(elements)
    keys = np.array([_key(e.auto) for e in elements])
    rng = np.random.default_rng(12345)
    u = rng.standard_normal(keys.shape[1]) + 1j * rng.standard_normal(keys.shape[1])
    u /= np.linalg.norm(u)
    proj = (keys @ u.conj()).real
    order = np.argsort(proj, kind="stable")
    parent = list(range(len(elements)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a_pos, i in builtins.enumerate(order):
        for j in order[a_pos + 1:]:
            if proj[j] - proj[i] > tol:
                break
            if np.linalg.norm(keys[i] - keys[j]) < tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    return [e for i, e in builtins.enumerate(elements) if find(i) == i]


# ---------------------------------------------------------------------------
# Orbits and displacement
# ---------------------------------------------------------------------------


@dataclass
class OrbitResult:
    word: Word
    distance: float
    bound: int
    certified_exact: bool
    element: Any = field(default=None, repr=False)


def _cyclic_walk(G: Presentation, x, y, stop_after: int = 3, limit: int = 10_000) -> OrbitResult:
    """Walk n = 0, +-1, +-2, ... and stop once d(x, g^n y) has increased stop_after times in a row.

    n -> d(x, g^n y) is unimodal for a hyperbolic g (cosh of twice the distance is
    A e^{-nl} + B e^{nl} + C with A, B > 0), so this minimum is exact.
    """
    g = G.generators[0]
    best_n, best = 0, G.distance(x, y)
    bound = 0
    for step in (g, g.inverse()):
        sign = 1 if step is g else -1
        pt, prev, rises, n = y, best, 0, 0
        while rises < stop_after:
            n += 1
            if n > limit:
                raise BudgetExceeded("orbit walk did not turn around")
            pt = step(pt)
            d = G.distance(x, pt)
            if d < best - 1e-15 or (abs(d - best) <= 1e-15 and abs(sign * n) < abs(best_n)):
                best, best_n = d, sign * n
            rises = rises + 1 if d > prev else 0
            prev = d
        bound = max(bound, n)
    word = Word(((0, best_n),)) if best_n else Word()
    return OrbitResult(word, best, bound, True, G.evaluate(word))


def orbit_min_distance(G: Presentation, x, y, max_len: int = 8,
                       max_words: int = DEFAULT_MAX_WORDS) -> OrbitResult:
    """min over group elements of d(x, g y); exact for cyclic hyperbolic disk groups."""
    if G.is_cyclic_hyperbolic_1d():
        return _cyclic_walk(G, x, y)
    best = None
    for el in enumerate_words(G, max_len, max_words):
        d = G.distance(x, el.auto(y))
        if best is None or d < best[0] - 1e-15:
            best = (d, el)
    d, el = best
    return OrbitResult(el.word, d, max_len, False, el.auto)


def min_displacement(G: Presentation, x, max_len: int = 8,
                     max_words: int = DEFAULT_MAX_WORDS) -> OrbitResult:
    """Shortest nontrivial loop through the image of x: min over g != id of d(x, g x)."""
    if G.is_cyclic_hyperbolic_1d():
        # n -> d(x, g^n x) is unimodal with minimum at n = 0 and symmetric in n
        g = G.generators[0]
        d = G.distance(x, g(x))
        return OrbitResult(Word(((0, 1),)), d, 1, True, g)
    best = None
    for el in enumerate_words(G, max_len, max_words):
        if is_trivial(el.auto):
            continue
        d = G.distance(x, el.auto(x))
        if best is None or d < best[0] - 1e-15:
            best = (d, el)
    if best is None:
        raise BudgetExceeded("no nontrivial element within the word budget")
    d, el = best
    return OrbitResult(el.word, d, max_len, False, el.auto)


@dataclass
class DiscontinuityReport:
    basepoints: list
    min_displacement: list
    flags: list  # (word string, reason)
    max_len: int

    @property
    def clean(self) -> bool:
        return not self.flags


def proper_discontinuity_scan(G: Presentation, basepoints, max_len: int = 6,
                              max_words: int = DEFAULT_MAX_WORDS,
                              threshold: float = 1e-6) -> DiscontinuityReport:
    """Flag enumerated elements that are elliptic or move some basepoint by < threshold."""
    elements = [el for el in enumerate_words(G, max_len, max_words) if not is_trivial(el.auto)]
    flags = []
    for el in elements:
        if is_elliptic(el.auto):
            flags.append((el.word.format(G.labels), "elliptic"))
    mins = []
    for x in basepoints:
        ds = [G.distance(x, el.auto(x)) for el in elements]
        i = int(np.argmin(ds)) if ds else -1
        mins.append(ds[i] if ds else math.inf)
        if ds and ds[i] < threshold:
            flags.append((elements[i].word.format(G.labels), f"displacement {ds[i]:.3g} at {x}"))
    return DiscontinuityReport(list(basepoints), mins, flags, max_len)


# ---------------------------------------------------------------------------
# Annuli
# ---------------------------------------------------------------------------


def annulus_modulus(phi: m1.Auto1) -> float:
    """M = (1/2) log((1 + r)/(1 - r)) = artanh r for the hyperbolic normal form parameter r."""
    if m1.classify(phi).tag != "hyperbolic":
        raise WrongClass("annulus modulus needs a hyperbolic generator")
    r, _ = m1.hyperbolic_normalize(phi)
    return math.atanh(r)


def _check_tau_args(r, theta):
    if not 0.0 < r < 1.0:
        raise RangeError("r must lie in (0, 1)")
    if abs(math.sin(theta)) < 1e-15:
        raise RangeError("theta must not be a multiple of pi")


def tau(s, r: float, theta: float):
    """Squared Moebius displacement d_M(s e^{i theta}, phi_r(s e^{i theta}))^2 in closed form."""
    _check_tau_args(r, theta)
    s = np.asarray(s, dtype=float)
    if np.any((s < 0) | (s >= 1)):
        raise RangeError("s must lie in [0, 1)")
    s2 = s * s
    sin2 = math.sin(theta) ** 2
    out = r * r * (1.0 + 4.0 * s2 * (1.0 - r * r) * sin2 / ((1.0 - s2) ** 2 + 4.0 * r * r * s2 * sin2))
    return float(out) if out.ndim == 0 else out


def eta(s, r: float, theta: float):
    """Kobayashi displacement artanh(sqrt(tau))."""
    return np.arctanh(np.sqrt(tau(s, r, theta))) if np.ndim(s) else math.atanh(math.sqrt(tau(s, r, theta)))


def eta_solve(target: float, r: float, theta: float, tol: float = 1e-12) -> float:
    """The unique s in [0, 1) with eta(s) = target, by bisection.

    Bisection runs until the bracket stops shrinking, so the result is accurate to
    rounding; ``tol`` is the acceptance threshold on |eta(s) - target|.
    """
    _check_tau_args(r, theta)
    lo_val = math.atanh(r)
    if target < lo_val - 1e-15:
        raise TargetTooSmall(f"target {target} is below the minimum displacement {lo_val}")
    if target <= lo_val:
        return 0.0
    lo, hi = 0.0, 0.5
    while eta(hi, r, theta) < target:
        lo, hi = hi, 0.5 * (1.0 + hi)
        if hi >= 1.0:
            raise RangeError("target displacement not reachable in double precision")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if eta(mid, r, theta) < target:
            lo = mid
        else:
            hi = mid
    s = min((lo, hi), key=lambda x: abs(eta(x, r, theta) - target))
    if abs(eta(s, r, theta) - target) >= tol:
        raise RangeError(f"bisection stalled at |eta - target| = {abs(eta(s, r, theta) - target):.3g}")
    return s


def eta_solve_closed_form(target: float, r: float, theta: float) -> float:
    """Solve (r^2 - t)(1 - u)^2 + 4 r^2 sin^2(theta)(1 - t) u = 0 for u = s^2, t = tanh^2(target)."""
    t = math.tanh(target) ** 2
    A = r * r - t
    K = 4.0 * r * r * math.sin(theta) ** 2 * (1.0 - t)
    if A == 0:
        return 0.0
    # A u^2 + (K - 2A) u + A = 0; the roots multiply to 1, take the one in [0, 1]
    B = K - 2.0 * A
    disc = B * B - 4.0 * A * A
    q = -0.5 * (B + math.copysign(math.sqrt(max(disc, 0.0)), B))
    roots = [q / A, A / q]
    u = min(x for x in roots if x >= 0)
    return math.sqrt(u)


enumerate = enumerate_words  # noqa: A001
