"""JSON encoding of automorphisms, discs, certificates and reports.

Complex numbers are two-element arrays [re, im]; matrices are row-major nested
lists; reals are rounded to 15 significant digits so output is byte-stable.
``check_certificate`` re-validates a certificate from its JSON form using plain
numpy, without going through the classes that produced it.
"""
from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from . import discs as D
from . import moebius1d as m1
from .autos2d import BidiskAuto, ProjAuto2
from .errors import ParseError
from .groups import Presentation, Word

FORMAT = "kobsep-certificate/1"
DIGITS = 15


def _real(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        return x
    return float(f"{x:.{DIGITS}g}") + 0.0  # drop negative zero


def encode(x: Any) -> Any:
    """Generic encoder for numbers, arrays and the package's value types."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return _real(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_real(x.real), _real(x.imag)]
    if isinstance(x, np.ndarray):
        return [encode(v) for v in x.tolist()] if x.ndim else encode(x.item())
    if isinstance(x, str) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if isinstance(x, (m1.DiskAuto, m1.HalfPlaneAuto, BidiskAuto, ProjAuto2)):
        return encode_auto(x)
    if isinstance(x, Word):
        return [list(l) for l in x.letters]
    if isinstance(x, D.AFFINE + (D.BidiskGraph,)):
        return encode_disc(x)
    raise TypeError(f"cannot encode {type(x).__name__}")


def decode_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if not (isinstance(v, list) and len(v) == 2):
        raise ParseError(f"expected [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def encode_auto(f) -> dict:
    if isinstance(f, m1.DiskAuto):
        return {"kind": "disk", "phase": _real(f.phase), "center": encode(f.center)}
    if isinstance(f, m1.HalfPlaneAuto):
        return {"kind": "halfplane", "coefficients": [_real(c) for c in (f.a, f.b, f.c, f.d)]}
    if isinstance(f, BidiskAuto):
        return {"kind": "bidisk", "first": encode_auto(f.first), "second": encode_auto(f.second)}
    if isinstance(f, ProjAuto2):
        return {"kind": "proj2", "domain": f.domain, "matrix": encode(f.matrix)}
    raise TypeError(f"not an automorphism: {f!r}")


def decode_auto(d: dict):
    try:
        kind = d["kind"]
        if kind == "disk":
            return m1.DiskAuto(float(d["phase"]), decode_complex(d["center"]))
        if kind == "halfplane":
            return m1.HalfPlaneAuto.from_coefficients(*map(float, d["coefficients"]))
        if kind == "bidisk":
            return BidiskAuto(decode_auto(d["first"]), decode_auto(d["second"]))
        if kind == "proj2":
            m = np.array([[decode_complex(v) for v in row] for row in d["matrix"]])
            return ProjAuto2(m, d.get("domain", "ball"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed automorphism: {exc}") from exc
    raise ParseError(f"unknown automorphism kind {kind!r}")


def encode_disc(d) -> dict:
    name = type(d).__name__
    if isinstance(d, D.BallLine):
        return {"variant": name, "base": encode(d.base), "direction": encode(d.direction)}
    if isinstance(d, D.HorizontalLine):
        return {"variant": name, "alpha": encode(d.alpha)}
    if isinstance(d, D.SiegelGeodesic):
        return {"variant": name, "a": encode(d.a), "b": encode(d.b)}
    if isinstance(d, D.VerticalLine):
        return {"variant": name, "b": encode(d.b)}
    if isinstance(d, D.BidiskGraph):
        return {"variant": name, "g": None if d.g is None else encode_auto(d.g), "xi": encode(d.xi),
                "pre": None if d.pre is None else encode_auto(d.pre), "transposed": d.transposed}
    raise TypeError(f"not a disc: {d!r}")


def decode_disc(d: dict):
    try:
        v = d["variant"]
        if v == "BallLine":
            return D.BallLine(tuple(map(decode_complex, d["base"])), tuple(map(decode_complex, d["direction"])))
        if v == "HorizontalLine":
            return D.HorizontalLine(decode_complex(d["alpha"]))
        if v == "SiegelGeodesic":
            return D.SiegelGeodesic(decode_complex(d["a"]), decode_complex(d["b"]))
        if v == "VerticalLine":
            return D.VerticalLine(decode_complex(d["b"]))
        if v == "BidiskGraph":
            g = None if d.get("g") is None else decode_auto(d["g"])
            pre = None if d.get("pre") is None else decode_auto(d["pre"])
            return D.BidiskGraph(g, decode_complex(d["xi"]), pre, bool(d.get("transposed", False)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed disc: {exc}") from exc
    raise ParseError(f"unknown disc variant {v!r}")


def encode_presentation(G: Presentation) -> dict:
    return {"kind": G.kind, "labels": list(G.labels), "generators": [encode_auto(g) for g in G.generators]}


def decode_presentation(d: dict) -> Presentation:
    try:
        return Presentation(tuple(decode_auto(g) for g in d["generators"]), tuple(d["labels"]), d["kind"])
    except KeyError as exc:
        raise ParseError(f"malformed presentation: missing {exc}") from exc


def certificate_to_dict(cert) -> dict:
    return {
        "format": FORMAT,
        "ambient": cert.ambient,
        "presentation": encode_presentation(cert.presentation),
        "disc": encode_disc(cert.disc),
        "p": encode(np.asarray(cert.p)),
        "q": encode(np.asarray(cert.q)),
        "word": encode(cert.word),
        "residual": _real(cert.residual),
        "margin": _real(cert.margin),
        "conjugators": {k: encode_auto(v) for k, v in sorted(cert.conjugators.items())},
        "parameters": encode(dict(sorted(cert.parameters.items()))),
        "assumptions": list(cert.assumptions),
    }


def certificate_from_dict(d: dict):
    from .separation import SeparationCertificate

    if d.get("format") != FORMAT:
        raise ParseError(f"unsupported certificate format {d.get('format')!r}")
    try:
        return SeparationCertificate(
            d["ambient"], decode_presentation(d["presentation"]), decode_disc(d["disc"]),
            np.array([decode_complex(v) for v in d["p"]]), np.array([decode_complex(v) for v in d["q"]]),
            Word(tuple(tuple(l) for l in d["word"])), float(d["residual"]), float(d["margin"]),
            {k: decode_auto(v) for k, v in d.get("conjugators", {}).items()},
            dict(d.get("parameters", {})), tuple(d.get("assumptions", ())),
        )
    except KeyError as exc:
        raise ParseError(f"malformed certificate: missing {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Independent checker (raw numpy only)
# ---------------------------------------------------------------------------


def _c(v) -> complex:
    return complex(v[0], v[1])


def _raw_matrix(g: dict) -> np.ndarray:
    kind = g["kind"]
    if kind == "disk":
        t, a = g["phase"], _c(g["center"])
        e = np.exp(0.5j * t)
        return np.array([[e, e * a], [np.conj(e * a), np.conj(e)]])
    if kind == "halfplane":
        a, b, c, d = g["coefficients"]
        return np.array([[a, b], [c, d]], dtype=complex)
    if kind == "proj2":
        return np.array([[_c(v) for v in row] for row in g["matrix"]])
    raise ParseError(f"no raw matrix for kind {kind!r}")


def _raw_element(pres: dict, word: list):
    """Product of generator powers; bidisk elements are pairs of 2x2 matrices."""
    gens = pres["generators"]
    bidisk = pres["kind"] == "bidisk"
    if bidisk:
        mats = [(_raw_matrix(g["first"]), _raw_matrix(g["second"])) for g in gens]
        out = (np.eye(2, dtype=complex), np.eye(2, dtype=complex))
        for i, e in word:
            a, b = mats[i]
            out = (out[0] @ np.linalg.matrix_power(a, e), out[1] @ np.linalg.matrix_power(b, e))
        return out
    out = np.eye(len(_raw_matrix(gens[0])), dtype=complex)
    for i, e in word:
        out = out @ np.linalg.matrix_power(_raw_matrix(gens[i]), e)
    return out


def _mobius(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def _mobius_d(m, z):
    return (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) / (m[1, 0] * z + m[1, 1]) ** 2


def _raw_equation(disc: dict) -> np.ndarray:
    v = disc["variant"]
    if v == "HorizontalLine":
        return np.array([0, 1, -_c(disc["alpha"])])
    if v == "SiegelGeodesic":
        return np.array([1, _c(disc["a"]), _c(disc["b"])])
    if v == "VerticalLine":
        return np.array([1, 0, _c(disc["b"])])
    if v == "BallLine":
        (b1, b2), (d1, d2) = map(_c, disc["base"]), map(_c, disc["direction"])
        return np.array([d2, -d1, d1 * b2 - d2 * b1])
    raise ParseError(f"{v} is not an affine line")


def _line_residual(l: np.ndarray, p: np.ndarray) -> float:
    return abs(l[0] * p[0] + l[1] * p[1] + l[2]) / max(abs(l[0]), abs(l[1]))


def check_certificate(data: dict, residual_tol: float = 1e-10, margin_tol: float = 1e-8) -> dict:
    """Re-validate a certificate dictionary; returns the recomputed quantities and ``ok``."""
    if data.get("format") != FORMAT:
        raise ParseError(f"unsupported certificate format {data.get('format')!r}")
    amb = data["ambient"]
    p = np.array([_c(v) for v in data["p"]])
    q = np.array([_c(v) for v in data["q"]])
    disc = data["disc"]
    el = _raw_element(data["presentation"], data["word"])
    out: dict[str, Any] = {}
    if amb == "bidisk":
        if disc["variant"] != "BidiskGraph" or disc.get("g") or disc.get("pre") or disc.get("transposed"):
            raise ParseError("bidisk certificates must use the diagonal")
        xi = _c(disc["xi"])
        a, b = el
        gp = np.array([_mobius(a, p[0]), _mobius(b, p[1])])
        out["word_residual"] = float(np.linalg.norm(gp - q))
        out["p_on_disc"] = float(abs(p[1] - xi * p[0]))
        out["q_on_disc"] = float(abs(q[1] - xi * q[0]))
        out["inside"] = bool(np.all(np.abs(np.concatenate([p, q])) < 1))
        out["unique_extremal"] = abs(abs(xi) - 1) < 1e-15
        out["margin"] = float(abs(_mobius_d(a, p[0]) - _mobius_d(b, p[0])))
    else:
        l = _raw_equation(disc)
        m = el
        hp = m @ np.array([p[0], p[1], 1.0])
        gp = hp[:2] / hp[2]
        out["word_residual"] = float(np.linalg.norm(gp - q))
        out["p_on_disc"] = _line_residual(l, p)
        out["q_on_disc"] = _line_residual(l, q)
        if amb == "ball":
            out["inside"] = bool(np.vdot(p, p).real < 1 and np.vdot(q, q).real < 1)
        else:
            out["inside"] = bool(p[1].imag > abs(p[0]) ** 2 and q[1].imag > abs(q[0]) ** 2)
        out["unique_extremal"] = disc["variant"] in ("HorizontalLine", "BallLine", "SiegelGeodesic")
        l2 = l @ np.linalg.inv(m)
        u, v = np.array([-l[1], l[0]]), np.array([-l2[1], l2[0]])
        c = abs(np.vdot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))
        out["margin"] = float(math.acos(min(1.0, c)))
    out["separation"] = float(np.linalg.norm(p - q))
    out["ok"] = bool(
        out["word_residual"] < residual_tol and out["p_on_disc"] < residual_tol
        and out["q_on_disc"] < residual_tol and out["inside"] and out["unique_extremal"]
        and out["margin"] > margin_tol and out["separation"] > 1e-12
    )
    return out
