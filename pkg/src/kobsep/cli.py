"""Command-line front end.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import discs as D
from . import groups as G
from . import metrics
from . import moebius1d as m1
from . import separation as S
from . import serialize as Z
from . import suite
from .autos2d import BidiskAuto, ProjAuto2, ball_hyperbolic, classify2, siegel_parabolic_heisenberg
from .errors import BudgetExceeded, KobsepError, ParseError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

_PI = re.compile(r"^\s*(-?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_real(text: str) -> float:
    """A float, or a multiple of pi such as ``pi/3``, ``2pi`` or ``-0.5*pi``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI.match(text.lower())
    if not m:
        raise ParseError(f"cannot parse real number {text!r}")
    k = {"": 1.0, "-": -1.0}.get(m.group(1)) or float(m.group(1))
    return k * math.pi / (float(m.group(2)) if m.group(2) else 1.0)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ParseError(f"cannot parse complex number {text!r}") from exc


def parse_point(text: str) -> np.ndarray:
    parts = [parse_complex(t) for t in text.split(",")]
    if len(parts) != 2:
        raise ParseError(f"expected a point 'z1,z2', got {text!r}")
    return np.array(parts)


def parse_factor(text: str):
    """A bidisk factor: r for the hyperbolic normal form, or par+/par- for z -> z +- 1."""
    t = text.strip().lower()
    if t in ("par", "par+"):
        return m1.HalfPlaneAuto.translation(1.0)
    if t == "par-":
        return m1.HalfPlaneAuto.translation(-1.0)
    r = parse_real(t)
    if not 0 < r < 1:
        raise ParseError(f"hyperbolic factor r must lie in (0, 1), got {r}")
    return m1.DiskAuto.hyperbolic(r)


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return Z.loads(text)


def _emit(obj, out: Optional[str]) -> None:
    text = Z.dumps(Z.encode(obj))
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands; each returns (payload, exit code)
# ---------------------------------------------------------------------------


def _auto_from_args(args):
    if args.input:
        return Z.decode_auto(_read_json(args.input))
    coeffs = args.coeffs or args.values
    if coeffs:
        if len(coeffs) != 4:
            raise ParseError("half-plane maps take four real coefficients a b c d")
        return m1.HalfPlaneAuto.from_coefficients(*map(parse_real, coeffs))
    if args.disk:
        return m1.DiskAuto(parse_real(args.disk[0]), parse_complex(args.disk[1]))
    raise ParseError("give --coeffs, --disk or --input")


def cmd_classify(args):
    f = _auto_from_args(args)
    eps = args.tol or m1.CLASSIFY_EPS
    if isinstance(f, ProjAuto2):
        result = {"class": classify2(f)}
    elif isinstance(f, BidiskAuto):
        result = {"class": [m1.classify(f.first, eps).tag, m1.classify(f.second, eps).tag]}
    else:
        c = m1.classify(f, eps)
        result = {"class": c.tag}
        for key in ("fixed_point", "sign", "angle", "attracting", "repelling", "length", "r"):
            if hasattr(c, key):
                v = getattr(c, key)
                result[key] = "inf" if isinstance(v, complex) and math.isinf(v.real) else v
    return {"command": "classify", "input": Z.encode_auto(f), "result": result}, EXIT_OK


def cmd_distance(args):
    model = args.model
    if model in ("disk", "halfplane"):
        x, y = parse_complex(args.x), parse_complex(args.y)
        d = metrics.disk_distance(x, y) if model == "disk" else metrics.halfplane_distance(x, y)
    else:
        x, y = parse_point(args.x), parse_point(args.y)
        d = G.ambient_distance(model, x, y)
    return {"command": "distance", "model": model, "x": x, "y": y, "distance": d}, EXIT_OK


def cmd_modulus(args):
    if args.input:
        f = Z.decode_auto(_read_json(args.input))
    elif args.r is not None:
        f = m1.DiskAuto.hyperbolic(parse_real(args.r))
    else:
        raise ParseError("give --r or --input")
    return {"command": "modulus", "input": Z.encode_auto(f), "modulus": G.annulus_modulus(f)}, EXIT_OK


def cmd_certify(args):
    budget = args.word_budget
    if args.target == "ball":
        phi = ball_hyperbolic(parse_real(args.r), parse_real(args.theta))
        cert = S.certify_ball_hyperbolic(phi, budget or 500)
    elif args.target == "siegel":
        b = None if args.b is None else parse_complex(args.b)
        cert = S.certify_siegel_parabolic(parse_real(args.theta), parse_complex(args.a), b)
    else:
        if len(args.factors) != 2:
            raise ParseError("certify bidisk takes two factors")
        cert = S.certify_bidisk(*map(parse_factor, args.factors))
    data = Z.certificate_to_dict(cert)
    check = Z.check_certificate(Z.loads(Z.dumps(data)), args.tol or S.RESIDUAL_TOL)
    data["check"] = {k: check[k] for k in sorted(check)}
    return data, EXIT_OK if check["ok"] else EXIT_FAIL


def cmd_scan(args):
    grid, budget = args.grid or 32, args.word_budget or 6
    if args.case == "vertical":
        P = G.Presentation.cyclic(siegel_parabolic_heisenberg(0.0), "t")
        rep = S.injectivity_scan(P, D.VerticalLine(parse_complex(args.b)), grid, budget)
    elif args.case == "perturbed":
        rep = S.vertical_perturbation(parse_complex(args.b), parse_real(args.delta),
                                      parse_complex(args.zeta0), grid, budget)
    elif args.case == "diagonal":
        phi = m1.DiskAuto.hyperbolic(parse_real(args.r))
        P = G.Presentation.cyclic(BidiskAuto(phi, phi))
        rep = S.injectivity_scan(P, D.BidiskGraph(), grid, budget)
    else:
        phi = m1.DiskAuto.hyperbolic(parse_real(args.r))
        curve = S.bidisk_extremal(parse_point(args.point), parse_point(args.direction))
        P = G.Presentation.cyclic(BidiskAuto(phi, m1.DiskAuto.identity()))
        rep = S.injectivity_scan(P, curve.as_disc(), grid, budget)
    payload = {
        "command": "scan", "case": args.case, "disc": Z.encode_disc(rep.disc), "grid": rep.grid,
        "word_budget": rep.word_budget, "status": rep.status, "points_checked": rep.points_checked,
        "elements_checked": rep.elements_checked,
        "witnesses": [{"word": w.word, "t1": w.t1, "t2": w.t2, "residual": w.residual} for w in rep.witnesses],
        "extra": rep.extra,
    }
    return payload, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify_paper(args):
    select = None
    if args.only is not None:
        select = [s for s in args.only if s]
    report = suite.verify_paper(args.tol, select)
    payload = {"command": "verify-paper", **report.to_dict(timing=args.timing)}
    return payload, EXIT_FAIL if report.status == "fail" else EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive, help="tolerance override")
    common.add_argument("--word-budget", type=_positive_int, help="word length / iterate budget")
    common.add_argument("--grid", type=_positive_int, help="grid size per axis for scans")
    common.add_argument("--out", help="write JSON output to this file")

    p = argparse.ArgumentParser(prog="kobsep", description="Automorphism groups, extremal discs and separation certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="conjugacy class of an automorphism")
    c.add_argument("values", nargs="*", help="half-plane coefficients a b c d (same as --coeffs)")
    c.add_argument("--coeffs", nargs=4, metavar=("A", "B", "C", "D"), help="half-plane map (az+b)/(cz+d)")
    c.add_argument("--disk", nargs=2, metavar=("PHASE", "CENTER"), help="disk map e^{i phase}(z+c)/(1+conj(c)z)")
    c.add_argument("--input", help="JSON automorphism file")
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("distance", parents=[common], help="Kobayashi distance")
    d.add_argument("--model", choices=["disk", "halfplane", "bidisk", "ball", "siegel"], default="disk")
    d.add_argument("x")
    d.add_argument("y")
    d.set_defaults(func=cmd_distance)

    m = sub.add_parser("modulus", parents=[common], help="modulus of the annulus of a hyperbolic map")
    m.add_argument("--r")
    m.add_argument("--input")
    m.set_defaults(func=cmd_modulus)

    ce = sub.add_parser("certify", parents=[common], help="emit a separation certificate")
    ce.add_argument("target", choices=["ball", "siegel", "bidisk"])
    ce.add_argument("factors", nargs="*", help="bidisk factors: r in (0,1), par+ or par-")
    ce.add_argument("--r", default="0.99")
    ce.add_argument("--theta", default="0.1")
    ce.add_argument("--a", default="1")
    ce.add_argument("--b")
    ce.set_defaults(func=cmd_certify)

    s = sub.add_parser("scan", parents=[common], help="injectivity scan on the coincidence side")
    s.add_argument("case", choices=["vertical", "perturbed", "diagonal", "extremal"])
    s.add_argument("--b", default="1")
    s.add_argument("--delta", default="0.01")
    s.add_argument("--zeta0", default="2j")
    s.add_argument("--r", default="0.5")
    s.add_argument("--point", default="0.3,-0.2j")
    s.add_argument("--direction", default="1,0.5+0.2j")
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify-paper", parents=[common], help="run the identity suite")
    v.add_argument("--only", nargs="*", help="run only these checks (none given: vacuous pass)")
    v.add_argument("--timing", action="store_true", help="include wall times (output no longer byte-stable)")
    v.set_defaults(func=cmd_verify_paper)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (KobsepError, ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
