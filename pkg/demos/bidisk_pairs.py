"""Normalize pairs of disk automorphisms so that the diagonal and its image meet at the origin.

For (phi_1, phi_2) acting on the bidisk, we conjugate until phi_1(0) = phi_2(0).
The diagonal point (0, 0) and its image then both lie on the diagonal, and the
derivative gap |phi_1'(0) - phi_2'(0)| measures how transversal the crossing is.
"""
import math

from kobsep import groups as G
from kobsep import moebius1d as m1
from kobsep import separation as S

phi = m1.DiskAuto.hyperbolic
par = m1.HalfPlaneAuto.translation

PAIRS = {
    "hyperbolic 0.3 / 0.6": (phi(0.3), phi(0.6)),
    "hyperbolic 0.5 / 0.5": (phi(0.5), phi(0.5)),
    "hyperbolic 0.5 / parabolic": (phi(0.5), par(1.0)),
    "parabolic / parabolic": (par(1.0), par(-1.0)),
}

if __name__ == "__main__":
    for name, (a, b) in PAIRS.items():
        nb = S.normalize_bidisk_pair(a, b)
        cert = S.certify_bidisk(a, b)
        print(f"{name:28s} exponents={nb.exponents} phi1(0)={complex(nb.phi1(0)):.6f} "
              f"gap={cert.margin:.4f} valid={cert.validate()}")

    # the unequal hyperbolic case solves eta(s) = artanh(0.6) along the imaginary axis
    s = G.eta_solve(math.atanh(0.6), 0.3, math.pi / 2)
    print(f"\neta_solve(artanh 0.6; r=0.3, theta=pi/2) = {s:.12f}")
    print(f"eta at that point = {G.eta(s, 0.3, math.pi / 2):.12f}, target {math.atanh(0.6):.12f}")
