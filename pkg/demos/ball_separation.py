"""Walk through a separation certificate for a hyperbolic automorphism of the ball.

The map f sends a complex line L to another line f(L). When the two lines meet
inside the ball, the quotient disc passes twice through one point, so the
injective metric and the Kobayashi metric differ there.
"""
import math

from kobsep import discs as D
from kobsep import serialize as Z
from kobsep.autos2d import ball_hyperbolic
from kobsep.separation import certify_ball_hyperbolic


def show(r, theta):
    z0, inside = D.lalpha_intersection(r, theta)
    print(f"r={r}, theta={theta:.4f}: z0 = {z0:.6f}, |z0| = {abs(z0):.6f}, inside={inside}")
    cert = certify_ball_hyperbolic(ball_hyperbolic(r, theta))
    n = cert.parameters["n"]
    print(f"  certificate uses f^{n}; residual {cert.residual:.2e}, isolation margin {cert.margin:.3g}")
    raw = Z.check_certificate(Z.loads(Z.dumps(Z.certificate_to_dict(cert))))
    print(f"  raw JSON check ok={raw['ok']}")


if __name__ == "__main__":
    # near the boundary one step already suffices
    show(0.99, 0.1)
    # here sqrt(1 - r^2) > cos(theta) and the search iterates until the lines meet inside
    show(0.5, math.pi / 2)
    show(0.3, 2.5)
