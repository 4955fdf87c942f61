"""Injectivity scans: discs whose projection to the quotient stays embedded, and one that does not."""
from kobsep import discs as D
from kobsep import groups as G
from kobsep import moebius1d as m1
from kobsep import separation as S
from kobsep.autos2d import BidiskAuto, siegel_parabolic_heisenberg

if __name__ == "__main__":
    heis = G.Presentation.cyclic(siegel_parabolic_heisenberg(0.0), "t")
    rep = S.injectivity_scan(heis, D.VerticalLine(1.0), 48, 8)
    print(f"vertical line under <t>: {rep.status} ({rep.points_checked} points, {rep.elements_checked} elements)")

    for delta in (0.1, 0.01):
        rep = S.vertical_perturbation(1.0, delta, 2j, 48, 8)
        print(f"perturbed disc, delta={delta}: {rep.status}, "
              f"sup distance to the vertical line {rep.extra['sup_distance_to_vertical']:.3g}")

    phi = m1.DiskAuto.hyperbolic(0.5)
    curve = S.bidisk_extremal((0.3, -0.2j), (1.0, 0.5 + 0.2j))
    rep = S.injectivity_scan(G.Presentation.cyclic(BidiskAuto(phi, m1.DiskAuto.identity())), curve.as_disc(), 48, 8)
    print(f"extremal curve under <(phi, id)>: {rep.status}, metric value {curve.metric_value:.6f}")

    # the diagonal is invariant under (phi, phi), so every group element identifies two of its points
    rep = S.injectivity_scan(G.Presentation.cyclic(BidiskAuto(phi, phi)), D.BidiskGraph(), 48, 8)
    w = rep.witnesses[0]
    print(f"diagonal under <(phi, phi)>: {rep.status}; witness {w.word}: t1={w.t1:.4f} -> t2={w.t2:.4f}")
