import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from strategies import disk_autos
from kobsep import discs as D
from kobsep import groups as G
from kobsep import metrics, moebius1d as m1
from kobsep import separation as S
from kobsep.autos2d import BidiskAuto, ball_hyperbolic, siegel_parabolic_heisenberg
from kobsep.errors import DegenerateDirection, DegenerateInput, DegenerateRotation, DomainError

phi = m1.DiskAuto.hyperbolic
H = m1.HalfPlaneAuto


class TestBallCertificate:
    def test_near_boundary_example(self):
        c = S.certify_ball_hyperbolic(ball_hyperbolic(0.99, 0.1))
        assert c.parameters["n"] == 1 and c.parameters["alpha"] == 0.1
        z0, _ = D.lalpha_intersection(0.99, 0.1)
        assert np.allclose(c.q, (z0, 0.1), atol=1e-15)
        assert c.residual < 1e-12 and c.margin > 1e-8
        assert c.validate()

    def test_needs_iterate(self):
        c = S.certify_ball_hyperbolic(ball_hyperbolic(0.5, math.pi / 2))
        n = c.parameters["n"]
        assert n > 1
        rn = math.tanh(n * math.atanh(0.5))
        assert math.sqrt(1 - rn * rn) < math.cos(n * math.pi / 2)
        assert c.validate()

    @pytest.mark.parametrize("r", [0.3, 0.7])
    def test_zero_angle(self, r):
        assert S.certify_ball_hyperbolic(ball_hyperbolic(r, 0.0)).parameters["n"] == 1

    def test_grid(self):
        for r in (0.3, 0.5, 0.7, 0.9, 0.99):
            for th in np.round(np.arange(0.0, 3.15, 0.1), 10):
                c = S.certify_ball_hyperbolic(ball_hyperbolic(r, th), budget=500)
                assert not c.failures(), (r, th, c.failures())

    def test_points_are_identified(self):
        c = S.certify_ball_hyperbolic(ball_hyperbolic(0.5, math.pi / 2))
        g = c.element
        assert np.linalg.norm(g(c.p) - c.q) < 1e-12
        assert float(oracles.ball_distance(c.p, c.q)) > 0.1


class TestSiegelCertificate:
    def test_half_turn(self):
        c = S.certify_siegel_parabolic(math.pi, 1, -0.5 - 2j)
        assert np.allclose(c.q, (0.5, 2j), atol=1e-15)
        assert c.validate()

    @pytest.mark.parametrize("th", [math.pi / 3, math.pi / 2, math.pi, 4.0])
    def test_default_b(self, th):
        c = S.certify_siegel_parabolic(th)
        assert c.margin > 1e-8 and c.parameters["domain_margin"] >= 0.1
        a, b = c.disc.a, c.disc.b
        for pt in (c.p, c.q):
            assert abs(pt[0] + a * pt[1] + b) < 1e-12

    def test_zero_angle(self):
        with pytest.raises(DegenerateRotation):
            S.certify_siegel_parabolic(0.0)

    def test_assumptions_recorded(self):
        c = S.certify_siegel_parabolic(1.0)
        assert c.assumptions == S.SIEGEL_ASSUMPTIONS and len(c.assumptions) > 0


class TestBidiskNormalization:
    def test_unequal(self):
        nb = S.normalize_bidisk_pair(phi(0.3), phi(0.6))
        assert abs(nb.phi1(0) - 0.6) < 1e-12
        assert abs(nb.phi1(0) - nb.phi2(0)) < 1e-12
        assert m1.projective_distance(nb.phi1.matrix, nb.phi2.matrix) > 1e-8
        s = oracles.eta_root(mp.atanh(mp.mpf("0.6")), mp.mpf("0.3"), mp.pi / 2)
        assert abs(nb.extra["s"] - float(s)) < 1e-12

    def test_equal_moduli(self):
        nb = S.normalize_bidisk_pair(phi(0.5), phi(0.5))
        assert nb.exponents == (1, 2)
        assert abs(nb.phi1(0) - math.tanh(2 * math.atanh(0.5))) < 1e-12
        assert abs(nb.phi1(0) - 0.8) < 1e-12

    def test_parabolic_pair(self):
        nb = S.normalize_bidisk_pair(H.translation(1.0), H.translation(-1.0))
        f1 = m1.to_halfplane(nb.phi1)
        f2 = m1.to_halfplane(nb.phi2)
        assert abs(f1(1j) - f2(1j)) < 1e-12
        psi = S.PAIR_PSI
        z = np.array([0.3 + 1j, 2j])
        assert np.max(np.abs(f1(z) - (z + 1))) < 1e-12
        assert np.max(np.abs(f2(z) - psi(z))) < 1e-12
        assert abs(f1(1j) - psi(1j)) < 1e-12

    def test_hyperbolic_parabolic(self):
        for a, b in ((phi(0.5), H.translation(1.0)), (H.translation(-1.0), phi(0.4))):
            nb = S.normalize_bidisk_pair(a, b)
            assert abs(nb.phi1(0) - nb.phi2(0)) < 1e-12

    @given(disk_autos(0.8), disk_autos(0.8), st.floats(0.1, 0.9), st.floats(0.1, 0.9))
    @settings(max_examples=30)
    def test_conjugated_inputs(self, g, h, r1, r2):
        nb = S.normalize_bidisk_pair(g @ phi(r1) @ g.inverse(), h @ phi(r2) @ h.inverse())
        assert abs(nb.phi1(0) - nb.phi2(0)) < 1e-12
        assert m1.projective_distance(nb.phi1.matrix, nb.phi2.matrix) > 1e-8

    def test_rejects_elliptic(self):
        with pytest.raises(DegenerateInput):
            S.normalize_bidisk_pair(m1.DiskAuto.rotation(1.0), phi(0.5))


class TestBidiskCertificate:
    @pytest.mark.parametrize("pair", [
        (phi(0.3), phi(0.6)), (phi(0.5), phi(0.5)), (phi(0.5), H.translation(1.0)),
        (H.translation(1.0), H.translation(-1.0)),
    ], ids=["unequal", "equal", "hyp-par", "par-par"])
    def test_validates(self, pair):
        c = S.certify_bidisk(*pair)
        assert c.validate(), c.failures()
        assert c.disc.is_unique_extremal

    def test_margin_is_derivative_gap(self):
        c = S.certify_bidisk(phi(0.3), phi(0.6))
        nb = S.normalize_bidisk_pair(phi(0.3), phi(0.6))
        gap = abs(nb.phi1.derivative(0) - nb.phi2.derivative(0))
        assert c.margin == pytest.approx(gap, rel=1e-12) and gap > 0

    def test_word_identifies_diagonal_points(self):
        c = S.certify_bidisk(phi(0.3), phi(0.6))
        assert c.p[0] == c.p[1]
        assert np.linalg.norm(c.element(c.p) - c.q) < 1e-12


class TestFailures:
    def test_tampered_point_fails(self):
        c = S.certify_ball_hyperbolic(ball_hyperbolic(0.99, 0.1))
        c.q = c.q + np.array([1e-6, 0])
        assert "word_residual" in " ".join(c.failures())

    def test_non_extremal_disc_fails(self):
        c = S.certify_bidisk(phi(0.3), phi(0.6))
        c.disc = D.BidiskGraph(xi=0.5)
        assert not c.validate()


class TestScans:
    def test_vertical_line(self):
        P = G.Presentation.cyclic(siegel_parabolic_heisenberg(0.0), "t")
        rep = S.injectivity_scan(P, D.VerticalLine(1.0), 24, 6)
        assert rep.passed and rep.points_checked > 0

    def test_diagonal_fails_with_witness(self):
        P = G.Presentation.cyclic(BidiskAuto(phi(0.5), phi(0.5)))
        d = D.BidiskGraph()
        rep = S.injectivity_scan(P, d, 16, 3)
        assert rep.status == "fail" and rep.witnesses
        w = rep.witnesses[0]
        g = next(e.auto for e in G.enumerate_words(P, 3) if e.word.format(P.labels) == w.word)
        assert np.linalg.norm(g(d.point(w.t1)) - d.point(w.t2)) < 1e-9
        assert abs(w.t1 - w.t2) > 1e-6

    def test_perturbed(self):
        rep = S.vertical_perturbation(1.0, 0.01, 2j, 24, 6)
        assert rep.passed

    def test_perturbed_converges(self):
        sups = [S.vertical_perturbation(1.0, d, 2j, 8, 1).extra["sup_distance_to_vertical"] for d in (0.1, 0.01, 0.001)]
        assert sups[1] == pytest.approx(sups[0] / 10, rel=1e-9)
        assert sups[2] == pytest.approx(sups[0] / 100, rel=1e-9)

    def test_perturbed_rejects_zero(self):
        with pytest.raises(DomainError):
            S.vertical_perturbation(1.0, 0.0, 2j)

    def test_extremal_curve(self):
        curve = S.bidisk_extremal((0.3, -0.2j), (1.0, 0.5 + 0.2j))
        P = G.Presentation.cyclic(BidiskAuto(phi(0.5), m1.DiskAuto.identity()))
        assert S.injectivity_scan(P, curve.as_disc(), 24, 6).passed


class TestExtremal:
    def test_origin(self):
        c = S.bidisk_extremal((0, 0), (1, 0.6j))
        z = np.array([0, 0.3, -0.5j])
        assert np.allclose(c(z), np.stack([z, 0.6j * z], axis=1))
        assert np.allclose(c.left_inverse(c(z)), z)

    @given(st.complex_numbers(max_magnitude=0.8), st.complex_numbers(max_magnitude=0.8),
           st.complex_numbers(min_magnitude=0.1, max_magnitude=2), st.complex_numbers(min_magnitude=0.1, max_magnitude=2))
    def test_metric_consistency(self, a, b, v1, v2):
        c = S.bidisk_extremal((a, b), (v1, v2))
        assert c.metric_value == pytest.approx(metrics.bidisk_metric((a, b), (v1, v2)), rel=1e-10)
        z = np.array([0, 0.2, 0.4j])
        assert np.max(np.abs(c.left_inverse(c(z)) - z)) < 1e-12
        assert np.allclose(c(0), (a, b))
        d0 = c.derivative0()
        assert abs(d0[0] * v2 - d0[1] * v1) < 1e-10 * (abs(v1) + abs(v2)) * np.linalg.norm(d0)

    def test_axis_direction_rejected(self):
        with pytest.raises(DegenerateDirection):
            S.bidisk_extremal((0, 0), (0, 1))
