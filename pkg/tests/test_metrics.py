import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import ball_points, disk_autos, disk_points, halfplane_points
from kobsep import metrics, moebius1d as m1
from kobsep.autos2d import ball_hyperbolic, fuchsian_lift, siegel_parabolic_shear
from kobsep.errors import DomainError


class TestPoincareMetric:
    def test_origin(self):
        assert metrics.poincare_metric(0, 1) == 1.0

    def test_substitution(self):
        assert metrics.poincare_metric(0.5, 1) == pytest.approx(4 / 3, abs=1e-15)

    @given(disk_points(), st.complex_numbers(max_magnitude=10), st.floats(0, 10))
    def test_homogeneous(self, z, v, k):
        assert metrics.poincare_metric(z, k * v) == pytest.approx(k * metrics.poincare_metric(z, v), rel=1e-12, abs=1e-300)

    @given(disk_autos(), disk_points(0.9), st.complex_numbers(min_magnitude=0.1, max_magnitude=2))
    def test_pullback_invariance(self, f, z, v):
        a = metrics.poincare_metric(f(z), f.derivative(z) * v)
        assert a == pytest.approx(metrics.poincare_metric(z, v), rel=1e-9)


class TestDistances:
    def test_zero(self):
        assert metrics.mobius_distance(0.3 + 0.2j, 0.3 + 0.2j) == 0.0

    def test_from_origin(self):
        assert metrics.mobius_distance(0, 0.37) == pytest.approx(0.37, abs=1e-16)

    def test_mobius_value(self):
        z = 0.5j
        w = m1.DiskAuto.hyperbolic(0.5)(z)
        ref = oracles.mobius_distance(z, oracles.phi(0.5, z))
        assert abs(metrics.mobius_distance(z, w) - float(ref)) < 1e-15
        assert float(ref) == pytest.approx(0.693375245, abs=1e-9)

    def test_disk_log_two(self):
        assert metrics.disk_distance(0, 0.6) == pytest.approx(math.log(2), abs=1e-15)

    def test_halfplane_vertical(self):
        # integral of |dw|/(2 Im w) from i to 4i
        integral = mp.quad(lambda y: 1 / (2 * y), [1, 4])
        assert abs(metrics.halfplane_distance(1j, 4j) - float(integral)) < 1e-15

    @given(disk_points(), disk_points())
    def test_against_oracle(self, z, w):
        assert abs(metrics.disk_distance(z, w) - float(oracles.disk_distance(z, w))) < 1e-9

    @given(disk_points(), disk_points())
    def test_consistency(self, z, w):
        assert metrics.disk_distance(z, w) == pytest.approx(math.atanh(metrics.mobius_distance(z, w)), abs=1e-14)

    @given(disk_autos(), disk_points(0.9), disk_points(0.9))
    def test_invariance(self, g, z, w):
        assert abs(metrics.disk_distance(g(z), g(w)) - metrics.disk_distance(z, w)) < 1e-10

    @given(halfplane_points(), halfplane_points())
    def test_halfplane_matches_cayley(self, z, w):
        d = metrics.disk_distance(m1.cayley_inverse(z), m1.cayley_inverse(w))
        assert abs(metrics.halfplane_distance(z, w) - d) < 1e-8

    @given(disk_points(), disk_points(), disk_points())
    def test_triangle(self, x, y, z):
        d = metrics.disk_distance
        assert d(x, z) <= d(x, y) + d(y, z) + 1e-12


class TestBidisk:
    @pytest.mark.parametrize("xi", [0, 0.5, 1, 1j, -0.7 + 0.7j, np.exp(2j)])
    def test_extremal_disc_value(self, xi):
        assert metrics.bidisk_metric((0, 0), (1, xi)) == pytest.approx(1.0, abs=1e-15)

    def test_homogeneity(self):
        assert metrics.bidisk_metric((0, 0), (2, 1)) == 2.0

    def test_product_formula(self):
        assert metrics.bidisk_metric((0.5, 0), (1, 0)) == pytest.approx(4 / 3)

    @given(disk_autos(), disk_autos(), disk_points(0.9), disk_points(0.9), disk_points(0.9), disk_points(0.9))
    def test_invariance(self, f, g, a, b, c, d):
        p, q = (a, b), (c, d)
        lhs = metrics.bidisk_distance((f(a), g(b)), (f(c), g(d)))
        assert abs(lhs - metrics.bidisk_distance(p, q)) < 1e-10

    @given(disk_points(), disk_points(), disk_points(), disk_points())
    def test_max_of_factors(self, a, b, c, d):
        ref = max(oracles.disk_distance(a, c), oracles.disk_distance(b, d))
        assert abs(metrics.bidisk_distance((a, b), (c, d)) - float(ref)) < 1e-9


class TestBall:
    def test_coordinate_direction(self):
        assert metrics.ball_metric((0, 0), (1, 0)) == pytest.approx(1.0)

    def test_second_direction(self):
        assert metrics.ball_metric((0, 0), (0, 3)) == pytest.approx(3.0)

    def test_moved_point(self):
        assert metrics.ball_metric((0.5, 0), (1, 0)) == pytest.approx(4 / 3, abs=1e-14)

    def test_origin_is_euclidean(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert metrics.ball_metric((0, 0), v) == pytest.approx(np.linalg.norm(v), rel=1e-14)

    @given(ball_points(), ball_points())
    def test_against_oracle(self, p, q):
        assert abs(metrics.ball_distance(p, q) - float(oracles.ball_distance(p, q))) < 1e-8

    @given(ball_points(0.9), ball_points(0.9), st.floats(0.05, 0.95), st.floats(0, 6.3))
    def test_invariance(self, p, q, r, th):
        f = ball_hyperbolic(r, th)
        d = metrics.ball_distance(f(p), f(q))
        assert abs(d - metrics.ball_distance(p, q)) < 1e-9

    @given(ball_points(0.9), ball_points(0.9), disk_autos(0.8), st.floats(0, 6.3))
    def test_invariance_lift(self, p, q, g, psi):
        f = fuchsian_lift(g, psi)
        assert abs(metrics.ball_distance(f(p), f(q)) - metrics.ball_distance(p, q)) < 1e-9

    @given(disk_points(), disk_points())
    def test_restricts_to_disk(self, z, w):
        assert abs(metrics.ball_distance((z, 0), (w, 0)) - metrics.disk_distance(z, w)) < 1e-10


class TestSiegelSlice:
    def test_zero(self):
        assert metrics.siegel_slice_distance(5j, 5j) == 0.0

    def test_vertical_value(self):
        integral = float(mp.quad(lambda y: 1 / (2 * y), [99, 100]))
        assert abs(metrics.siegel_slice_distance(99j, 100j) - integral) < 1e-15
        assert integral == pytest.approx(0.005025, abs=1e-6)

    def test_horizontal_upper_bound(self):
        assert metrics.siegel_slice_distance(50j, 50j + 1) <= 1 / (2 * 50)


class TestDsDisk:
    def test_zero(self):
        assert metrics.ds_disk_distance(4.0, 0, 0) == 0.0

    def test_scaled(self):
        assert metrics.ds_disk_distance(100, 0, 1j) == pytest.approx(math.atanh(0.1), abs=1e-15)

    @given(st.floats(2, 100), st.floats(1.01, 3))
    def test_monotone_in_s(self, s, k):
        assert metrics.ds_disk_distance(s * k, 0, 1) < metrics.ds_disk_distance(s, 0, 1)

    def test_outside(self):
        with pytest.raises(DomainError):
            metrics.ds_disk_distance(1.0, 0, 1.5)


class TestEscapeBounds:
    def test_heisenberg(self):
        assert metrics.parabolic_escape_bound("heisenberg", 50) == pytest.approx(0.01)

    def test_shear_value(self):
        path = mp.quad(lambda y: 1 / (2 * y), [99, 100]) + mp.atanh(1 / mp.sqrt(100))
        assert abs(metrics.parabolic_escape_bound("shear", 100) - float(path)) < 1e-15
        assert float(path) == pytest.approx(0.10536, abs=1e-5)

    def test_shear_endpoint(self):
        s = 7.0
        z, w = siegel_parabolic_shear()((1j, 1j * s))
        assert abs(z) < 1e-15 and abs(w - 1j * (s - 1)) < 1e-14

    @pytest.mark.parametrize("kind", ["heisenberg", "shear"])
    def test_doubling_decreasing(self, kind):
        vals = [metrics.parabolic_escape_bound(kind, 2.0 ** k) for k in range(1, 17)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < vals[0] / 50

    @pytest.mark.parametrize("s", [2.0, 16.0, 1000.0])
    def test_bounds_exceed_true_distance(self, s):
        # the bounds come from explicit paths, so they dominate the distance itself
        shear = siegel_parabolic_shear()
        a = (1j, 1j * s)
        true = oracles.siegel_distance(a, shear(a))
        assert float(true) <= metrics.parabolic_escape_bound("shear", s) + 1e-12
        true_h = oracles.siegel_distance((0, 1j * s), (0, 1j * s + 1))
        assert float(true_h) <= metrics.parabolic_escape_bound("heisenberg", s) + 1e-12

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            metrics.parabolic_escape_bound("loxodromic", 10)
