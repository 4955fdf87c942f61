import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from strategies import angles, disk_autos, disk_points, halfplane_points
from kobsep import moebius1d as m1
from kobsep.errors import CoincidentPoints, DomainError, NotFixed, WrongClass

H = m1.HalfPlaneAuto
Dk = m1.DiskAuto
PSI = H.from_coefficients(7 / 5, -1 / 5, 4 / 5, 3 / 5)
GAMMA = H.from_coefficients(1, -2, 2, 0)


class TestApply:
    def test_hyperbolic_moves_origin_to_r(self):
        assert Dk.hyperbolic(0.5)(0) == pytest.approx(0.5, abs=1e-15)

    def test_psi_fixes_one_half(self):
        assert abs(PSI(0.5) - 0.5) < 1e-15

    def test_halfplane_translation(self):
        assert abs(m1.apply(H.from_coefficients(1, 1, 0, 1), 1j) - (1 + 1j)) < 1e-15

    def test_vectorized_matches_scalar(self):
        f = Dk(0.3, 0.2 + 0.1j)
        z = np.array([0, 0.5j, -0.3 + 0.2j])
        assert np.allclose(f(z), [f(complex(x)) for x in z], atol=1e-15)

    def test_boundary_maps_to_boundary(self):
        f = Dk(1.1, 0.6 - 0.2j)
        t = np.linspace(0, 2 * np.pi, 50)
        assert np.max(np.abs(np.abs(f(np.exp(1j * t))) - 1)) < 1e-12

    def test_rejects_center_outside_disk(self):
        with pytest.raises(DomainError):
            Dk(0.0, 1.2)


class TestComposeInverse:
    def test_compose_with_inverse_is_identity(self):
        f = Dk(0.7, 0.4j)
        assert m1.is_identity(m1.compose(f, m1.inverse(f)))

    def test_doubling_hyperbolic(self):
        # addition formula for tanh
        g = m1.compose(Dk.hyperbolic(0.5), Dk.hyperbolic(0.5))
        r = math.tanh(2 * math.atanh(0.5))
        assert abs(g.center - r) < 1e-15 and abs(g.phase) < 1e-15
        assert r == pytest.approx(0.8)

    def test_gamma_inverse(self):
        assert m1.is_identity(GAMMA @ GAMMA.inverse())
        z = np.array([1j, 2 + 0.5j, -1 + 3j])
        assert np.max(np.abs(GAMMA.inverse()(z) - (-1 / (z - 0.5)))) < 1e-14

    def test_inverse_of_identity(self):
        assert m1.is_identity(m1.inverse(Dk.identity()))

    def test_inverse_value(self):
        # solve (x + 0.5)/(1 + 0.5 x) = 0.9
        x = mp.findroot(lambda x: (x + 0.5) / (1 + 0.5 * x) - 0.9, 0.5)
        assert abs(Dk.hyperbolic(0.5).inverse()(0.9) - float(x)) < 1e-15

    @given(disk_autos(), disk_autos(), disk_autos(), disk_points())
    def test_associative(self, f, g, h, z):
        a = m1.compose(m1.compose(f, g), h)
        b = m1.compose(f, m1.compose(g, h))
        assert abs(a(z) - b(z)) < 1e-10

    @given(disk_autos(), disk_points())
    def test_inverse_two_sided(self, f, z):
        assert abs((f @ f.inverse())(z) - z) < 1e-10
        assert abs((f.inverse() @ f)(z) - z) < 1e-10

    @given(disk_autos(), st.integers(-5, 5), st.integers(-5, 5), disk_points(0.8))
    def test_power_additive(self, f, m, n, z):
        assert abs(m1.power(f, m + n)(z) - (m1.power(f, m) @ m1.power(f, n))(z)) < 1e-8


class TestCayley:
    def test_identity_transport(self):
        t = m1.cayley_transport(Dk.identity())
        assert (t.a, t.b, t.c, t.d) == pytest.approx((1, 0, 0, 1), abs=1e-15)

    def test_center_to_i(self):
        assert abs(m1.cayley(0) - 1j) < 1e-15

    def test_trace_of_transported_hyperbolic(self):
        t = m1.cayley_transport(Dk.hyperbolic(0.6))
        assert abs(abs(t.trace) - 2 * math.cosh(math.atanh(0.6))) < 1e-14
        assert abs(abs(t.trace) - 2.5) < 1e-14

    @given(disk_points())
    def test_round_trip(self, z):
        assert abs(m1.cayley_inverse(m1.cayley(z)) - z) < 1e-12

    @given(disk_autos(), disk_points())
    def test_transport_conjugates(self, f, z):
        t = m1.cayley_transport(f)
        assert abs(t(m1.cayley(z)) - m1.cayley(f(z))) < 1e-8 * (1 + abs(m1.cayley(f(z))))


class TestClassify:
    def test_parabolic_translation(self):
        c = m1.classify(H.from_coefficients(1, 1, 0, 1))
        assert c.tag == "parabolic" and c.sign == 1 and math.isinf(c.fixed_point.real)

    def test_hyperbolic_fixed_points(self):
        c = m1.classify(Dk.hyperbolic(0.5))
        assert c.tag == "hyperbolic"
        assert {round(c.attracting.real, 12), round(c.repelling.real, 12)} == {-1.0, 1.0}

    def test_rotation_elliptic(self):
        c = m1.classify(Dk.rotation(math.pi / 3))
        assert c.tag == "elliptic" and abs(c.fixed_point) < 1e-15

    def test_identity(self):
        assert m1.classify(Dk.identity()).tag == "identity"

    def test_eps_is_configurable(self):
        near = Dk.hyperbolic(1e-6)  # |tr| - 2 ~ 1e-12
        assert m1.classify(near).tag != "hyperbolic"
        assert m1.classify(near, eps=1e-14).tag == "hyperbolic"

    @given(disk_autos(), st.floats(0.05, 0.95))
    def test_conjugation_invariant_hyperbolic(self, g, r):
        f = Dk.hyperbolic(r)
        c0, c1 = m1.classify(f), m1.classify(g @ f @ g.inverse())
        assert c1.tag == "hyperbolic" and abs(c1.length - c0.length) < 1e-10

    @given(disk_autos(), angles.filter(lambda t: 0.1 < t < 2 * math.pi - 0.1))
    def test_conjugation_invariant_elliptic(self, g, t):
        assert m1.classify(g @ Dk.rotation(t) @ g.inverse()).tag == "elliptic"

    @given(disk_autos(), st.sampled_from([1.0, -1.0, 2.5]))
    def test_conjugation_invariant_parabolic(self, g, t):
        f = m1.to_disk(H.translation(t))
        assert m1.classify(g @ f @ g.inverse()).tag == "parabolic"

    @given(st.floats(0.05, 0.95), disk_autos())
    def test_trace_is_twice_cosh_length(self, r, g):
        f = g @ Dk.hyperbolic(r) @ g.inverse()
        rn, _ = m1.hyperbolic_normalize(f)
        assert abs(abs(f.trace) - 2 * math.cosh(math.atanh(rn))) < 1e-9

    @given(disk_autos(), st.floats(0.05, 0.95))
    def test_transport_preserves_class(self, g, r):
        f = g @ Dk.hyperbolic(r) @ g.inverse()
        a, b = m1.classify(f), m1.classify(m1.cayley_transport(f))
        assert a.tag == b.tag and abs(a.length - b.length) < 1e-9


class TestFixedPoints:
    def test_hyperbolic(self):
        fp = m1.fixed_points(Dk.hyperbolic(0.5))
        assert [round(p.real, 12) for p, _ in fp] == [-1.0, 1.0]
        assert all(tag == "boundary" for _, tag in fp)

    def test_psi(self):
        fp = m1.fixed_points(PSI)
        assert len(fp) == 1 and abs(fp[0][0] - 0.5) < 1e-7 and fp[0][1] == "boundary"

    def test_rotation(self):
        assert m1.fixed_points(Dk.rotation(1.0)) == [(0j, "interior")]


class TestMultiplier:
    def test_eigenvalues(self):
        mu = m1.multiplier(Dk.hyperbolic(0.5), 1.0)
        assert np.allclose(mu.eigenvalues, (0.5, 1.5), atol=1e-15)

    def test_derivative_against_finite_difference(self):
        fd = oracles.derivative(lambda z: oracles.phi(0.5, z), 1.0)
        mu = m1.multiplier(Dk.hyperbolic(0.5), 1.0)
        assert abs(mu.derivative - complex(fd)) < 1e-12
        assert abs(mu.derivative - 1 / 3) < 1e-15

    def test_rotation_derivative(self):
        assert abs(m1.multiplier(Dk.rotation(0.4), 0).derivative - cmath.exp(0.4j)) < 1e-15

    @pytest.mark.parametrize("r", np.linspace(0.05, 0.95, 10))
    def test_derivative_is_eigenvalue_ratio(self, r):
        mu = m1.multiplier(Dk.hyperbolic(r), 1.0)
        lo, hi = mu.eigenvalues
        assert abs(mu.derivative - lo / hi) < 1e-12

    def test_not_fixed(self):
        with pytest.raises(NotFixed):
            m1.multiplier(Dk.hyperbolic(0.5), 0.3)


class TestNormalize:
    def test_normal_form_is_its_own(self):
        r, g = m1.hyperbolic_normalize(Dk.hyperbolic(0.5))
        assert abs(r - 0.5) < 1e-15
        assert m1.is_identity(g)

    @given(disk_autos(), st.floats(0.05, 0.95))
    def test_round_trip(self, g, r0):
        f = g @ Dk.hyperbolic(r0) @ g.inverse()
        r, h = m1.hyperbolic_normalize(f)
        assert abs(r - r0) < 1e-10
        z = np.array([0, 0.3j, -0.5])
        assert np.max(np.abs((h.inverse() @ f @ h)(z) - Dk.hyperbolic(r)(z))) < 1e-9

    def test_dilation_by_four(self):
        ell = float(oracles.halfplane_distance(1j, 4j))
        r, _ = m1.hyperbolic_normalize(H.dilation(4.0))
        assert abs(r - math.tanh(ell)) < 1e-14
        assert abs(r - 0.6) < 1e-14

    def test_translation_is_normal(self):
        s, g = m1.parabolic_normalize(H.translation(1.0))
        assert s == 1 and m1.is_identity(g)

    def test_parabolic_pair_conjugacy(self):
        z = np.array([1j, 0.3 + 2j, -4 + 0.1j])
        assert np.max(np.abs(1.25 * GAMMA.inverse()(PSI(GAMMA(0.8 * z))) - (z - 1))) < 1e-12
        s, g = m1.parabolic_normalize(PSI)
        assert s == -1
        assert np.max(np.abs((g.inverse() @ PSI @ g)(z) - (z - 1))) < 1e-10

    @given(st.floats(-3, 3), st.floats(0.2, 5), st.floats(-3, 3))
    def test_parabolic_round_trip(self, b, a, c):
        # g(z) = a z + b composed with an inversion-type factor
        g = H.from_coefficients(a, b, c, (1 + b * c) / a)
        f = g @ H.translation(-1.0) @ g.inverse()
        s, h = m1.parabolic_normalize(f)
        assert s == -1
        z = np.array([1j, 2 + 1j])
        back = (h.inverse() @ f @ h)(z)
        assert np.max(np.abs(back - (z - 1))) < 1e-10 * (1 + np.max(np.abs(z)))

    def test_wrong_class(self):
        with pytest.raises(WrongClass):
            m1.hyperbolic_normalize(H.translation(1.0))
        with pytest.raises(WrongClass):
            m1.parabolic_normalize(Dk.hyperbolic(0.4))


class TestAligner:
    def test_trivial(self):
        assert m1.is_identity(m1.geodesic_aligner(0, 0.5))

    def test_lands_on_image(self):
        z = 0.3j
        w = Dk.hyperbolic(0.3)(z)
        psi = m1.geodesic_aligner(z, w)
        dm = float(oracles.mobius_distance(z, w))
        assert abs(psi(0) - z) < 1e-14 and abs(psi(dm) - w) < 1e-14

    @given(disk_points(0.9), disk_points(0.9))
    def test_generic(self, z, w):
        if z == w:
            with pytest.raises(CoincidentPoints):
                m1.geodesic_aligner(z, w)
            return
        assume(abs(z - w) > 1e-6)
        psi = m1.geodesic_aligner(z, w)
        dm = float(oracles.mobius_distance(z, w))
        assert abs(psi(0) - z) < 1e-12 and abs(psi(dm) - w) < 1e-10


@given(halfplane_points(), st.floats(-2, 2))
def test_halfplane_translation_preserves_height(z, t):
    assert abs(H.translation(t)(z).imag - z.imag) < 1e-14
