import copy
import json
import math

import numpy as np
import pytest
from hypothesis import given

from strategies import disk_autos
from kobsep import discs as D
from kobsep import groups as G
from kobsep import moebius1d as m1
from kobsep import separation as S
from kobsep import serialize as Z
from kobsep.autos2d import BidiskAuto, ball_hyperbolic, siegel_parabolic_shear
from kobsep.errors import ParseError

phi = m1.DiskAuto.hyperbolic
H = m1.HalfPlaneAuto


def certificates():
    return {
        "ball": S.certify_ball_hyperbolic(ball_hyperbolic(0.99, 0.1)),
        "ball-iterate": S.certify_ball_hyperbolic(ball_hyperbolic(0.5, math.pi / 2)),
        "siegel": S.certify_siegel_parabolic(math.pi / 3),
        "bidisk": S.certify_bidisk(phi(0.3), phi(0.6)),
        "bidisk-par": S.certify_bidisk(H.translation(1.0), H.translation(-1.0)),
    }


@pytest.fixture(scope="module", params=sorted(certificates()))
def cert(request):
    return certificates()[request.param]


class TestCertificates:
    def test_raw_checker_accepts(self, cert):
        assert Z.check_certificate(Z.loads(Z.dumps(Z.certificate_to_dict(cert))))["ok"]

    def test_round_trip(self, cert):
        back = Z.certificate_from_dict(Z.loads(Z.dumps(Z.certificate_to_dict(cert))))
        assert back.validate(), back.failures()
        assert back.word == cert.word and back.ambient == cert.ambient
        assert np.max(np.abs(back.q - cert.q)) < 1e-14

    def test_second_round_trip_is_stable(self, cert):
        # decoding rescales matrices to unit determinant, so compare values rather than bytes
        first = Z.check_certificate(Z.certificate_to_dict(cert))
        back = Z.certificate_from_dict(Z.loads(Z.dumps(Z.certificate_to_dict(cert))))
        second = Z.check_certificate(Z.loads(Z.dumps(Z.certificate_to_dict(back))))
        assert second["ok"]
        for key in ("margin", "separation"):
            assert second[key] == pytest.approx(first[key], rel=1e-12)

    def test_deterministic(self, cert):
        assert Z.dumps(Z.certificate_to_dict(cert)) == Z.dumps(Z.certificate_to_dict(cert))

    def test_raw_checker_agrees_with_object_margin(self, cert):
        raw = Z.check_certificate(Z.certificate_to_dict(cert))
        assert raw["margin"] == pytest.approx(cert.margin, rel=1e-9)

    def test_tampered_word_rejected(self, cert):
        d = copy.deepcopy(Z.certificate_to_dict(cert))
        d["word"] = [[0, d["word"][0][1] + 1]]
        assert not Z.check_certificate(d)["ok"]

    def test_tampered_point_rejected(self, cert):
        d = copy.deepcopy(Z.certificate_to_dict(cert))
        d["q"][0][0] += 1e-6
        assert not Z.check_certificate(d)["ok"]


def test_bidisk_checker_requires_diagonal():
    d = Z.certificate_to_dict(S.certify_bidisk(phi(0.3), phi(0.6)))
    d["disc"]["g"] = Z.encode_auto(phi(0.2))
    with pytest.raises(ParseError):
        Z.check_certificate(d)


def test_non_unique_disc_rejected():
    d = Z.certificate_to_dict(S.certify_bidisk(phi(0.3), phi(0.6)))
    d["disc"]["xi"] = [0.5, 0.0]
    assert not Z.check_certificate(d)["ok"]


class TestValues:
    @given(disk_autos())
    def test_disk_auto(self, g):
        back = Z.decode_auto(json.loads(json.dumps(Z.encode_auto(g))))
        assert m1.projective_distance(back.matrix, g.matrix) < 1e-13

    def test_halfplane_and_bidisk(self):
        f = BidiskAuto(phi(0.4), H.from_coefficients(2.0, 1.0, 0.0, 0.5))
        back = Z.decode_auto(Z.encode_auto(f))
        p = np.array([0.1 + 0.2j, -0.3j])
        assert np.max(np.abs(back(p) - f(p))) < 1e-14

    def test_proj2(self):
        f = siegel_parabolic_shear()
        back = Z.decode_auto(Z.encode_auto(f))
        assert back.domain == "siegel"
        assert np.max(np.abs(back((0.5, 2j)) - f((0.5, 2j)))) < 1e-14

    @pytest.mark.parametrize("disc", [
        D.HorizontalLine(0.1), D.SiegelGeodesic(1.0, -0.5 - 2j), D.VerticalLine(1.0),
        D.BallLine((0.1, 0.2j), (1.0, 0.5)), D.BidiskGraph(), D.BidiskGraph(phi(0.3), 1.0, None, True),
    ], ids=lambda d: type(d).__name__)
    def test_disc(self, disc):
        back = Z.decode_disc(Z.loads(Z.dumps(Z.encode_disc(disc))))
        assert type(back) is type(disc)
        t = np.array([0.0, 0.3, -0.2j])
        assert np.max(np.abs(back.point(t) - disc.point(t))) < 1e-14

    def test_presentation(self):
        P = G.Presentation((phi(0.5), m1.DiskAuto.rotation(1.0)), ("a", "b"), "disk")
        back = Z.decode_presentation(Z.encode_presentation(P))
        assert back.labels == ("a", "b") and back.kind == "disk"
        w = G.Word(((0, 2), (1, -1)))
        assert abs(back.evaluate(w)(0.1j) - P.evaluate(w)(0.1j)) < 1e-14

    def test_negative_zero_dropped(self):
        assert Z.dumps(Z.encode(-0.0)) == Z.dumps(Z.encode(0.0))

    def test_complex_encoding(self):
        assert Z.encode(1 + 2j) == [1.0, 2.0]
        assert Z.decode_complex([1.0, 2.0]) == 1 + 2j
        assert Z.decode_complex(3) == 3


class TestBadInput:
    def test_invalid_json(self):
        with pytest.raises(ParseError):
            Z.loads("{not json")

    @pytest.mark.parametrize("blob", [{"kind": "disk"}, {"kind": "nope"}, {"kind": "halfplane", "coefficients": [1, 2]}])
    def test_bad_auto(self, blob):
        with pytest.raises(ParseError):
            Z.decode_auto(blob)

    def test_bad_disc(self):
        with pytest.raises(ParseError):
            Z.decode_disc({"variant": "Circle"})

    def test_bad_complex(self):
        with pytest.raises(ParseError):
            Z.decode_complex([1, 2, 3])

    def test_wrong_format(self):
        d = Z.certificate_to_dict(S.certify_siegel_parabolic(1.0))
        d["format"] = "other/9"
        with pytest.raises(ParseError):
            Z.check_certificate(d)
        with pytest.raises(ParseError):
            Z.certificate_from_dict(d)

    def test_missing_field(self):
        d = Z.certificate_to_dict(S.certify_siegel_parabolic(1.0))
        del d["p"]
        with pytest.raises(ParseError):
            Z.certificate_from_dict(d)

    def test_unencodable(self):
        with pytest.raises(TypeError):
            Z.encode(object())
