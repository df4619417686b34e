import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circummass import generators as gen
from circummass.chain import Chain, canonicalize
from circummass.errors import ParseError, ValidationError
from circummass.io import (
    Report,
    dump_chain,
    dumps,
    format_float,
    parse_chain,
    parse_off,
    parse_report,
    serialize_report,
)


def doc(**kw):
    return json.dumps(kw)


class TestFormatFloat:
    def test_integers_stay_floats(self):
        assert format_float(1.0) == "1.0"
        assert format_float(-0.0) == "-0.0"

    def test_seventeen_digits(self):
        assert format_float(0.1) == "0.10000000000000001"

    def test_exponent(self):
        assert format_float(1e-300) == "1e-300"
        assert isinstance(json.loads(format_float(1e-300)), float)

    @settings(max_examples=500)
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_round_trip(self, x):
        assert float(format_float(x)) == x
        assert math.copysign(1, float(format_float(x))) == math.copysign(1, x)

    def test_non_finite(self):
        assert json.loads(dumps([math.inf, -math.inf]))[0] == math.inf


class TestChainDocuments:
    def test_polygon_shorthand(self):
        c = parse_chain(doc(polygon=[[0, 0], [1, 0], [1, 1], [0, 1]]))
        assert c.dim == 1 and len(c) == 4

    def test_explicit(self):
        c = parse_chain(doc(vertices=[[0, 0], [1, 0], [0, 1]], simplices=[{"vertices": [0, 2, 1], "coefficient": 2}]))
        assert c.terms == (((0, 1, 2), -2),)

    def test_default_coefficient(self):
        c = parse_chain(doc(vertices=[[0, 0], [1, 0]], simplices=[{"vertices": [0, 1]}]))
        assert c.terms == (((0, 1), 1),)

    def test_empty_chain_needs_dim(self):
        with pytest.raises(ValidationError):
            parse_chain(doc(vertices=[[0, 0]], simplices=[]))
        assert parse_chain(doc(vertices=[[0, 0]], simplices=[], intrinsic_dim=2)).is_empty()

    @pytest.mark.parametrize(
        "bad",
        [
            dict(vertices=[[0, 0], [1, 0]], simplices=[{"vertices": [0, 1], "coefficient": 0}]),
            dict(vertices=[[0, 0], [1, 0]], simplices=[{"vertices": [0, 1], "coefficient": 1.5}]),
            dict(vertices=[[0, 0], [1, 0]], simplices=[{"vertices": [0, 0]}]),
            dict(vertices=[[0, 0], [1, 0]], simplices=[{"vertices": [0, 5]}]),
            dict(vertices=[[0, 0], [1]], simplices=[{"vertices": [0, 1]}]),
            dict(vertices=[[0, 0], [1, 0]], simplices=[{"vertices": [0, 1]}], extra=1),
            dict(polygon=[[0, 0], [1, 0], [0, 1]], vertices=[[0, 0]]),
            dict(vertices=[[0, 0], [1, 0], [0, 1]], simplices=[{"vertices": [0, 1]}, {"vertices": [0, 1, 2]}]),
            dict(vertices=[[0, 0], [1, 0]], simplices=[{"vertices": [0, 1]}], dimension=3),
        ],
    )
    def test_rejected(self, bad):
        with pytest.raises(ValidationError):
            parse_chain(doc(**bad))

    def test_bad_json_has_position(self):
        with pytest.raises(ParseError) as exc:
            parse_chain('{"vertices": [[0, 0],\n  [1, 0]]\n  "simplices": []}')
        assert exc.value.line == 3

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        c = gen.random_convex_polytope(rng, 3)
        assert parse_chain(dump_chain(c)) == c
        assert dump_chain(parse_chain(dump_chain(c))) == dump_chain(c)

    def test_round_trip_combinatorial(self):
        c = Chain(np.zeros((3, 2)), (((0, 1, 2), 1),), combinatorial=True)
        back = parse_chain(dump_chain(c))
        assert back.combinatorial and back == c


class TestOff:
    def test_cube(self):
        c = parse_chain(gen.CUBE_OFF)
        assert len(c) == 12 and c.dim == 2 and c.ambient_dim == 3

    def test_counts_on_header_line(self):
        c = parse_off("OFF 3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")
        assert c.terms == (((0, 1, 2), 1),)

    def test_comments(self):
        c = parse_chain("# a triangle\nOFF\n3 1 0 # counts\n0 0 0\n1 0 0\n0 1 0\n3 0 2 1\n")
        assert c.terms == (((0, 1, 2), -1),)

    def test_truncated_reports_line(self):
        with pytest.raises(ParseError) as exc:
            parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n")
        assert exc.value.line == 4

    def test_bad_vertex_line(self):
        with pytest.raises(ParseError) as exc:
            parse_off("OFF\n3 1 0\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n")
        assert exc.value.line == 4

    def test_face_index_out_of_range(self):
        with pytest.raises(ValidationError, match="line 6"):
            parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n")

    def test_unsupported_variant(self):
        with pytest.raises(ParseError):
            parse_off("COFF\n0 0 0\n")


class TestReports:
    def report(self):
        return Report("ccm", {"input": "x.json", "apex": None},
                      {"point": np.array([0.1, 1 / 3]), "weight": 2.0, "ok": True}, "pass", {"tol": 1e-9})

    def test_deterministic(self):
        assert serialize_report(self.report()) == serialize_report(self.report())

    def test_sorted_keys(self):
        text = serialize_report(self.report()).decode()
        keys = [line.split('"')[1] for line in text.splitlines() if line.startswith('  "')]
        assert keys == sorted(keys)

    def test_round_trip_bit_exact(self):
        data = serialize_report(self.report())
        back = parse_report(data)
        assert back.results["point"][1] == 1 / 3
        assert serialize_report(back) == data

    def test_status_checked(self):
        with pytest.raises(ValueError):
            Report("x", {}, {}, "ok", {})

    def test_exit_code(self):
        assert self.report().exit_code == 0
        r = self.report()
        r.status = "fail"
        assert r.exit_code == 1

    def test_parse_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse_report('{\n  "command": }')
        assert (exc.value.line, exc.value.column) == (2, 14)


def test_canonical_chain_equality_ignores_listing():
    a = Chain(np.eye(3), (((0, 1, 2), 1),))
    b = Chain(np.eye(3), (((1, 0, 2), -1),))
    assert canonicalize(a) == canonicalize(b)
