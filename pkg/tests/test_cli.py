import json
import subprocess
import sys

import numpy as np
import pytest

from circummass import generators as gen
from circummass.cli import main
from circummass.io import dump_chain, parse_chain, parse_report, serialize_report

SQUARE = {"polygon": [[0, 0], [1, 0], [1, 1], [0, 1]]}


@pytest.fixture
def write(tmp_path):
    def _write(name, content):
        p = tmp_path / name
        if isinstance(content, (dict, list)):
            content = json.dumps(content)
        p.write_bytes(content if isinstance(content, bytes) else content.encode())
        return str(p)

    return _write


def run(capsysbinary, *argv):
    code = main(list(argv))
    out = capsysbinary.readouterr().out
    return code, out


class TestCenters:
    def test_ccm_of_square_boundary(self, capsysbinary, write):
        code, out = run(capsysbinary, "ccm", write("sq.json", SQUARE))
        assert code == 0
        r = parse_report(out)
        assert r.status == "pass" and r.results["filled"]
        np.testing.assert_allclose(r.results["point"], [0.5, 0.5], atol=1e-15)

    def test_centroid_of_cube(self, capsysbinary, write):
        code, out = run(capsysbinary, "centroid", write("cube.off", gen.CUBE_OFF))
        assert code == 0
        np.testing.assert_allclose(parse_report(out).results["point"], [0.5] * 3, atol=1e-15)

    def test_euler_needs_t(self, capsysbinary, write):
        with pytest.raises(SystemExit) as exc:
            main(["euler", write("sq.json", SQUARE)])
        assert exc.value.code == 2

    def test_euler(self, capsysbinary, write):
        quad = {"polygon": [[0, 0], [2, 0], [2, 1], [0, 3]]}
        path = write("q.json", quad)
        _, o = run(capsysbinary, "ccm", path)
        _, m = run(capsysbinary, "centroid", path)
        code, e = run(capsysbinary, "euler", path, "--t", "0.25")
        assert code == 0
        o, m, e = (np.array(parse_report(x).results["point"]) for x in (o, m, e))
        np.testing.assert_allclose(e, 0.75 * o + 0.25 * m, atol=1e-13)

    def test_apex_option(self, capsysbinary, write):
        code, out = run(capsysbinary, "ccm", write("sq.json", SQUARE), "--apex", "0.2,0.9")
        assert code == 0
        np.testing.assert_allclose(parse_report(out).results["point"], [0.5, 0.5], atol=1e-14)

    def test_figure(self, capsysbinary, write, tmp_path):
        fig = tmp_path / "sq.png"
        code, _ = run(capsysbinary, "ccm", write("sq.json", SQUARE), "--figure", str(fig))
        assert code == 0 and fig.stat().st_size > 0

    def test_open_chain_is_input_error(self, capsysbinary, write):
        doc = {"vertices": [[0, 0], [1, 0], [1, 1]], "simplices": [{"vertices": [0, 1]}, {"vertices": [1, 2]}]}
        code, out = run(capsysbinary, "ccm", write("open.json", doc))
        assert code == 2 and parse_report(out).status == "error"


class TestChainCommands:
    def test_fill_round_trip(self, capsysbinary, write):
        code, out = run(capsysbinary, "fill", write("sq.json", SQUARE), "--apex", "0.5,0.5")
        assert code == 0
        r = parse_report(out)
        assert r.results["boundary_matches"]
        assert len(r.results["chain"]["simplices"]) == 4
        filled = write("filled.json", r.results["chain"])
        code, out = run(capsysbinary, "boundary", filled)
        b = parse_chain(json.dumps(parse_report(out).results["chain"]))
        assert b.terms == parse_chain(json.dumps(SQUARE)).terms

    def test_is_cycle_exit_codes(self, capsysbinary, write):
        assert run(capsysbinary, "is-cycle", write("sq.json", SQUARE))[0] == 0
        doc = {"vertices": [[0, 0], [1, 0]], "simplices": [{"vertices": [0, 1]}]}
        code, out = run(capsysbinary, "is-cycle", write("seg.json", doc))
        assert code == 1 and parse_report(out).status == "fail"


class TestPow:
    def test_closed_forms(self, capsysbinary, write):
        doc = {"vertices": [[0, 0], [1, 0], [0.5, 3**0.5 / 2]], "simplices": [{"vertices": [0, 1, 2]}]}
        code, out = run(capsysbinary, "pow", write("t.json", doc))
        assert code == 0
        row = parse_report(out).results["terms"][0]
        assert abs(row["pow_edges"] + 3**0.5 / 16) <= 1e-12

    def test_monte_carlo(self, capsysbinary, write):
        doc = {"vertices": [[0.0], [1.0]], "simplices": [{"vertices": [0, 1]}]}
        code, out = run(capsysbinary, "pow", write("s.json", doc), "--oracle", "mc", "--samples", "200000", "--seed", "1")
        assert code == 0
        row = parse_report(out).results["terms"][0]
        assert row["mc_agrees"] and row["mc_z"] <= 4

    def test_mc_requires_seed(self, capsysbinary, write):
        with pytest.raises(SystemExit) as exc:
            main(["pow", write("s.json", SQUARE), "--oracle", "mc"])
        assert exc.value.code == 2


class TestSphere:
    def test_projected_cube(self, capsysbinary, write):
        cube = parse_chain(gen.CUBE_OFF)
        centered = type(cube)(cube.vertices * 2 - 1, cube.terms)
        code, out = run(capsysbinary, "sphere-ccm", write("c.json", dump_chain(centered)), "--project")
        assert code == 0
        r = parse_report(out)
        assert r.results["is_cycle"] and r.results["cycle_residual"] <= 1e-9

    def test_unprojected_rejected(self, capsysbinary, write):
        code, _ = run(capsysbinary, "sphere-ccm", write("cube.off", gen.CUBE_OFF))
        assert code == 2

    def test_identity(self, capsysbinary, write):
        doc = {"vertices": np.eye(3).tolist(), "simplices": [{"vertices": [0, 1, 2]}]}
        code, out = run(capsysbinary, "sphere-identity", write("o.json", doc))
        assert code == 0
        row = parse_report(out).results["terms"][0]
        assert abs(row["lifted_weight"] - 3**0.5 / 12) <= 1e-12
        assert abs(row["spherical_form"] - np.pi / 12) <= 1e-12


class TestVerify:
    def test_lemma(self, capsysbinary):
        code, out = run(capsysbinary, "verify", "lemma", "--dim", "3", "--trials", "1000", "--seed", "7")
        assert code == 0
        r = parse_report(out)
        assert r.results["trials"] == 1000 and r.results["failures"] == 0

    def test_same_seed_same_bytes(self, capsysbinary):
        a = run(capsysbinary, "verify", "cycle-moments", "--trials", "20", "--seed", "3")[1]
        b = run(capsysbinary, "verify", "cycle-moments", "--trials", "20", "--seed", "3")[1]
        c = run(capsysbinary, "verify", "cycle-moments", "--trials", "20", "--seed", "4")[1]
        assert a == b and a != c

    def test_tiny_tolerance_fails(self, capsysbinary):
        code, out = run(capsysbinary, "verify", "lemma", "--trials", "20", "--seed", "1", "--tol", "1e-30")
        assert code == 1 and parse_report(out).status == "fail"

    def test_histogram(self, capsysbinary, tmp_path):
        fig = tmp_path / "h.png"
        code, _ = run(capsysbinary, "verify", "minkowski", "--trials", "5", "--seed", "1", "--figure", str(fig))
        assert code == 0 and fig.stat().st_size > 0

    def test_bad_dim(self, capsysbinary):
        assert run(capsysbinary, "verify", "lemma", "--dim", "x", "--seed", "1")[0] == 2


class TestInputErrors:
    def test_parse_error(self, capsysbinary, write):
        code, out = run(capsysbinary, "ccm", write("bad.json", '{"polygon": [[0, 0],'))
        assert code == 2
        assert "error" in parse_report(out).results

    def test_missing_file(self, capsysbinary, tmp_path):
        assert run(capsysbinary, "ccm", str(tmp_path / "nope.json"))[0] == 2

    def test_report_is_stable_bytes(self, capsysbinary, write):
        _, out = run(capsysbinary, "ccm", write("sq.json", SQUARE))
        assert serialize_report(parse_report(out)) == out


def test_module_entry_point(tmp_path):
    p = tmp_path / "sq.json"
    p.write_text(json.dumps(SQUARE))
    proc = subprocess.run([sys.executable, "-m", "circummass", "ccm", str(p)], capture_output=True)
    assert proc.returncode == 0
    assert parse_report(proc.stdout).status == "pass"


class TestArgumentChecks:
    def test_negative_seed(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "lemma", "--seed", "-1"])
        assert exc.value.code == 2

    def test_zero_trials(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "lemma", "--seed", "1", "--trials", "0"])
        assert exc.value.code == 2

    def test_too_few_samples(self, capsysbinary, write):
        doc = {"vertices": [[0.0], [1.0]], "simplices": [{"vertices": [0, 1]}]}
        code, out = run(capsysbinary, "pow", write("s.json", doc), "--oracle", "mc", "--samples", "10", "--seed", "1")
        assert code == 2 and parse_report(out).status == "error"

    @pytest.mark.parametrize("suite,dim", [("lemma", "1"), ("equilateral-polygon", "2"), ("inscribed", "1")])
    def test_dimension_below_suite_minimum(self, capsysbinary, suite, dim):
        code, out = run(capsysbinary, "verify", suite, "--dim", dim, "--seed", "1", "--trials", "2")
        assert code == 2 and parse_report(out).status == "error"
