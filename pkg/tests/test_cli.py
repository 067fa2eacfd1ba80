"""The pfc command line and the PFC interchange format."""

import io
import json
import math
import os

import pytest

from pfcomplex import build_complex, euler_characteristic, flat_torus3
from pfcomplex.cli import run_command
from pfcomplex.metric import MetricComplex
from pfcomplex.pfcio import PartialMetricError, PfcSyntaxError, parse, serialize

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, name)


def run(argv):
    out = io.StringIO()
    code = run_command(argv, out)
    return code, out.getvalue()


# --- serialization -----------------------------------------------------------

def test_serialize_solid_triangle_is_seven_lines():
    c = build_complex([(0, 1, 2)])
    mc = MetricComplex(c, {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0})
    text = serialize(mc)
    assert len(text.splitlines()) == 7
    assert text.splitlines()[0] == "pfc 1"
    assert "s 0 1 2" in text


def test_serialize_empty_complex():
    text = serialize(MetricComplex(build_complex([]), {}))
    assert text.splitlines() == ["pfc 1", "dim 0", "vertices 0"]


def test_round_trip_torus3_byte_identical():
    text = serialize(flat_torus3(3))
    assert serialize(parse(text)) == text


def test_parse_applies_face_closure():
    mc = parse("pfc 1\ndim 2\nvertices 3\ns 0 1 2\n")
    assert len(mc.complex) == 7


def test_parse_partial_metric_rejected():
    doc = "pfc 1\ndim 1\nvertices 3\ns 0 1\ns 1 2\nl 0 1 1.0\n"
    with pytest.raises(PartialMetricError):
        parse(doc)


def test_parse_unknown_directive_reports_line():
    with pytest.raises(PfcSyntaxError) as err:
        parse("pfc 1\ndim 1\nwibble 3\n")
    assert err.value.line == 3


def test_parse_rejects_bad_header():
    with pytest.raises(PfcSyntaxError):
        parse("pfc 99\ndim 1\n")


def test_parse_validates_realizability():
    from pfcomplex.metric import MetricError

    doc = ("pfc 1\ndim 2\nvertices 3\ns 0 1 2\n"
           "l 0 1 1.0\nl 0 2 1.0\nl 1 2 5.0\n")
    with pytest.raises(MetricError):
        parse(doc)
    assert parse(doc, validate=False).length(1, 2) == 5.0


def test_fixture_example1_euler():
    mc = parse(open(fixture("example1.pfc"), encoding="utf-8").read())
    assert euler_characteristic(mc.complex) == -5


# --- commands ----------------------------------------------------------------

def test_build_torus3_to_stdout():
    code, out = run(["build", "torus3", "3"])
    assert code == 0
    assert out.splitlines()[0] == "pfc 1"


def test_build_deterministic(tmp_path):
    f1, f2 = tmp_path / "a.pfc", tmp_path / "b.pfc"
    assert run(["build", "house", "-o", str(f1)])[0] == 0
    assert run(["build", "house", "-o", str(f2)])[0] == 0
    assert f1.read_text() == f2.read_text()


def test_check_link_cat0_fails_on_interface_fixture():
    code, out = run(["check", "link-cat0", fixture("example1_interfaces.pfc")])
    assert code == 1
    assert "fail" in out
    assert f"{math.pi:.11f}"[:8] in out  # the witness cycle length pi


def test_check_free_faces_house_passes():
    code, out = run(["check", "free-faces", fixture("house.pfc")])
    assert code == 0
    assert "pass" in out


def test_check_gauss_bonnet_requires_surface():
    code, _ = run(["check", "gauss-bonnet", fixture("house.pfc")])
    assert code == 2


def test_check_link_cat0_3dim_is_necessary_only(tmp_path):
    code, out = run(["check", "link-cat0", fixture("torus3.pfc")])
    assert code == 3  # necessary conditions hold; full certification is open
    assert "inconclusive" in out


def test_homology_torus_fixture():
    code, out = run(["homology", fixture("torus3.pfc"), "--ring", "z"])
    assert code == 0
    assert out.strip().splitlines()[0] == "b: 1 3 3 1"


def test_homology_json_fields():
    code, out = run(["homology", fixture("house.pfc"), "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["ranks"] == [1, 0, 0]
    assert payload["ring"] == "z"
    assert payload["reduced"] is False


def test_homology_local():
    code, out = run(["homology", fixture("torus3.pfc"), "--local", "0"])
    assert code == 0
    assert out.strip() == "reduced b: 0 0 1"


def test_lemma13_command(tmp_path):
    jpath = tmp_path / "j.pfc"
    bpath = tmp_path / "b.pfc"
    tet = MetricComplex(build_complex([(0, 1, 2, 3)]),
                        {tuple(e): 1.0 for e in
                         build_complex([(0, 1, 2, 3)]).k_simplices(1)})
    boundary = tet.restrict([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    jpath.write_text(serialize(tet))
    bpath.write_text(serialize(boundary))
    code, out = run(["lemma13", str(jpath), "--b", str(bpath)])
    assert code == 0
    assert "pass" in out

    faces_at_v = tet.restrict([(0, 1, 2), (0, 1, 3), (0, 2, 3)])
    bpath.write_text(serialize(faces_at_v))
    code, out = run(["lemma13", str(jpath), "--b", str(bpath)])
    assert code == 1
    assert "contradiction" in out


def test_report_example1_deterministic():
    code1, out1 = run(["report", "example1"])
    code2, out2 = run(["report", "example1"])
    assert code1 == code2 == 0
    assert out1 == out2
    assert "obstruction reproduced: yes" in out1


def test_report_example1_json():
    code, out = run(["report", "example1", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["obstruction_reproduced"] is True
    assert payload["intrinsic_link_verdict"] == "fail"
    assert payload["override_link_verdict"] == "pass"
    assert payload["intrinsic_shortest_link_cycle"] == pytest.approx(math.pi)


def test_report_example2():
    code, out = run(["report", "example2", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["obstruction_reproduced"] is True
    assert payload["house_free_faces"] == 0
    assert payload["house_betti_z"] == [1, 0, 0]
    assert payload["solid_chain_verdict"] == "contradiction"
    assert payload["glued_b3_z"] == payload["expected_b3"] == \
        2 * payload["house_triangles"]


def test_all_fixtures_round_trip():
    for name in ("example1.pfc", "example1_interfaces.pfc",
                 "house.pfc", "torus3.pfc"):
        text = open(fixture(name), encoding="utf-8").read()
        assert serialize(parse(text)) == text


def test_usage_errors_exit_2():
    assert run(["build"])[0] == 2
    assert run(["check", "nonsense", "x"])[0] == 2
    assert run(["homology", "/nonexistent/file.pfc"])[0] == 2
    assert run(["build", "freegroup"])[0] == 2
