import json
import subprocess
import sys
from pathlib import Path

import pytest

from ndepth import fixtures
from ndepth.cli import main
from ndepth.document import DocumentError, dumps, parse_document, parse_input, to_dict

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- documents -------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_shipped_fixtures_round_trip(name):
    doc = parse_input(fixtures.json_path(name))
    assert doc.presentation.kind == fixtures.get(name).kind
    again = parse_document(json.loads(dumps(doc)))
    assert again == doc
    assert to_dict(fixtures.get(name)) == to_dict(doc)


def test_three_assoc_has_four_basis_elements():
    assert parse_input(fixtures.json_path("three_assoc")).presentation.space.dim == 4


def _doc(**over):
    d = {
        "space": [["a", 0], ["b", 1]],
        "operations": {"m1": [{"in": ["a"], "out": {"b": "1/3"}}]},
        "declared": {"kind": "ncomplex", "N": 2},
    }
    d.update(over)
    return d


def test_exact_coefficient():
    doc = parse_document(_doc())
    assert str(doc.presentation.diff("a")["b"]) == "1/3"


def test_duplicate_basis_name():
    with pytest.raises(DocumentError, match="'a'"):
        parse_document(_doc(space=[["a", 0], ["a", 1]]))


def test_unknown_basis_name():
    with pytest.raises(DocumentError, match="operations.m1"):
        parse_document(_doc(operations={"m1": [{"in": ["z"], "out": {"b": 1}}]}))


def test_inhomogeneous_coefficient_cites_degrees():
    with pytest.raises(DocumentError, match=r"deg\(a\)=0"):
        parse_document(_doc(operations={"m1": [{"in": ["a"], "out": {"a": 1}}]}))


def test_float_coefficient_refused():
    with pytest.raises(DocumentError, match="float"):
        parse_document(_doc(operations={"m1": [{"in": ["a"], "out": {"b": 0.5}}]}))


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{ not json")
    with pytest.raises(DocumentError, match="malformed JSON"):
        parse_input(p)


def test_bad_kind():
    with pytest.raises(DocumentError, match="declared.kind"):
        parse_document(_doc(declared={"kind": "lie", "N": 2}))


# -- command line ------------------------------------------------------------------


@pytest.mark.parametrize(
    "golden,argv",
    [
        ("mc_2_2.json", ["mc", "-N", "2", "-M", "2", "--oracle"]),
        ("trees_2_2_1.json", ["trees", "--leaves", "2", "--unary", "2", "--binary", "1"]),
        ("kapranov_point.json", ["cohomology", "fixture:point", "--complex"]),
        ("check_chain3.json", ["check", "fixture:chain3"]),
        ("check_three_assoc.json", ["check", "fixture:three_assoc", "--both"]),
    ],
)
def test_json_golden(capsys, golden, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    got = json.loads(out)
    assert got["schema_version"] == 1
    assert got == json.loads((GOLDEN / golden).read_text())


def test_check_three_assoc_text(capsys):
    code, out, _ = run(capsys, "check", "fixture:three_assoc", "--both")
    assert code == 0
    assert "corestriction N=3: PASS" in out
    assert "proper (corestriction fails at N-1): True" in out
    assert "strict δ^3" in out


def test_check_strict_only_is_negative(capsys):
    code, _, _ = run(capsys, "check", "fixture:three_assoc", "--strict")
    assert code == 1


def test_check_from_path(capsys):
    code, _, _ = run(capsys, "check", str(fixtures.json_path("dual_numbers")), "--both")
    assert code == 0


def test_mc_text(capsys):
    code, out, _ = run(capsys, "mc", "-N", "2", "-M", "2", "--oracle")
    assert code == 0
    assert "c((1),2) = 1" in out and "c((0,0),2) = 1" in out
    assert "oracle: EQUAL" in out


def test_mc_different_is_exit_one(capsys):
    code, out, _ = run(capsys, "mc", "-N", "3", "-M", "4", "--oracle")
    assert code == 1 and "DIFFERENT" in out


def test_trees_text(capsys):
    code, out, _ = run(capsys, "trees", "--leaves", "2", "--unary", "2", "--binary", "1")
    assert code == 0
    assert out.splitlines()[0] == "6 trees"


def test_trees_needs_a_profile(capsys):
    code, _, err = run(capsys, "trees", "--leaves", "2")
    assert code == 2 and "input error" in err


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/x.json")
    assert code == 2 and "No such file" in err


def test_unknown_fixture(capsys):
    code, _, err = run(capsys, "check", "fixture:nope")
    assert code == 2 and "unknown fixture" in err


def test_cohomology_and_deform(capsys):
    code, out, _ = run(capsys, "cohomology", "fixture:unital1", "-N", "2", "-M", "3")
    assert code == 0 and "H^2_(2,3) of unital1: 0" in out
    code, out, _ = run(capsys, "deform", "fixture:idempotent_null", "-N", "2", "-M", "3", "--search-proper", "--full", "2")
    assert code == 0 and "PASS" in out


def test_deform_with_cochain_file(capsys, tmp_path):
    p = tmp_path / "f.json"
    # shifted cochain e,1 -> 1 on A[1]: not a cocycle
    p.write_text(json.dumps({"h": {"1": {"2": [{"in": ["e", "1"], "out": {"1": "1"}}]}}}))
    code, out, _ = run(capsys, "deform", "fixture:dual_numbers", "-N", "2", "-M", "2", "--full", "2", "--cochain", str(p))
    assert code == 1 and "FAIL" in out
    code, _, err = run(capsys, "deform", "fixture:dual_numbers", "-N", "2", "-M", "2", "--full", "2")
    assert code == 2


def test_operad_series_endalg(capsys):
    assert run(capsys, "operad", "ndga", "-N", "2", "--max", "3")[0] == 0
    assert run(capsys, "operad", "assN", "-N", "3", "--max", "4")[0] == 0
    assert run(capsys, "series", "ndgla", "-N", "2", "--order", "4")[0] == 0
    assert run(capsys, "series", "ndga-super", "-N", "2", "--order", "3")[0] == 1
    code, out, _ = run(capsys, "endalg", "fixture:chain3")
    assert code == 0 and "nilpotency order of d: 5" in out


def test_endalg_rejects_non_complex(capsys):
    code, _, err = run(capsys, "endalg", "fixture:three_assoc")
    assert code == 2


def test_console_script_exit_code():
    r = subprocess.run([sys.executable, "-m", "ndepth.cli", "mc", "-N", "2", "-M", "3", "--oracle", "--json"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["oracle"]["verdict"] == "EQUAL"
