import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from homdigraph import cli
from homdigraph.digraph import Report, VerificationError

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def fx(name):
    return str(FIXTURES / name)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


GOLDEN_CASES = [
    ("digraph_ordered_circle.json", ["digraph", fx("ordered_circle.doc"), "--witnesses", "--output", "structured"]),
    ("digraph_ordered_circle.txt", ["digraph", fx("ordered_circle.doc")]),
    ("digraph_torus_table.json", ["digraph", fx("torus.doc"), "--table", "--output", "structured"]),
    ("kunneth_dircircle_ordcircle.json",
     ["kunneth-check", fx("dircircle.doc"), fx("ordcircle.doc"), "--output", "structured"]),
    ("homology_ordered_circle_rel_ends_q.json",
     ["homology", fx("ordered_circle_rel_ends.doc"), "--field", "rational", "--output", "structured"]),
    ("map_torus_to_ordered.json",
     ["map-check", fx("torus.doc"), fx("ordcircle.doc"), fx("torus_to_ordered.map.json"), "--output", "structured"]),
]


@pytest.mark.parametrize("golden, argv", GOLDEN_CASES, ids=[g for g, _ in GOLDEN_CASES])
def test_golden_outputs(golden, argv):
    code, out, err = run(*argv)
    assert code == 0, err
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_digraph_structured_content():
    code, out, _ = run("digraph", fx("ordered_circle.doc"), "--witnesses", "--output", "structured")
    tree = json.loads(out)
    assert code == 0
    assert tree["betti"] == {"0": 1, "1": 1}
    assert tree["defining_dims"] == {"0": 1, "1": 2}
    pointing = {(p["source"], p["target"]): p["points"] for p in tree["pointing"]}
    assert pointing == {("h0.0", "h0.0"): True, ("h0.0", "h1.0"): True,
                        ("h1.0", "h0.0"): True, ("h1.0", "h1.0"): False}
    assert len(tree["witnesses"]) >= 1 and "justification" in tree


@pytest.mark.parametrize("cmd", [
    ["digraph", fx("torus.doc"), "--output", "structured"],
    ["kunneth-check", fx("dircircle.doc"), fx("ordcircle.doc"), "--output", "structured"],
])
def test_output_is_independent_of_threads_and_seed(cmd):
    base = run(*cmd)[1]
    assert run(*cmd)[1] == base
    assert run(*cmd, "--threads", "4")[1] == base
    assert run(*cmd, "--seed", "3", "--threads", "2")[1] == base


def test_successful_checks_exit_zero():
    assert run("validate", fx("ordered_circle.doc"))[0] == 0
    assert run("digraph-pair", fx("ordered_circle_rel_ends.doc"))[0] == 0
    assert run("connecting-check", fx("ordered_circle_rel_ends.doc"))[0] == 0
    assert run("coproduct", fx("ordcircle.doc"), fx("dircircle.doc"), "--check")[0] == 0
    assert run("relative-kunneth-check", fx("interval_rel_open_end.doc"), fx("point.doc"))[0] == 0
    code, out, _ = run("oracle-compare", fx("ordered_circle_wedge.doc"), "--field", "rational", "--output", "structured")
    assert code == 0 and json.loads(out)["result"] == "identical"
    code, out, _ = run("fixtures", "ordered_circle", "torus", "--check", "--output", "structured")
    assert code == 0
    facts = json.loads(out)["fixtures"]
    assert [f["name"] for f in facts] == ["ordered_circle", "torus"]
    assert all(x["holds"] for f in facts for x in f["facts"])


def test_excision_exit_codes(tmp_path):
    doc = json.loads((FIXTURES / "ordered_circle.doc").read_text())
    doc["subset"] = ["m", "l", "r"]
    p = tmp_path / "oc_open.doc"
    p.write_text(json.dumps(doc))
    assert run("excision-check", p, "--excise", "m")[0] == 0
    doc["subset"] = ["m", "l"]
    p.write_text(json.dumps(doc))
    code, _, err = run("excision-check", p, "--excise", "m")
    assert code == 2 and "interior" in err


def test_input_errors_exit_two(tmp_path):
    code, _, err = run("digraph", tmp_path / "missing.doc")
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.doc"
    bad.write_text('{"name": "x",\n "points": [}')
    code, _, err = run("validate", bad)
    assert code == 2 and f"{bad}:2:" in err
    notT0 = tmp_path / "cycle.doc"
    notT0.write_text(json.dumps({"name": "c", "points": ["a", "b"], "topology": {"relations": [["a", "b"], ["b", "a"]]},
                                 "direction": {"mode": "discrete"}}))
    assert run("validate", notT0)[0] == 2
    assert run("digraph", fx("ordered_circle.doc"), "--field", "gf:4")[0] == 2
    assert run("digraph", fx("ordered_circle.doc"), "--threads", "0")[0] == 2
    assert run("digraph-pair", fx("ordered_circle.doc"))[0] == 2
    assert run("oracle-compare", fx("torus.doc"))[0] == 2
    assert run("wedge", fx("ordcircle.doc"), "t", fx("ordcircle.doc"), "m")[0] == 2
    assert run("no-such-command")[0] == 2


def test_failed_verification_exits_one(monkeypatch):
    monkeypatch.setattr(cli, "verify_kunneth", lambda *a, **k: Report("kunneth", False, {"isomorphism": False}))
    code, out, _ = run("kunneth-check", fx("ordcircle.doc"), fx("point.doc"), "--output", "structured")
    assert code == 1 and json.loads(out)["passed"] is False

    def boom(*a, **k):
        raise VerificationError("induced map is not a morphism")

    monkeypatch.setattr(cli, "verify_connecting", boom)
    code, _, err = run("connecting-check", fx("ordered_circle_rel_ends.doc"))
    assert code == 1 and "verification failed" in err


def test_constructions_write_documents(tmp_path):
    out = tmp_path / "prod.doc"
    code, text, _ = run("product", fx("dircircle.doc"), fx("ordcircle.doc"), "--out", out, "--output", "structured")
    assert code == 0 and len(json.loads(text)["points"]) == 16
    assert run("digraph", out)[0] == 0
    w = tmp_path / "wedge.doc"
    assert run("wedge", fx("ordcircle.doc"), "m", fx("ordcircle.doc"), "m", "--out", w)[0] == 0
    assert run("validate", w)[0] == 0
    c = tmp_path / "sum.doc"
    assert run("coproduct", fx("ordcircle.doc"), fx("point.doc"), "--out", c)[0] == 0
    code, text, _ = run("homology", c, "--output", "structured")
    assert json.loads(text)["betti"] == {"0": 2, "1": 1}


def test_fixture_export_matches_repository(tmp_path):
    assert run("fixtures", "--write", tmp_path)[0] == 0
    for p in tmp_path.glob("*.doc"):
        assert p.read_text() == (FIXTURES / p.name).read_text()


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "homdigraph", "validate", fx("point.doc")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "point" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "homdigraph", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "0.1.0"
