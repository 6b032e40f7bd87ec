import json

import pytest

from subsearch.cli import main
from subsearch.generators import FAMILIES
from subsearch.instances import DocumentError, instance_from_doc, loads, search_from_doc, search_to_doc

from conftest import F3_VALUES

F3_DOC = {"labels": ["1", "2", "3"], "f": {"kind": "tabular", "values": [str(v) for v in F3_VALUES]},
          "g": {"kind": "modular", "weights": ["1/3", "1/3", "1/3"]}}
PATH_DOC = {"root": "r", "edges": [["r", "1", 1], ["1", "2", 1]]}


def write(tmp_path, doc, name="inst.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    return json.loads(out)


@pytest.mark.parametrize("family", FAMILIES)
def test_generated_families_validate(tmp_path, capsys, family):
    path = str(tmp_path / "g.json")
    assert run(capsys, "gen", family, "5", "3", "-o", path)[0] == 0
    code, out, _ = run(capsys, "validate", path)
    assert code == 0 and "valid: True" in out


def test_gen_is_seeded(capsys):
    a = run(capsys, "gen", "coverage", "4", "--seed", "9")[1]
    b = run(capsys, "gen", "coverage", "4", "9")[1]
    assert a == b and a != run(capsys, "gen", "coverage", "4", "10")[1]


def test_search_document_round_trip(tmp_path, capsys):
    run(capsys, "gen", "coverage", "5", "1", "-o", str(tmp_path / "c.json"))
    doc = loads((tmp_path / "c.json").read_text())
    assert search_to_doc(search_from_doc(doc)) == doc


def test_report_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, PATH_DOC)
    a = report(capsys, "solve", path, "--method", "brute")
    b = report(capsys, "solve", path, "--method", "brute")
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b
    assert a["command"] == ["solve", "--method", "brute", "--json"]
    assert a["results"] == {"order": ["1", "2"], "cost": "3/2", "method": "brute"}


def test_mode_override_changes_digest(tmp_path, capsys):
    path = write(tmp_path, PATH_DOC)
    a = report(capsys, "solve", path)
    b = report(capsys, "solve", path, "--mode", "float")
    assert a["digest"] != b["digest"]
    assert isinstance(b["results"]["cost"], float)


def test_solve_methods_agree(tmp_path, capsys):
    run(capsys, "gen", "tree", "6", "2", "-o", str(tmp_path / "t.json"))
    path = str(tmp_path / "t.json")
    costs = {m: report(capsys, "solve", path, "--method", m)["results"]["cost"] for m in ("spd", "brute", "perm")}
    assert len(set(costs.values())) == 1
    rep = report(capsys, "solve", path)
    assert rep["certification"]["within_two"]


def test_density_and_decompose(tmp_path, capsys):
    path = write(tmp_path, F3_DOC)
    rep = report(capsys, "density", path)
    assert rep["results"]["max_density_set"] and rep["results"]["blocks"]
    rep = report(capsys, "decompose", path)
    assert rep["results"]["decomposable"] is False
    assert report(capsys, "decompose", write(tmp_path, PATH_DOC, "p.json"))["results"]["decomposable"]


def test_game_path_tree(tmp_path, capsys):
    path = write(tmp_path, PATH_DOC)
    rep = report(capsys, "game", path)
    assert rep["results"]["value"] == "2" and rep["results"]["hider"] == {"1": "0", "2": "1"}
    cert = rep["certification"]
    assert cert["hider_in_base_polyhedron"] and cert["max_cost"] == "2" and cert["hider_guarantee"] == "2"
    lp = report(capsys, "game", path, "--method", "lp")
    assert lp["results"]["value"] == "2"
    fp = report(capsys, "game", path, "--method", "oracle", "--iters", "20000")
    assert fp["certification"]["lower"] <= 2 <= fp["certification"]["upper"]


def test_game_modular_and_approx(tmp_path, capsys):
    doc = {"labels": ["a", "b"], "f": {"kind": "modular", "weights": [1, 2]}, "g": {"kind": "modular", "weights": [1, 1]}}
    path = write(tmp_path, doc)
    rep = report(capsys, "game", path, "--method", "modular")
    assert rep["results"]["value"] == "7/3" and rep["results"]["hider"] == {"a": "1/3", "b": "2/3"}
    rep = report(capsys, "game", path, "--method", "approx")
    assert rep["certification"]["factor"] == "1"


def test_sched_command(tmp_path, capsys):
    doc = {"jobs": ["a", "b", "c"], "edges": [["a", "c"]], "p": [1, 2, 1], "w": [1, 1, 3]}
    path = write(tmp_path, doc)
    rep = report(capsys, "sched", path, "--method", "brute")
    assert rep["results"]["feasible"] and rep["results"]["order"] == ["a", "c", "b"]
    doc = {"p": [1, 1], "w": [1, 1], "h": {"kind": "log", "param": 1}}
    rep = report(capsys, "sched", write(tmp_path, doc, "n.json"))
    assert rep["certification"]["noprec_ratio"] == "3/2"  # total p = 2, so 1 - kappa = 1/3


def test_text_output(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", write(tmp_path, PATH_DOC))
    assert code == 0 and "cost: 3/2" in out


# --- exit codes -------------------------------------------------------------------

def test_bad_json_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "validate", write(tmp_path, '{"f": [1,\n 2,'))
    assert code == 2 and "line 2" in err


def test_missing_file_exit_2(tmp_path, capsys):
    assert run(capsys, "solve", str(tmp_path / "nope.json"))[0] == 2


def test_validation_failure_exit_2(tmp_path, capsys):
    doc = dict(F3_DOC, g={"kind": "tabular", "values": [0, 1, 1, 1, 1, 1, 1, 1]})  # not supermodular
    code, _, err = run(capsys, "solve", write(tmp_path, doc))
    assert code == 2 and "witness" in err
    code, out, _ = run(capsys, "validate", write(tmp_path, doc))
    assert code == 2 and "valid: False" in out


def test_capacity_exit_3(tmp_path, capsys):
    path = str(tmp_path / "big.json")
    run(capsys, "gen", "modular", "17", "0", "-o", path)
    assert run(capsys, "solve", path, "--method", "brute")[0] == 3
    assert run(capsys, "solve", path)[0] == 0


def test_not_decomposable_exit_4(tmp_path, capsys):
    path = write(tmp_path, F3_DOC)
    assert run(capsys, "solve", path, "--method", "spd")[0] == 4
    assert run(capsys, "game", path)[0] == 4


def test_unknown_family_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "lattice", "4"])
    assert exc.value.code == 2


def test_document_errors():
    with pytest.raises(DocumentError):
        instance_from_doc({"labels": ["a"]})
    with pytest.raises(DocumentError):
        instance_from_doc({"labels": ["a"], "f": {"kind": "mystery"}, "g": {"kind": "modular", "weights": [1]}})
    with pytest.raises(DocumentError):
        loads("[1, 2]")
