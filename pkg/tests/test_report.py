import io
import json
import subprocess
import sys

import jsonschema
import pytest

from kronred.report import (EXIT_BACKEND, EXIT_PARSE, EXIT_SHAPE, REPORT_SCHEMA,
                            InputDoc, main, render, run)

NIL = {"E": [["0", "1"], ["0", "0"]], "A": [["1", "0"], ["0", "1"]]}


def call(doc, *args):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(args), stdin=io.StringIO(json.dumps(doc) if not isinstance(doc, str)
                                              else doc), stdout=out, stderr=err)
    return code, (json.loads(out.getvalue()) if out.getvalue() else None), err.getvalue()


def test_nilpotent_example():
    code, rep, _ = call({**NIL, "analyses": ["defects", "resolvent"]})
    assert code == 0
    assert rep["defects"]["alpha"] == [0, 1]
    assert rep["resolvent"]["kind"] == "all"
    assert rep["kronecker"] is None and rep["shape"] == [2, 2]
    jsonschema.validate(rep, REPORT_SCHEMA)


def test_generator_mode():
    code, rep, _ = call({"spec": {"L": {"1": 1}}})
    assert code == 0
    assert rep["generated"]["round_trip"] is True
    assert rep["kronecker"]["l_blocks"] == {"1": 1}
    assert rep["shape"] == [2, 1] and len(rep["generated"]["E"]) == 2
    jsonschema.validate(rep, REPORT_SCHEMA)


def test_integer_example():
    code, rep, _ = call({"backend": "integer", "E": [["2"]], "A": [["1"]]})
    assert code == 0
    assert rep["indices"]["obs_index"] == "≥32"
    assert rep["resolvent"]["kind"] == "finite_set"
    assert rep["resolvent"]["certificate"] == ["-1", "0"]
    assert rep["warnings"] == ["observation chain truncated at depth 32"]
    jsonschema.validate(rep, REPORT_SCHEMA)


def test_flags_override_document():
    code, rep, _ = call({**NIL, "analyses": ["grid"]}, "--analyses", "indices,defects",
                        "--max-depth", "3")
    assert rep["analyses"] == ["defects", "indices"] and rep["max_depth"] == 3
    assert rep["grid"] is None and rep["indices"]["cap"] == 3
    code, rep, _ = call({"backend": "integer", "E": [["2"]], "A": [["1"]]},
                        "--max-depth", "4")
    assert rep["indices"]["obs_index"] == "≥4"


def test_seed_changes_generated_system():
    doc = {"spec": {"N": {"2": 1}, "core": 2}}
    _, a, _ = call(doc, "--seed", "1")
    _, b, _ = call(doc, "--seed", "2")
    assert a["generated"]["spec"]["seed"] == 1
    assert a["generated"]["E"] != b["generated"]["E"]
    assert a["kronecker"]["nilpotent_blocks"] == b["kronecker"]["nilpotent_blocks"]


def test_rationals_are_strings():
    doc = {"E": [["1/2", "0"], ["0", "3"]], "A": [["-2/4", "1"], ["0", "0"]],
           "analyses": ["kronecker", "resolvent"]}
    code, rep, _ = call(doc)
    assert code == 0
    assert rep["kronecker"]["core_E"] == [["1/2", "0"], ["0", "3"]]
    assert rep["kronecker"]["core_A"] == [["-1/2", "1"], ["0", "0"]]
    # det(lam E + A) = 3/2 lam^2 - 3/2 lam
    assert rep["resolvent"]["certificate"] == ["0", "-3/2", "3/2"]
    assert rep["resolvent"]["excluded"] == ["0", "1"]
    floats = []
    json.loads(render(rep), parse_float=lambda x: floats.append(x))
    assert floats == []


def test_degenerate_shapes():
    code, rep, _ = call({"E": [], "A": [], "cols": 2})
    assert code == 0 and rep["shape"] == [0, 2]
    assert rep["defects"]["beta_ctl"] == [2]
    assert rep["resolvent"]["blocking_defect"] == {"defect": "beta_ctl", "depth": 0}
    code, rep, _ = call({"E": [[], []], "A": [[], []]})
    assert rep["shape"] == [2, 0] and rep["kronecker"]["l_blocks"] == {"0": 2}


def test_singular_pencil_is_not_an_error():
    code, rep, _ = call({"E": [["0"]], "A": [["0"]]})
    assert code == 0 and rep["resolvent"]["kind"] == "empty"


@pytest.mark.parametrize("doc,code", [
    ("not json", EXIT_PARSE),
    ([1, 2], EXIT_PARSE),
    ({"E": [["x"]], "A": [["1"]]}, EXIT_PARSE),
    ({"E": [["1.5"]], "A": [["1"]]}, EXIT_PARSE),
    ({"E": [["1/0"]], "A": [["1"]]}, EXIT_PARSE),
    ({"E": [["1"]]}, EXIT_PARSE),
    ({**NIL, "analyses": ["eigen"]}, EXIT_PARSE),
    ({**NIL, "max_depth": 0}, EXIT_PARSE),
    ({**NIL, "colour": "red"}, EXIT_PARSE),
    ({"backend": "integer", "E": [["1/2"]], "A": [["1"]]}, EXIT_PARSE),
    ({"E": [["1", "2"]], "A": [["1"]]}, EXIT_SHAPE),
    ({"E": [["1", "2"], ["1"]], "A": [["1", "2"], ["1", "1"]]}, EXIT_SHAPE),
    ({"backend": "integer", "E": [["1"]], "A": [["1"]],
      "domain_relations": [["2"]]}, EXIT_SHAPE),
    ({"backend": "integer", "E": [["2"]], "A": [["1"]], "analyses": ["kronecker"]},
     EXIT_BACKEND),
    ({"backend": "integer", "E": [["2"]], "A": [["1"]], "analyses": ["strangeness"]},
     EXIT_BACKEND),
    ({"backend": "integer", "spec": {"N": {"1": 1}}}, EXIT_BACKEND),
])
def test_input_errors(doc, code):
    got, rep, err = call(doc)
    assert got == code and rep is None
    assert err.startswith("error: ")


def test_integer_relations():
    doc = {"backend": "integer", "E": [["1"]], "A": [["1"]],
           "domain_relations": [["4"]], "codomain_relations": [["4"]]}
    code, rep, _ = call(doc)
    assert code == 0
    assert rep["invariants"]["domain"] == {"free_rank": 0, "torsion": [4]}
    # the resolvent over Z needs free groups; reported as a warning
    assert rep["resolvent"] is None and rep["warnings"]


def test_input_doc_direct():
    doc = InputDoc.from_json(NIL)
    assert doc.shape() == (2, 2) and doc.requested[0] == "defects"
    rep = run(doc)
    assert rep["strangeness"]["s"] == 1


def test_cli_is_deterministic(tmp_path):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"spec": {"N": {"1": 1, "3": 1}, "L": {"0": 1},
                                         "LT": {"2": 1}, "core": 2, "seed": 3}}))
    runs = [subprocess.run([sys.executable, "-m", "kronred", "--input", str(path)],
                           capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
    rep = json.loads(runs[0])
    assert rep["generated"]["round_trip"] is True
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert list(rep) == sorted(rep)


def test_cli_missing_file():
    proc = subprocess.run([sys.executable, "-m", "kronred", "--input", "/nonexistent.json"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_PARSE and "ParseError" in proc.stderr
