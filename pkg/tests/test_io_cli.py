import io
import json
import random
from pathlib import Path

import pytest

from qpcoh.algebra import builtin_examples, random_poisson_algebra, validate_poisson
from qpcoh.cli import run
from qpcoh.errors import AxiomError, ParseError
from qpcoh.io import parse_algebra, parse_document, serialize_algebra

ALG = Path(__file__).resolve().parent.parent / "algebras"


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def _same_structure(P, Q):
    return (
        P.dim == Q.dim
        and P.algebra.mult == Q.algebra.mult
        and P.algebra.unit == Q.algebra.unit
        and P.bracket.bracket == Q.bracket.bracket
        and P.order == Q.order
    )


def test_builder_matrix():
    P = parse_algebra('{"builder": {"matrix": 2}, "bracket": {"kind": "standard", "lambda": "1"}}')
    assert P.dim == 4
    assert _same_structure(P, builtin_examples()["m2"])


def test_builder_quiver():
    text = '{"builder": {"quiver": {"vertices": 2, "arrows": [[0, 1], [0, 1]]}}, "bracket": {"kind": "standard"}}'
    P = parse_algebra(text)
    assert P.dim == 4
    assert _same_structure(P, builtin_examples()["kronecker"])


def test_bad_rational():
    doc = json.loads((ALG / "dual-numbers.alg").read_text())
    doc["mult"][0][3] = "1/0"
    with pytest.raises(ParseError) as err:
        parse_document(doc)
    assert err.value.where == "mult[0]"


def test_float_refused():
    doc = json.loads((ALG / "dual-numbers.alg").read_text())
    doc["unit"][0] = 1.0
    with pytest.raises(ParseError):
        parse_document(doc)


def test_index_out_of_range():
    doc = json.loads((ALG / "dual-numbers.alg").read_text())
    doc["mult"].append([0, 2, 0, "1"])
    with pytest.raises(ParseError) as err:
        parse_document(doc)
    assert "out of range" in str(err.value)


def test_builder_and_tables_are_exclusive():
    with pytest.raises(ParseError):
        parse_document({"builder": {"matrix": 2}, "mult": []})


def test_malformed_json_reports_line():
    with pytest.raises(ParseError) as err:
        parse_algebra('{\n  "dim": 2,\n  oops\n}')
    assert err.value.where.startswith("line 3")


def test_axiom_violation_raises():
    with pytest.raises(AxiomError):
        parse_algebra((ALG / "bad.alg").read_text())
    P = parse_algebra((ALG / "bad.alg").read_text(), validate=False)
    assert not validate_poisson(P).ok


def test_roundtrip_examples():
    for P in builtin_examples().values():
        Q = parse_document(json.loads(json.dumps(serialize_algebra(P))))
        assert _same_structure(P, Q)


def test_roundtrip_random_rational_algebras():
    rng = random.Random(4)
    for _ in range(15):
        P = random_poisson_algebra(rng, 3)
        doc = serialize_algebra(P, comment="random")
        text = json.dumps(doc)
        assert "." not in "".join(str(e[3]) for e in doc["mult"])
        Q = parse_algebra(text)
        assert _same_structure(P, Q)
        assert serialize_algebra(Q, comment="random") == doc


def test_cli_hq_table():
    code, out, _ = _run("hq", ALG / "m2.alg", "--max-degree", 4)
    assert code == 0
    dims = [int(line.split()[-1]) for line in out.splitlines()[2:7]]
    assert dims == [1, 1, 0, 1, 1]


def test_cli_check_bad():
    code, out, _ = _run("check", ALG / "bad.alg")
    assert code == 1
    assert "leibniz" in out


def test_cli_check_good():
    assert _run("check", ALG / "kronecker.alg")[0] == 0


def test_cli_input_errors(tmp_path):
    assert _run("hq", tmp_path / "missing.alg")[0] == 2
    broken = tmp_path / "broken.alg"
    broken.write_text('{"dim": 1, "unit": ["1/0"], "mult": []}')
    assert _run("hq", broken)[0] == 2
    assert _run("hq", ALG / "bad.alg")[0] == 2


def test_cli_resource_cap(monkeypatch):
    monkeypatch.setenv("QPCOH_ENTRY_CAP", "1000")
    from qpcoh.engine import clear_cache

    clear_cache()
    code, out, _ = _run("hq", ALG / "m2.alg", "--max-degree", 3)
    assert code == 3
    assert "INCOMPLETE" in out


def test_cli_hypothesis_refusal():
    code, out, err = _run("tensor-check", ALG / "kronecker.alg", "--max-degree", 2)
    assert code == 1
    assert "refused" in err


def test_cli_json_is_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert _run("ses-check", ALG / "kronecker.alg", "--json", a)[0] == 0
    assert _run("ses-check", ALG / "kronecker.alg", "--json", b)[0] == 0
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["payload"] == db["payload"]
    assert da["input_hash"] == db["input_hash"]
    assert da["payload"]["verdict"] == "pass"
    assert da["comment"]
    assert a.read_text().count("timings") == 1


def _walk(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _walk(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _walk(v)
    else:
        yield obj


def test_cli_json_has_no_floats(tmp_path):
    for cmd in (["hq", ALG / "a2.alg"], ["hq1", ALG / "a2.alg"], ["env-check", ALG / "a2.alg", "--samples", 10]):
        path = tmp_path / "out.json"
        assert _run(*cmd, "--json", path)[0] == 0
        doc = json.loads(path.read_text())
        assert not any(isinstance(v, float) for v in _walk(doc))


def test_cli_env_check_records_seed(tmp_path):
    path = tmp_path / "env.json"
    code, out, _ = _run("env-check", ALG / "a2.alg", "--samples", 20, "--seed", 5, "--json", path)
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["seed"] == 5
    assert all(p["seed"] == 5 for p in doc["payload"]["properties"])


def test_cli_other_commands():
    assert _run("hh", ALG / "kronecker.alg", "--max-degree", 3)[0] == 0
    assert _run("hl", ALG / "m2.alg", "--coefficients", "self")[0] == 0
    code, out, _ = _run("hq0", ALG / "m2.alg")
    assert code == 0 and out.strip().endswith("1")
    code, out, _ = _run("hq1", ALG / "kronecker.alg")
    assert code == 0 and out.strip().endswith("5")
    assert _run("kunneth-check", ALG / "dual-numbers.alg")[0] == 0
    assert _run("kunneth-check", ALG / "m2.alg")[0] == 1
    assert _run("tensor-check", ALG / "a2.alg", "--max-degree", 3)[0] == 0
    assert _run("hq", ALG / "a3.alg", "--max-degree", 3, "--truncate", 0, "--probe-bound", 3)[0] == 0
