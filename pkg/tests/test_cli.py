import json

import pytest

from alphabeta.cli import emit, main
from alphabeta.problem import EXAMPLES, example_text, parse_spec
from alphabeta.runner import run


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="p.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def test_analyze_text_ok(write, capsys):
    assert main(["analyze", write(example_text("heisenberg3-randers"))]) == 0
    out = capsys.readouterr().out
    assert "verdict: PASS" in out and "symmetry" in out


def test_analyze_machine_to_file(write, tmp_path):
    out = tmp_path / "r.json"
    code = main(["analyze", write(example_text("abelian3-randers")), "--format", "machine", "-o", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["verdict"] == "pass"


def test_exit_code_fail(write, capsys):
    raw = dict(EXAMPLES["abelian3-randers"], x=[0, 0, 1.2])
    assert main(["analyze", write(raw)]) == 1
    assert "refused" in capsys.readouterr().out


def test_exit_code_jacobi(write, capsys):
    raw = dict(EXAMPLES["abelian3-randers"],
               algebra={"dim": 3, "brackets": [[1, 2, [0, 0, 1]], [1, 3, [1, 0, 0]]]})
    assert main(["analyze", write(raw)]) == 1
    assert "Jacobi" in capsys.readouterr().err


def test_exit_code_io(write, tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "missing.json")]) == 2
    assert main(["analyze", write("{]")]) == 2
    raw = dict(EXAMPLES["abelian3-randers"], gram=[[1, 2, 0], [0, 1, 0], [0, 0, 1]])
    assert main(["analyze", write(raw)]) == 2
    assert "gram[0][1]" in capsys.readouterr().err


def test_seed_flag(write, capsys):
    path = write(example_text("abelian3-randers"))
    main(["analyze", path, "--format", "machine", "--seed", "7"])
    assert json.loads(capsys.readouterr().out)["spec"]["seed"] == 7


def test_deterministic_bytes(write, capsys):
    path = write(example_text("heisenberg3-matsumoto"))
    main(["analyze", path, "--format", "machine"])
    first = capsys.readouterr().out
    main(["analyze", path, "--format", "machine"])
    assert capsys.readouterr().out == first


def test_timings_flag(write, capsys):
    main(["analyze", write(example_text("aff1-randers")), "--timings"])
    assert "s)" in capsys.readouterr().out


def test_example_commands(capsys):
    assert main(["list-examples"]) == 0
    assert capsys.readouterr().out.split() == list(EXAMPLES)
    assert main(["example", "custom-series"]) == 0
    assert json.loads(capsys.readouterr().out) == EXAMPLES["custom-series"]
    assert main(["example", "nope"]) == 2


def test_emit_formats():
    rep = run(parse_spec(example_text("so3-matsumoto")))
    data, code = emit(rep, "machine")
    assert code == 0 and json.loads(data)["verdict"] == "pass"
    text, _ = emit(rep, "text")
    assert text.decode().startswith("algebra: so3")
