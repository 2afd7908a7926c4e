import copy
import json

import numpy as np
import pytest

from alphabeta.errors import SpecError
from alphabeta.lie import CATALOG
from alphabeta.problem import DEFAULT_TOLERANCES, EXAMPLES, TASKS, example_text, parse_spec, spec_from_dict
from alphabeta.runner import Report, run

BASE = EXAMPLES["heisenberg3-randers"]


def _errors(raw):
    with pytest.raises(SpecError) as info:
        spec_from_dict(raw)
    return info.value


def _with(**kw):
    raw = copy.deepcopy(BASE)
    raw.update(kw)
    return raw


def test_examples_parse():
    for name in EXAMPLES:
        spec = parse_spec(example_text(name))
        assert spec.algebra.dim == len(spec.x)


def test_catalog_names_accepted():
    for name in CATALOG:
        dim = 2 if name == "aff1" else 3
        spec = spec_from_dict(_with(algebra=name, x=[0.0] * dim))
        assert spec.catalog_name == name


def test_explicit_brackets_are_one_based():
    raw = _with(algebra={"dim": 3, "brackets": [[1, 2, [0, 0, 1]]]})
    C = spec_from_dict(raw).algebra.structure
    assert C[2, 0, 1] == 1 and C[2, 1, 0] == -1
    raw = _with(algebra={"dim": 3, "brackets": [[2, 1, [0, 0, 1]]]})
    assert spec_from_dict(raw).algebra.structure[2, 0, 1] == -1


@pytest.mark.parametrize("brackets,fragment", [
    ([[1, 4, [0, 0, 1]]], "out of range"),
    ([[0, 1, [0, 0, 1]]], "out of range"),
    ([[2, 2, [0, 0, 1]]], "diagonal"),
    ([[1, 2, [0, 1]]], "3 finite numbers"),
    ([[1, 2, [0, 0, 1]], [2, 1, [0, 0, 1]]], "given twice"),
])
def test_bracket_errors(brackets, fragment):
    err = _errors(_with(algebra={"dim": 3, "brackets": brackets}))
    assert any(fragment in reason for _, reason in err.errors)
    assert not err.validation


def test_jacobi_failure_is_validation_error():
    # cyclic sum on (e1, e2, e3) is e3
    br = [[1, 2, [0, 0, 1]], [1, 3, [1, 0, 0]]]
    err = _errors(_with(algebra={"dim": 3, "brackets": br}))
    assert err.validation
    assert "Jacobi" in err.errors[0][1]


def test_nonsymmetric_gram_names_entry():
    err = _errors(_with(gram=[[1, 0.1, 0], [0, 1, 0], [0, 0, 1]]))
    assert err.errors[0][0] == "gram[0][1]"


def test_indefinite_gram():
    err = _errors(_with(gram=[[1, 0, 0], [0, -1, 0], [0, 0, 1]]))
    assert err.errors[0][0] == "gram"


@pytest.mark.parametrize("patch,path", [
    ({"colour": "red"}, "colour"),
    ({"spec_version": 2}, "spec_version"),
    ({"x": [0, 1]}, "x"),
    ({"phi": {"kind": "finsler"}}, "phi.kind"),
    ({"phi": {"kind": "randers", "b0": 2}}, "phi.b0"),
    ({"phi": {"kind": "series", "coeffs": [1, 1]}}, "phi.b0"),
    ({"tasks": ["norms", "paint"]}, "tasks"),
    ({"seed": -1}, "seed"),
    ({"tolerances": {"leibniz": 0}}, "tolerances.leibniz"),
    ({"tolerances": {"nope": 1}}, "tolerances.nope"),
    ({"allow_inadmissible": "yes"}, "allow_inadmissible"),
])
def test_field_errors(patch, path):
    assert path in [p for p, _ in _errors(_with(**patch)).errors]


def test_missing_required_and_bad_json():
    raw = copy.deepcopy(BASE)
    del raw["phi"]
    assert ("phi", "required key missing") in _errors(raw).errors
    with pytest.raises(SpecError) as info:
        parse_spec("{ not json")
    assert "line 1" in info.value.errors[0][1]


def test_tasks_all_and_ordering():
    assert spec_from_dict(_with(tasks=["all"])).tasks == TASKS
    assert spec_from_dict(_with(tasks=["lift", "norms"])).tasks == ("norms", "lift")


def test_loosened_tolerances_flagged():
    spec = spec_from_dict(_with(tolerances={"leibniz": 1e-6, "witness_gap": 1e-9, "isometry": 1e-12}))
    assert spec.loosened() == ["leibniz", "witness_gap"]
    assert run(spec).flags["loosened_tolerances"] == ["leibniz", "witness_gap"]
    assert set(DEFAULT_TOLERANCES) >= set(spec.tolerances)


def _section(report, task):
    return next(s for s in report.sections if s.task == task)


def test_heisenberg_randers_report():
    rep = run(parse_spec(example_text("heisenberg3-randers")))
    dims = _section(rep, "symmetry").values["dims"]
    assert dims["der"] == 6 and dims["k_prime"] == 1
    assert _section(rep, "invariance").status == "pass"
    assert rep.verdict == "pass"


def test_kropina_regularity_not_applicable():
    rep = run(parse_spec(example_text("heisenberg3-kropina")))
    assert _section(rep, "regularity").status == "not_applicable"
    assert rep.flags["phi_regular"] is False
    assert _section(rep, "symmetry").status == "pass"
    assert _section(rep, "invariance").status == "pass"


def test_inadmissible_refused_at_validate():
    raw = _with(x=[0, 0, 1.2], tasks=["all"])
    rep = run(spec_from_dict(raw))
    val = _section(rep, "validate")
    assert val.status == "fail" and "refused" in val.message
    assert all(s.status == "skipped" for s in rep.sections if s.task != "validate")
    assert rep.verdict == "fail"


def test_inadmissible_override_finds_witness():
    rep = run(parse_spec(example_text("abelian3-randers-inadmissible")))
    conv = _section(rep, "convexity")
    assert conv.status == "pass" and conv.values["non_pd_count"] > 0


def test_dependencies_pulled_in():
    rep = run(spec_from_dict(_with(tasks=["lift"])))
    assert [s.task for s in rep.sections] == ["validate", "symmetry", "lift"]


def test_machine_round_trip():
    rep = run(parse_spec(example_text("so3-matsumoto")))
    text = rep.to_machine()
    again = Report.from_dict(json.loads(text))
    assert again.to_machine() == text
    assert again.verdict == rep.verdict


def test_seed_override_changes_samples():
    spec = parse_spec(example_text("abelian3-randers"))
    a = run(spec.with_seed(1)).to_machine()
    b = run(spec.with_seed(2)).to_machine()
    assert a != b
    assert json.loads(a)["spec"]["seed"] == 1


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_examples_pass(name):
    assert run(parse_spec(example_text(name))).verdict == "pass"


def test_timings_only_on_request():
    spec = parse_spec(example_text("aff1-randers"))
    assert all(s.wall_time is None for s in run(spec).sections)
    assert all(s.wall_time >= 0 for s in run(spec, timings=True).sections)
    assert np.isfinite(run(spec).to_dict()["sections"][0]["values"]["jacobi_residual"])
