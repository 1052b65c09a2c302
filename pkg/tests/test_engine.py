import json

import pytest

import wstar.checks as checks
from wstar.engine import builtin_suite_script, run, run_text
from wstar.errors import ScriptError
from wstar.reports import render_reports
from wstar.script import parse


def test_empty_script():
    reports, code = run_text("")
    assert reports == [] and code == 0


def test_cross_norm_check_passes():
    reports, code = run_text(
        "algebra A = [2]\nalgebra B = [3]\n"
        "check cross_norm A B trials=100 seed=7 tol=1e-9\n"
    )
    assert code == 0
    assert reports[0].status == "pass"
    assert reports[0].seed == 7
    assert reports[0].tol == 1e-9


def test_equivalence_check_passes_tightly():
    reports, code = run_text(
        "algebra A = [2,1]\nalgebra B = [2]\n"
        "check equivalence A B seed=1 tol=1e-12\n"
    )
    assert code == 0
    assert reports[0].max_error <= 1e-12


def test_tensor_and_product_names_resolve_as_algebras():
    reports, code = run_text(
        "algebra A = [2]\nalgebra B = [1,1]\n"
        "tensor T = A (x) B\n"
        "product P = A * B\n"
        "check cstar_identity T P trials=20 seed=3 tol=1e-9\n"
    )
    assert code == 0 and reports[0].status == "pass"


def test_root_seed_override_derives_per_check_seeds():
    text = (
        "algebra A = [2]\n"
        "check cstar_identity A A trials=5 seed=1 tol=1e-9\n"
        "check cstar_identity A A trials=5 seed=1 tol=1e-9\n"
    )
    r1, _ = run_text(text, root_seed=99)
    r2, _ = run_text(text, root_seed=99)
    assert [r.seed for r in r1] == [r.seed for r in r2]
    assert r1[0].seed != r1[1].seed  # derived per check index
    declared, _ = run_text(text)
    assert [r.seed for r in declared] == [1, 1]


def test_report_emission_is_deterministic(tmp_path):
    path1, path2 = tmp_path / "a.json", tmp_path / "b.json"
    text = (
        "algebra A = [2]\n"
        "check cross_norm A A trials=20 seed=5 tol=1e-9\n"
        f"report json {path1}\n"
    )
    run_text(text)
    run_text(text.replace(str(path1), str(path2)))
    assert path1.read_bytes() == path2.read_bytes()
    payload = json.loads(path1.read_text())
    assert list(payload[0].keys()) == [
        "name", "status", "max_error", "tol", "seed", "witness",
    ]


def test_check_failure_sets_exit_code():
    # sabotage: a deliberately absurd tolerance makes the check fail
    reports, code = run_text(
        "algebra A = [2]\ncheck cstar_identity A A trials=5 seed=1 tol=1e-30\n"
    )
    assert code == 1
    assert reports[0].status == "fail"


def test_check_error_becomes_error_report(monkeypatch):
    def boom(args, trials, seed, tol):
        from wstar.errors import WStarError

        raise WStarError("synthetic failure")

    monkeypatch.setitem(
        checks.REGISTRY, "cross_norm", (boom, "algebra", 2, 2, 1e-9)
    )
    reports, code = run_text(
        "algebra A = [2]\ncheck cross_norm A A trials=5 seed=1 tol=1e-9\n"
    )
    assert code == 1
    assert reports[0].status == "error"
    assert "synthetic failure" in reports[0].witness
    data = json.loads(render_reports(reports))
    assert data[0]["status"] == "error"


def test_statement_level_failure_raises_script_error():
    text = (
        "algebra A = [2]\n"
        "hom f : A -> A = mult [[1]] unitary default\n"
        "mediator m = mediate(f, f)\n"  # id ranges do not commute
    )
    with pytest.raises(ScriptError):
        run_text(text)


def test_builtin_suite_covers_every_registered_suite():
    script = builtin_suite_script()
    used = {s.suite for s in script.statements if hasattr(s, "suite")}
    assert used == set(checks.REGISTRY)


def test_builtin_suite_is_parseable_and_well_formed():
    script = builtin_suite_script()
    assert parse(  # round trip through the canonical rendering
        __import__("wstar.script", fromlist=["pretty_print"]).pretty_print(script)
    ) == script
