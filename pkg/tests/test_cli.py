import json
import os
import subprocess
import sys

import jsonschema
import pytest

from pseudo.cli import REPORT_SCHEMA

from conftest import INPUTS


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "pseudo", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=str(INPUTS.parent),
        timeout=120,
    )


def path(name: str) -> str:
    return str(INPUTS / name)


def test_check_passes():
    result = run_cli("check", path("cur1.alg"))
    assert result.returncode == 0
    assert "associativity: PASS" in result.stdout


def test_check_counterexample_exit_2():
    result = run_cli("check", path("bad_del.alg"))
    assert result.returncode == 2
    assert "associativity: FAIL" in result.stdout
    assert "(e, e, e)" in result.stdout
    assert "-mu*del - 2*lam*del - del^2" in result.stdout


def test_check_module():
    result = run_cli("check", path("cur1.alg"), "--module", path("uboth.mod"))
    assert result.returncode == 0
    assert "module_axioms: PASS" in result.stdout


def test_missing_file_exit_1():
    result = run_cli("check", "no_such_file.alg")
    assert result.returncode == 1
    assert result.stdout == ""


def test_parse_error_exit_1(tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("kind: algebra\nproduct e e -> 1 * e\n")
    result = run_cli("check", str(bad))
    assert result.returncode == 1
    assert "line 2" in result.stderr


def test_usage_error_exit_1():
    assert run_cli("cohomology").returncode == 1
    assert run_cli("nonsense", path("cur1.alg")).returncode == 1
    assert run_cli("cohomology", path("cur1.alg"), "--n", "-3").returncode == 1


def test_cohomology_dimensions():
    result = run_cli("cohomology", path("cur1.alg"), "--n", "1", "--deg", "3")
    assert result.returncode == 0
    assert "dim_cocycles_slice: 1" in result.stdout
    assert "dim_coboundaries_slice: 0" in result.stdout
    assert "dim_cohomology_slice: 1" in result.stdout
    assert "stabilized=yes" in result.stdout


def test_cohomology_axiom_precheck_exit_2():
    result = run_cli("cohomology", path("bad_lam.alg"), "--n", "1", "--deg", "2")
    assert result.returncode == 2
    assert "precheck" in result.stdout


def test_derivations_basis_text():
    result = run_cli("derivations", path("cur1.alg"), "--deg", "3")
    assert result.returncode == 0
    assert "dim_derivations_slice: 1" in result.stdout
    assert "e -> del * e" in result.stdout
    assert "inner_derivation_basis: (none)" in result.stdout


def test_deform_verdicts():
    passing = run_cli("deform", path("cur1.alg"), "--cocycle", path("f_const.coc"))
    assert passing.returncode == 0
    assert "first_order_associative: PASS" in passing.stdout
    failing = run_cli("deform", path("cur1.alg"), "--cocycle", path("f_lam.coc"))
    assert failing.returncode == 2
    assert "(e, e, e)[e]: lam" in failing.stdout


def test_extend_verdicts():
    passing = run_cli("extend", path("cur1.alg"), "--cocycle", path("gamma_lam.coc"))
    assert passing.returncode == 0
    assert "left_module_law: PASS" in passing.stdout
    failing = run_cli("extend", path("cur1.alg"), "--cocycle", path("gamma_const.coc"))
    assert failing.returncode == 2
    assert "(e, e, e)[e]: 1" in failing.stdout


def test_extend_with_explicit_modules():
    result = run_cli(
        "extend", path("cur1.alg"),
        "--module", path("uboth.mod"), "--module", path("uboth.mod"),
        "--cocycle", path("gamma_zero_u.coc"),
    )
    assert result.returncode == 0


def test_classical_dimensions():
    result = run_cli("classical", path("mat2.fda"), "--n", "1")
    assert result.returncode == 0
    assert "dim_cohomology: 0" in result.stdout
    dual = run_cli("classical", path("dual.fda"), "--n", "2")
    assert "dim_cohomology: 1" in dual.stdout


def test_reports_are_byte_identical():
    for args in (
        ("cohomology", path("cur1.alg"), "--n", "1", "--deg", "2", "--json"),
        ("cohomology", path("cur1.alg"), "--n", "1", "--deg", "2"),
        ("derivations", path("mat2.alg"), "--deg", "1"),
        ("check", path("mat2.alg")),
    ):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.stdout == second.stdout
        assert first.returncode == second.returncode


@pytest.mark.parametrize(
    "args",
    [
        ("check", "cur1.alg"),
        ("check", "bad_del.alg"),
        ("cohomology", "cur1.alg", "--n", "1", "--deg", "2"),
        ("derivations", "cur1.alg", "--deg", "2"),
        ("deform", "cur1.alg", "--cocycle", "f_lam.coc"),
        ("extend", "cur1.alg", "--cocycle", "gamma_lam.coc"),
        ("classical", "mat2.fda", "--n", "1"),
    ],
)
def test_json_reports_validate(args):
    fixed = [args[0]] + [
        path(a) if a.endswith((".alg", ".mod", ".coc", ".fda")) else a
        for a in args[1:]
    ]
    result = run_cli(*fixed, "--json")
    report = json.loads(result.stdout)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["command"] == args[0]
    assert report["version"]
    for info in report["inputs"].values():
        assert len(info["sha256"]) == 64


def test_timing_goes_to_stderr_only():
    result = run_cli("check", path("cur1.alg"))
    assert "elapsed" in result.stderr
    assert "elapsed" not in result.stdout


def test_max_margin_env():
    bad = run_cli(
        "cohomology", path("cur1.alg"), "--n", "1", "--deg", "2",
        env_extra={"PSEUDO_MAX_MARGIN": "0"},
    )
    assert bad.returncode == 1
    good = run_cli(
        "cohomology", path("cur1.alg"), "--n", "1", "--deg", "2",
        env_extra={"PSEUDO_MAX_MARGIN": "2"},
    )
    assert good.returncode == 0


def test_console_script_entry_point():
    from pseudo import cli

    code = cli.main(["check", path("cur1.alg")])
    assert code == 0
