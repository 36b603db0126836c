# tests/test_cli.py
import json
import math

import pytest
from click.testing import CliRunner

from src.cli import EXIT_FAIL, EXIT_NO_VERDICT, EXIT_OK, EXIT_USAGE, cli
from src.guardrails.schemas import validate_report
from src.reports import SCHEMA_VERSION, build_report, digest, to_jsonable


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        result = runner.invoke(cli, ["--quiet", *args])
        document = json.loads(result.stdout) if result.exit_code != EXIT_USAGE and result.stdout.strip() else None
        return result, document

    return invoke


def test_constants_command(run):
    result, doc = run("constants", "--p", "1", "--q", "2")
    assert result.exit_code == EXIT_OK
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["command"] == "constants"
    assert doc["result"]["gamma"] == pytest.approx(1.0 + math.sqrt(2.0))
    assert doc["result"]["classical"] == pytest.approx(2.0 + math.sqrt(2.0))
    assert doc["digest"] == digest(doc["result"])
    assert doc["config"]["seed"] == 1


def test_output_is_byte_identical_across_runs(run):
    args = ("--seed", "7", "--trials", "40", "--restarts", "1", "--iterations", "20", "verify", "--family", "lp", "--p", "1", "--q", "2", "--n", "4")
    first, _ = run(*args)
    second, _ = run(*args)
    assert first.exit_code == second.exit_code == EXIT_OK
    assert first.stdout == second.stdout


def test_worker_count_does_not_change_the_report(run):
    args = ("--trials", "40", "--restarts", "2", "--iterations", "20")
    one, _ = run(*args, "--workers", "1", "estimate", "--kind", "lower", "--family", "lp", "--p", "2", "--atoms", "1,1,1", "--exponent", "1")
    two, _ = run(*args, "--workers", "2", "estimate", "--kind", "lower", "--family", "lp", "--p", "2", "--atoms", "1,1,1", "--exponent", "1")
    assert one.stdout == two.stdout


def test_verify_dft_into_l_infinity(run):
    result, doc = run("--seed", "7", "--trials", "50", "--restarts", "1", "--iterations", "20", "verify", "--family", "lp", "--p", "1", "--q", "inf", "--n", "8", "--op", "dft")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["verdict"] == "pass"
    assert doc["result"]["q"] == "inf"
    assert doc["result"]["op_norm"]["value"] == pytest.approx(1.0)
    assert doc["result"]["gamma"] == pytest.approx(1.0)


def test_verify_lorentz_has_no_verdict(run):
    result, doc = run("--trials", "30", "--restarts", "1", "--iterations", "10", "verify", "--family", "lorentz", "--p", "1", "--q", "inf", "--n", "4")
    assert result.exit_code == EXIT_NO_VERDICT
    assert doc["result"]["verdict"] == "no-verdict"
    assert doc["result"]["passed"] is None


def test_domain_errors_exit_with_one(run):
    result, _ = run("constants", "--p", "2", "--q", "1")
    assert result.exit_code == EXIT_USAGE
    assert result.stdout == ""


@pytest.mark.parametrize(
    "args",
    [
        ("constants", "--p", "1"),
        ("constants", "--p", "zero", "--q", "2"),
        ("norm", "--p", "2", "--f", "1,2"),
        ("estimate", "--kind", "lower", "--family", "lp", "--p", "2", "--f", "1,2"),
        ("fourier", "--n", "8"),
        ("no-such-command",),
    ],
)
def test_usage_errors_exit_with_one(run, args):
    result, _ = run(*args)
    assert result.exit_code == EXIT_USAGE


def test_norm_from_flags(run):
    result, doc = run("norm", "--family", "lp", "--p", "2", "--f", "3,4")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["values"]["f"] == pytest.approx(5.0)
    assert doc["result"]["kappa"] == pytest.approx(1.0)


def test_norm_negative_values(run):
    result, doc = run("norm", "--family", "lp", "--p", "1", "--f=-1,2,-3")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["values"]["f"] == pytest.approx(6.0)


def test_norm_from_document(run, tmp_path):
    path = tmp_path / "lattice.json"
    path.write_text(
        json.dumps(
            {
                "atoms": [1, 1, 1, 1],
                "norm": {"family": "amalgam", "r": 2, "s": 1, "blocks": [[0, 2], [2, 4]]},
                "vectors": {"g": [1, 0, 0, 0]},
            }
        ),
        encoding="utf-8",
    )
    result, doc = run("norm", "--doc", str(path), "--f", "1,1,1,1")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["values"]["g"] == pytest.approx(1.0)
    assert doc["result"]["values"]["f"] == pytest.approx(2.0 * math.sqrt(2.0))


def test_estimate_renorm_lower(run):
    result, doc = run("estimate", "--kind", "renorm-lower", "--family", "lp", "--p", "2", "--f", "1,1", "--exponent", "1")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["value"] == pytest.approx(2.0)
    assert doc["result"]["exact"] is True


def test_estimate_two_term_constant(run):
    result, doc = run("estimate", "--kind", "lower", "--family", "lp", "--p", "2", "--atoms", "1,1", "--exponent", "1")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["value"] == pytest.approx(math.sqrt(2.0), rel=1e-6)


def test_config_file_supplies_defaults(run, tmp_path):
    path = tmp_path / "defaults.json"
    path.write_text(json.dumps({"constants": {"p": "1", "q": "2"}}), encoding="utf-8")
    result, doc = run("--config", str(path), "constants")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["gamma"] == pytest.approx(1.0 + math.sqrt(2.0))


def test_output_file(run, tmp_path):
    target = tmp_path / "out" / "report.json"
    result, _ = run("--output", str(target), "constants", "--p", "1", "--q", "inf")
    assert result.exit_code == EXIT_OK
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert doc["result"]["q"] == "inf"
    assert doc["result"]["corollary"] == pytest.approx(1.0)
    assert "output" not in doc["config"]


def test_fourier_mpz(run):
    result, doc = run("fourier", "--mode", "mpz", "--n", "8", "--signals", "10")
    assert result.exit_code == EXIT_OK
    assert doc["result"]["holds"] is True
    assert doc["result"]["violations"] == 0


def test_fourier_hypothesis_violation(run):
    result, _ = run("fourier", "--r", "1", "--s", "2")
    assert result.exit_code == EXIT_USAGE


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_NO_VERDICT}) == 4


def test_to_jsonable():
    assert to_jsonable(math.inf) == "inf"
    assert to_jsonable({"a": (1.0, -math.inf)}) == {"a": [1.0, "-inf"]}


def test_report_validation():
    document = build_report("constants", {"seed": 1}, {"gamma": 2.0})
    assert validate_report(document) == (True, [])
    ok, violations = validate_report({**document, "digest": "abc"})
    assert not ok and violations
    ok, violations = validate_report(build_report("constants", {}, {"gamma": 2.0}))
    assert not ok
    assert any("seed" in v for v in violations)
