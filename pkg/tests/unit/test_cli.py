from __future__ import annotations

import json

import pytest

from searchlight import cli, errors, scenario, suite, tables


@pytest.fixture()
def config(scenario_file) -> scenario.ScenarioConfig:
    return scenario.load_scenario(scenario_file)


def test_commands():
    # Then
    assert tuple(cli.COMMANDS) == ("plan", "curves", "compare", "mean-time", "examples")


def test_curves(config, output_dir):
    # When
    code = cli.run("curves", config)
    # Then
    assert code == cli.ExitCode.OK
    assert (output_dir / "curves.csv").read_text().startswith("t,P_subjective,P_true\n")


def test_plan(config, output_dir):
    # When
    code = cli.run("plan", config)
    # Then
    assert code == cli.ExitCode.OK
    summary = json.loads((output_dir / "plan.json").read_text())
    assert summary["family"] == "optimal"
    assert summary["feasibility"]["passed"] is True
    assert (output_dir / "plan.csv").read_text().startswith("cell,t=0")


def test_explicit_output_directory(config, tmp_path):
    # When
    code = cli.run("curves", config, out=tmp_path / "elsewhere")
    # Then
    assert code == cli.ExitCode.OK
    assert (tmp_path / "elsewhere" / "curves.csv").is_file()


def test_compare_needs_several_priors(config, output_dir):
    # When
    code = cli.run("compare", config)
    # Then
    assert code == cli.ExitCode.INVALID
    assert not (output_dir / "compare.csv").exists()


@pytest.mark.suite(
    refused=dict(given_allow=False, expected=cli.ExitCode.DIVERGENT),
    allowed=dict(given_allow=True, expected=cli.ExitCode.OK),
)
def test_divergent_mean_time(write_scenario, output_dir, given_allow, expected):
    # Given
    given_config = scenario.load_scenario(write_scenario(plan={"clairvoyant": {}}))
    # When
    code = cli.run("mean-time", given_config, allow_divergent=given_allow)
    # Then
    assert code == expected
    summary = json.loads((output_dir / "mean_time.json").read_text())
    assert summary["mu"]["divergent"] is True
    assert summary["mu"]["value"] == "inf"
    assert summary["mu_true"]["value"] == pytest.approx(1.0, abs=1e-8)


def test_non_convergence(config, output_dir, monkeypatch):
    # Given
    def stalled(*args, **kwargs):
        raise errors.ConvergenceError("stalled", bracket=(0.0, 1.0), iterations=1, residual=1.0)

    monkeypatch.setattr(tables, "curves_table", stalled)
    # When
    code = cli.run("curves", config)
    # Then
    assert code == cli.ExitCode.NOT_CONVERGED


@pytest.mark.suite(
    passed=dict(given_passed=True, expected=cli.ExitCode.OK),
    failed=dict(given_passed=False, expected=cli.ExitCode.SUITE_FAILED),
)
def test_examples(output_dir, monkeypatch, given_passed, expected):
    # Given
    result = suite.CheckResult(name="stub", passed=given_passed, detail="", elapsed="PT0S")
    monkeypatch.setattr(
        suite, "run_suite", lambda out, **kwargs: suite.SuiteReport(results=(result,))
    )
    # When
    code = cli.run("examples", None)
    # Then
    assert code == expected
    report = json.loads((output_dir / "report.json").read_text())
    assert report["passed"] is given_passed
    assert report["checks"][0]["name"] == "stub"


@pytest.mark.suite(
    unknown=dict(given_command="draw", given_config=None),
    missing_scenario=dict(given_command="plan", given_config=None),
)
def test_run_invalid(given_command, given_config):
    # When/Then
    with pytest.raises(ValueError):
        cli.run(given_command, given_config)


def test_main(scenario_file, tmp_path):
    # When
    code = cli.main(["curves", str(scenario_file), "--out", str(tmp_path), "--workers", "2"])
    # Then
    assert code == cli.ExitCode.OK
    assert (tmp_path / "curves.csv").is_file()


def test_main_with_a_bundled_scenario(output_dir):
    # When
    code = cli.main(["plan", "example3"])
    # Then
    assert code == cli.ExitCode.OK
    assert (output_dir / "plan.json").is_file()


@pytest.mark.suite(
    no_scenario=dict(given_argv=["curves"]),
    missing_file=dict(given_argv=["curves", "no-such-scenario"]),
)
def test_main_invalid(output_dir, given_argv):
    # When
    code = cli.main(given_argv)
    # Then
    assert code == cli.ExitCode.INVALID


def test_main_rejects_domain_violations(write_scenario, output_dir):
    # Given
    given_path = write_scenario(priors=[{"kind": "pmf", "weights": [0.6, 0.6]}])
    # When
    code = cli.main(["curves", str(given_path)])
    # Then
    assert code == cli.ExitCode.INVALID


def test_main_overrides_the_seed(scenario_file, output_dir, monkeypatch):
    # Given
    seen = {}

    def capture(command, config, **kwargs):
        seen["seed"] = config.seed
        return cli.ExitCode.OK

    monkeypatch.setattr(cli, "run", capture)
    # When
    cli.main(["curves", str(scenario_file), "--seed", "42"])
    # Then
    assert seen["seed"] == 42


@pytest.mark.suite(
    paper_flag=dict(given_flags=["--paper-mode"], expected=True),
    long_flag=dict(given_flags=["--moment-matched"], expected=True),
    neither=dict(given_flags=[], expected=False),
)
def test_main_moment_matched_flags(
    scenario_file, output_dir, monkeypatch, given_flags, expected
):
    # Given
    seen = {}

    def capture(command, config, **kwargs):
        seen.update(kwargs)
        return cli.ExitCode.OK

    monkeypatch.setattr(cli, "run", capture)
    # When
    code = cli.main(["compare", str(scenario_file), *given_flags])
    # Then
    assert code == cli.ExitCode.OK
    assert seen["moment_matched"] is expected
