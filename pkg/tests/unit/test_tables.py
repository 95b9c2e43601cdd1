from __future__ import annotations

import numpy as np
import pytest

from searchlight import scenario, tables

from tests import models

PAIR = [
    {"kind": "pmf", "weights": [0.99, 0.01]},
    {"kind": "pmf", "weights": [0.17, 0.83]},
]


@pytest.fixture()
def config(scenario_file) -> scenario.ScenarioConfig:
    return scenario.load_scenario(scenario_file)


def test_curves_table(config):
    # When
    table = tables.curves_table(config)
    # Then
    assert table.header == tables.CURVE_COLUMNS
    assert table.rows.shape == (5, 3)
    times = table.column("t")
    assert table.column("P_subjective") == pytest.approx(1 - np.exp(-times / 2))
    assert table.column("P_true") == pytest.approx(1 - np.exp(-times / 2))


def test_curves_table_with_an_alternative(write_scenario):
    # Given
    given_config = scenario.load_scenario(
        write_scenario(alternative={"named": {"name": "example5_alternative"}})
    )
    # When
    table = tables.curves_table(given_config, workers=2)
    # Then
    assert table.header == tables.CURVE_COLUMNS + tables.ALT_COLUMNS
    assert np.all(table.column("P_subjective") >= table.column("P_subjective_alt") - 1e-12)


def test_compare_table(write_scenario):
    # Given
    given_config = scenario.load_scenario(write_scenario(priors=PAIR, weights=[0.75, 0.25]))
    # When
    table = tables.compare_table(given_config)
    # Then
    assert table.header == tables.COMPARE_COLUMNS
    assert table.column("difference") == pytest.approx(
        table.column("P_true_alt") - table.column("P_true")
    )


def test_compare_table_needs_several_priors(config):
    # When/Then
    with pytest.raises(ValueError):
        tables.compare_table(config)


def test_plan_table_on_cells(config):
    # Given
    given_plan = scenario.build_plan(config)
    # When
    table = tables.plan_table(config, given_plan)
    # Then
    assert table.header == ("cell", "t=0", "t=1", "t=2", "t=3", "t=4")
    assert table.column("cell").tolist() == [1.0, 2.0]
    assert table.column("t=4").tolist() == pytest.approx([2.0, 2.0])


def test_plan_table_on_a_grid(write_scenario):
    # Given
    given_config = scenario.load_scenario(
        write_scenario(
            space={"kind": "centered", "halfWidth": 1.0, "resolution": 0.5},
            priors=[{"kind": "gaussian", "sigma": 1.0}],
            truth=[0, 0],
        )
    )
    given_plan = scenario.build_plan(given_config)
    # When
    table = tables.plan_table(given_config, given_plan)
    # Then
    assert table.header[:2] == ("x", "y")
    assert table.rows.shape == (models.SMALL_GRID.size, 7)


def test_plan_summary(config):
    # Given
    given_plan = scenario.build_plan(config)
    # When
    summary = tables.plan_summary(config, given_plan)
    # Then
    assert summary["family"] == "optimal"
    assert summary["feasibility"].passed
    assert [s["t"] for s in summary["snapshots"]] == [0.0, 1.0, 2.0, 3.0, 4.0]
    last = summary["snapshots"][-1]
    assert last["lambda_star"] == pytest.approx(0.5 * np.exp(-2.0))
    assert last["method"] == "exact"


def test_plan_summary_of_another_family(config):
    # Given
    given_plan = scenario.build_plan(config, scenario.PlanRequest(kind="clairvoyant"))
    # When
    summary = tables.plan_summary(config, given_plan)
    # Then
    assert "lambda_star" not in summary["snapshots"][0]


def test_mean_times(write_scenario):
    # Given
    given_config = scenario.load_scenario(
        write_scenario(alternative={"clairvoyant": {}})
    )
    # When
    summary = tables.mean_times(given_config)
    # Then
    assert list(summary) == ["mu", "mu_true", "mu_alt", "mu_true_alt"]
    assert summary["mu"].value == pytest.approx(2.0, abs=1e-8)
    assert summary["mu_true_alt"].value == pytest.approx(1.0, abs=1e-8)
    assert summary["mu_alt"].divergent


def test_table_write(tmp_path, config):
    # Given
    given_table = tables.curves_table(config)
    # When
    path = given_table.write(tmp_path / "curves.csv")
    # Then
    lines = path.read_text().splitlines()
    assert lines[0] == "t,P_subjective,P_true"
    assert lines[1] == "0,0,0"
    assert len(lines) == 6
