from __future__ import annotations

import json
import pathlib

import pytest

from tests import models


@pytest.fixture()
def scenario_file(tmp_path) -> pathlib.Path:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(models.scenario_document()))
    return path


@pytest.fixture()
def write_scenario(tmp_path):
    def write(**overrides) -> pathlib.Path:
        path = tmp_path / "custom.json"
        path.write_text(json.dumps(models.scenario_document(**overrides)))
        return path

    return write


@pytest.fixture()
def output_dir(tmp_path, monkeypatch) -> pathlib.Path:
    out = tmp_path / "out"
    monkeypatch.setenv("SEARCHLIGHT_OUTPUT_DIR", str(out))
    return out
