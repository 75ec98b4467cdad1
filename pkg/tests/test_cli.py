from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from dialoglab.cli import main

from conftest import GOLDEN_DIR, PERSONA_DIR


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args, **kwargs):
    return runner.invoke(main, list(args), catch_exceptions=False, **kwargs)


def test_validate_shipped_fixtures_ok(runner):
    for language in ("en", "de"):
        result = invoke(runner, "validate", "--language", language)
        assert result.exit_code == 0, result.output
        assert "ok:" in result.output


def test_validate_broken_template_exits_1(runner, tmp_path):
    bad = tmp_path / "templates.yaml"
    bad.write_text(
        "language: en\ntemplates:\n  greet:\n    formal: ['Hello']\n", "utf-8"
    )
    result = runner.invoke(main, ["validate", "--templates", str(bad)])
    assert result.exit_code == 1
    assert "greet" in result.output


def test_unknown_subcommand_usage_error(runner):
    result = runner.invoke(main, ["frobnicate"])
    assert result.exit_code == 2
    assert "Usage" in result.output or "No such command" in result.output


def test_missing_required_option_usage_error(runner):
    result = runner.invoke(main, ["replay"])
    assert result.exit_code == 2


def test_replay_predicate_suite(runner, tmp_path):
    report_path = tmp_path / "report.json"
    result = invoke(
        runner,
        "replay",
        "--suite",
        str(PERSONA_DIR),
        "--mode",
        "predicate",
        "--report",
        str(report_path),
    )
    assert result.exit_code == 0, result.output
    assert "completion rate: 1.000" in result.output
    payload = json.loads(report_path.read_text())
    assert payload["metrics"]["completion_rate"] == 1.0
    assert len(payload["reports"]) == 14


def test_replay_exact_suite(runner):
    result = invoke(
        runner,
        "replay",
        "--suite",
        str(PERSONA_DIR),
        "--mode",
        "exact",
        "--golden",
        str(GOLDEN_DIR),
    )
    assert result.exit_code == 0, result.output


def test_replay_exact_without_golden_fails_cleanly(runner):
    result = runner.invoke(main, ["replay", "--suite", str(PERSONA_DIR), "--mode", "exact"])
    assert result.exit_code == 1


def test_chat_piped_happy_path(runner, tmp_path):
    lines = "\n".join(
        [
            "I want to report a damage",
            "water damage",
            "yes",
            "Pixel 2",
            "yes",
            "0711 445566",
            "yes",
            "490154203237518",
            "yes",
            "yesterday",
            "yes",
            "it fell into the sink",
            "yes",
            "yes",
        ]
    )
    result = invoke(
        runner,
        "chat",
        "--data-dir",
        str(tmp_path / "ctx"),
        "--claims-dir",
        str(tmp_path / "claims"),
        input=lines + "\n",
    )
    assert result.exit_code == 0, result.output
    assert "CLM-" in result.output

    listing = invoke(runner, "claims", "list", "--claims-dir", str(tmp_path / "claims"))
    assert listing.exit_code == 0
    assert "CLM-" in listing.output
    assert "water_damage" in listing.output


def test_claims_list_empty(runner, tmp_path):
    result = invoke(runner, "claims", "list", "--claims-dir", str(tmp_path / "none"))
    assert result.exit_code == 0
    assert "no claims" in result.output


def test_config_file_and_env_precedence(runner, tmp_path, monkeypatch):
    config = tmp_path / "config.yaml"
    config.write_text("language: de\n", "utf-8")
    # config file sets de; env overrides to en; flag wins over both
    monkeypatch.setenv("DIALOGLAB_LANGUAGE", "en")
    result = invoke(runner, "validate", "--config", str(config))
    assert result.exit_code == 0

    from dialoglab.config import resolve_config

    merged = resolve_config({}, env={"DIALOGLAB_LANGUAGE": "en"}, config_file=config)
    assert merged.language == "en"
    merged = resolve_config({"language": "de"}, env={"DIALOGLAB_LANGUAGE": "en"}, config_file=config)
    assert merged.language == "de"
    merged = resolve_config({}, env={}, config_file=config)
    assert merged.language == "de"


def test_config_rejects_bad_values():
    from dialoglab.config import ConfigError, resolve_config

    with pytest.raises(ConfigError) as err:
        resolve_config({"language": "fr"})
    assert err.value.field_name == "language"
    with pytest.raises(ConfigError):
        resolve_config({"port": "not-a-number"})
    with pytest.raises(ConfigError) as err:
        resolve_config({"catalog_path": "/does/not/exist.yaml"})
    assert err.value.field_name == "catalog_path"


def test_replay_update_golden_roundtrip(runner, tmp_path):
    golden_dir = tmp_path / "golden"
    recorded = invoke(
        runner,
        "replay",
        "--suite",
        str(PERSONA_DIR),
        "--golden",
        str(golden_dir),
        "--update-golden",
    )
    assert recorded.exit_code == 0, recorded.output
    assert len(list(golden_dir.glob("*.json"))) == 14

    exact = invoke(
        runner,
        "replay",
        "--suite",
        str(PERSONA_DIR),
        "--mode",
        "exact",
        "--golden",
        str(golden_dir),
    )
    assert exact.exit_code == 0, exact.output


def test_update_golden_requires_golden_dir(runner):
    result = runner.invoke(main, ["replay", "--suite", str(PERSONA_DIR), "--update-golden"])
    assert result.exit_code == 2
