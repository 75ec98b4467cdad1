"""Command line entry point: chat, serve, replay, validate, claims."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from .channels.console import console_loop
from .channels.webhook import create_app, serve as serve_app
from .claimbot import ClaimStore, MemoryClaimSink
from .config import AppConfig, ConfigError, resolve_config
from .context import FileStore
from .replay import (
    ReplayEnv,
    load_suite,
    render_report_json,
    report_metrics,
    run_suite,
    write_golden,
)
from .runtime import build_runtime


def _common_options(fn):
    options = [
        click.option("--config", "config_file", type=click.Path(), default=None, help="YAML config file."),
        click.option("--language", type=click.Choice(["en", "de"]), default=None),
        click.option("--data-dir", "data_dir", default=None, help="Context store directory."),
        click.option("--claims-dir", "claims_dir", default=None, help="Claim record directory."),
        click.option("--catalog", "catalog_path", default=None, help="Intent/entity catalog file."),
        click.option("--templates", "templates_path", default=None, help="Response template file."),
        click.option("--phones", "phones_path", default=None, help="Device catalog file."),
        click.option("--jokes", "jokes_path", default=None, help="Joke list file."),
        click.option("--seed", type=int, default=None),
        click.option("--log-level", "log_level", default=None),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _load_config(config_file, **cli_values) -> AppConfig:
    try:
        return resolve_config(cli_values, config_file=config_file)
    except ConfigError as exc:
        raise click.ClickException(f"config: {exc}")


def _build(config: AppConfig, claims=None):
    try:
        return build_runtime(config, claims=claims)
    except Exception as exc:
        raise click.ClickException(f"startup: {exc}")


@click.group()
def main() -> None:
    """Rule-driven damage-claim chatbot and its evaluation tooling."""


@main.command()
@_common_options
@click.option("--scenario", type=click.Choice(["claim"]), default="claim", show_default=True)
@click.option("--user", "user_id", default="local", show_default=True)
def chat(config_file, scenario, user_id, **cli_values) -> None:
    """Talk to the bot on the console."""
    config = _load_config(config_file, **cli_values)
    logging.basicConfig(level=config.log_level.upper())
    runtime = _build(config)
    store = FileStore(config.data_dir)
    console_loop(runtime.engine, store, user_id=user_id)


@main.command()
@_common_options
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--static-dir", "static_dir", default=None, help="Serve a web client from this directory.")
@click.option("--watch-templates", "watch_templates", is_flag=True, default=None, help="Hot-reload templates on change.")
def serve(config_file, host, port, static_dir, watch_templates, **cli_values) -> None:
    """Run the webhook service (POST /v1/messages)."""
    config = _load_config(
        config_file, host=host, port=port, static_dir=static_dir, watch_templates=watch_templates, **cli_values
    )
    logging.basicConfig(level=config.log_level.upper())
    runtime = _build(config)
    store = FileStore(config.data_dir)

    reload_hook = None
    if config.watch_templates:
        templates_path = config.resolved_templates()
        state = {"mtime": Path(templates_path).stat().st_mtime_ns}

        def reload_hook() -> None:
            mtime = Path(templates_path).stat().st_mtime_ns
            if mtime != state["mtime"]:
                state["mtime"] = mtime
                app.state.gateway.engine = _build(config).engine

    app = create_app(
        runtime.engine, store, static_dir=config.static_dir or None, reload_hook=reload_hook
    )
    click.echo(f"serving on http://{config.host}:{config.port} (health: /v1/health)")
    serve_app(app, config.host, config.port, config.log_level)


@main.command()
@_common_options
@click.option("--suite", "suite_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--mode", type=click.Choice(["exact", "predicate"]), default="predicate", show_default=True)
@click.option("--report", "report_path", type=click.Path(), default=None, help="Write the JSON report here.")
@click.option("--golden", "golden_dir", type=click.Path(), default=None, help="Golden transcripts for exact mode.")
@click.option("--update-golden", is_flag=True, help="Record transcripts into --golden instead of comparing.")
def replay(config_file, suite_dir, mode, report_path, golden_dir, update_golden, **cli_values) -> None:
    """Replay a persona suite and report completion and expectation results."""
    scripts = load_suite(suite_dir)
    cli_values.pop("language", None)  # each script declares its own language
    configs: dict[str, AppConfig] = {}

    def env_factory(script) -> ReplayEnv:
        if script.language not in configs:
            configs[script.language] = _load_config(config_file, language=script.language, **cli_values)
        sink = MemoryClaimSink()
        return ReplayEnv(engine=_build(configs[script.language], claims=sink).engine, claims=sink)

    if update_golden:
        if not golden_dir:
            raise click.UsageError("--update-golden requires --golden DIR")
        reports = run_suite(scripts, env_factory, mode="predicate")
        for report in reports:
            path = write_golden(report, golden_dir)
            click.echo(f"recorded {path}")
        return

    reports = run_suite(scripts, env_factory, mode=mode, golden_dir=golden_dir)
    metrics = report_metrics(reports)
    click.echo(metrics.format_text())
    if report_path:
        Path(report_path).write_text(render_report_json(reports), "utf-8")
        click.echo(f"report written to {report_path}")
    failed = [r for r in reports if not r.passed]
    if failed:
        for report in failed:
            for result in report.results:
                if not result.ok:
                    click.echo(f"  {report.script} turn {result.turn}: {result.expectation} — {result.detail}")
        raise click.ClickException(f"{len(failed)} script(s) failed")


@main.command()
@_common_options
def validate(config_file, **cli_values) -> None:
    """Lint catalog, templates, device list, and the assembled scenario."""
    config = _load_config(config_file, **cli_values)
    problems: list[str] = []
    runtime = None
    try:
        runtime = _build(config)
    except click.ClickException as exc:
        problems.append(str(exc.message))

    if runtime is not None:
        problems += [f"templates: {p}" for p in runtime.templates.lint()]
        from .nlu.engine import understand

        for name, intent in sorted(runtime.catalog.intents.items()):
            for example in intent.examples:
                got = understand(example, runtime.catalog)
                if got.intent != name:
                    problems.append(
                        f"catalog: example {example!r} of intent {name!r} classifies as {got.intent!r}"
                    )

    if problems:
        for problem in problems:
            click.echo(f"FAIL {problem}")
        raise click.ClickException(f"{len(problems)} problem(s) found")
    click.echo("ok: catalog, templates, phones, jokes, scenario")


@main.group()
def claims() -> None:
    """Inspect stored claim records."""


@claims.command("list")
@_common_options
def claims_list(config_file, **cli_values) -> None:
    """List claim records in the claims directory."""
    config = _load_config(config_file, **cli_values)
    store = ClaimStore(config.claims_dir)
    records = store.records()
    if not records:
        click.echo("no claims recorded")
        return
    for record in records:
        frame = record.frame
        click.echo(
            f"{record.claim_id}  {record.submitted_at:%Y-%m-%d %H:%M}  "
            f"{frame.damage_type}  {frame.phone_model}  imei={frame.imei}"
        )


if __name__ == "__main__":
    sys.exit(main())
