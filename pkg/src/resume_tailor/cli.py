"""Command-line surface.

Exit codes are part of the contract:
  0 success
  1 usage errors (unknown flags, missing arguments)
  2 input errors (unreadable/malformed documents, bad config values)
  3 pipeline failures (a node raised)
  4 store errors (unknown runs/chunks, corrupt or incompatible stores)

`main(argv)` returns the code instead of exiting so tests can call it
directly; the console-script entry point wraps it in sys.exit.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from resume_tailor.engine import Engine
from resume_tailor.errors import (
    CorruptStore,
    DimensionMismatch,
    DomainError,
    DuplicateWithinBatch,
    EmptyDocument,
    EmptyInput,
    EmptyJd,
    GatewayError,
    NodeFailure,
    RowError,
    SchemaMismatch,
    StoreCorrupt,
    UnknownChunk,
    UnknownRun,
    VersionMismatch,
)
from resume_tailor.pipeline import RunConfig, replay_trace
from resume_tailor.vault import COLLECTIONS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_PIPELINE = 3
EXIT_STORE = 4

_INPUT_ERRORS = (
    EmptyDocument,
    SchemaMismatch,
    RowError,
    EmptyJd,
    EmptyInput,
    DomainError,
    DuplicateWithinBatch,
    FileNotFoundError,
    IsADirectoryError,
    UnicodeDecodeError,
    ValueError,
)
_PIPELINE_ERRORS = (NodeFailure, GatewayError)
_STORE_ERRORS = (
    UnknownRun,
    UnknownChunk,
    CorruptStore,
    StoreCorrupt,
    VersionMismatch,
    DimensionMismatch,
)


def _engine(ctx: click.Context) -> Engine:
    params = ctx.obj
    config = RunConfig(gateway_profile=params["profile"], seed=params["seed"])
    return Engine(data_dir=params["data_dir"], config=config)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


@click.group()
@click.option("--data-dir", default=None, help="Data directory (default: $TAILOR_DATA_DIR).")
@click.option("--profile", default="mock", show_default=True, help="Gateway profile.")
@click.option("--seed", default=42, show_default=True, type=int, help="Gateway seed.")
@click.pass_context
def cli(ctx: click.Context, data_dir: str | None, profile: str, seed: int) -> None:
    """Career-vault resume tailoring."""
    ctx.obj = {"data_dir": data_dir, "profile": profile, "seed": seed}


# -- vault ----------------------------------------------------------------------


@cli.group()
def vault() -> None:
    """Manage the career vault."""


@vault.command("index")
@click.option("--file", "file_path", required=True, help="Path to the document.")
@click.option("--doc-id", required=True, help="Stable document id.")
@click.option(
    "--kind",
    required=True,
    type=click.Choice(["resume_history", "career_record", "generated"]),
)
@click.option(
    "--format",
    "doc_format",
    required=True,
    type=click.Choice(["plaintext", "markdown", "csv", "xml"]),
)
@click.option("--title", default="", help="Human-readable title.")
@click.option("--dated", default=None, help="Document date (ISO).")
@click.pass_context
def vault_index(ctx, file_path, doc_id, kind, doc_format, title, dated) -> None:
    engine = _engine(ctx)
    try:
        result = engine.index_document(
            doc_id=doc_id,
            kind=kind,
            title=title or doc_id,
            format=doc_format,
            raw=_read(file_path),
            dated=dated,
        )
    finally:
        engine.close()
    click.echo(json.dumps(result))


@vault.command("list")
@click.option("--collection", required=True, type=click.Choice(list(COLLECTIONS)))
@click.option("--as-json", is_flag=True, help="Emit one JSON object per chunk.")
@click.pass_context
def vault_list(ctx, collection, as_json) -> None:
    engine = _engine(ctx)
    try:
        chunks = engine.list_chunks(collection)
    finally:
        engine.close()
    if as_json:
        for chunk in chunks:
            click.echo(json.dumps(chunk))
        return
    for chunk in chunks:
        text = chunk["text"].replace("\n", " ")
        if len(text) > 70:
            text = text[:67] + "..."
        click.echo(f"{chunk['chunk_id']:<40} {chunk['level']:<8} {text}")


@vault.command("delete")
@click.argument("chunk_id")
@click.pass_context
def vault_delete(ctx, chunk_id) -> None:
    engine = _engine(ctx)
    try:
        result = engine.delete_chunk(chunk_id)
    finally:
        engine.close()
    click.echo(json.dumps(result))


# -- runs ------------------------------------------------------------------------


@cli.command("run")
@click.option("--resume", "resume_path", required=True, help="Path to the base resume.")
@click.option("--jd", "jd_path", required=True, help="Path to the job description.")
@click.option("--resume-format", default="markdown", type=click.Choice(["markdown", "plaintext"]))
@click.option("--no-retrieval", is_flag=True, help="Baseline mode: skip the vault.")
@click.option("--alpha", default=None, type=float, help="Semantic/lexical blend weight.")
@click.option("--tau", default=None, type=float, help="Confidence threshold.")
@click.option("--k", default=None, type=int, help="Top-k per retrieval query.")
@click.option("--show", default=None, type=click.Choice(["txt", "html", "markdown"]),
              help="Print this render after the run.")
@click.pass_context
def run_cmd(ctx, resume_path, jd_path, resume_format, no_retrieval, alpha, tau, k, show) -> None:
    engine = _engine(ctx)
    overrides = engine.config.to_dict()
    if no_retrieval:
        overrides["retrieval_enabled"] = False
    if alpha is not None:
        overrides["alpha"] = alpha
    if tau is not None:
        overrides["tau"] = tau
    if k is not None:
        overrides["k"] = k
    config = RunConfig.from_dict(overrides)
    try:
        result = engine.run(
            resume_text=_read(resume_path),
            jd_text=_read(jd_path),
            config=config,
            resume_format=resume_format,
        )
        summary = engine.run_summary(result.run_id)
    finally:
        engine.close()
    click.echo(json.dumps(summary))
    if show:
        click.echo(result.state.renders.get(show, f"(no {show} render)"))


@cli.group()
def runs() -> None:
    """Inspect stored runs."""


@runs.command("list")
@click.option("--limit", default=50, show_default=True, type=int)
@click.pass_context
def runs_list(ctx, limit) -> None:
    engine = _engine(ctx)
    try:
        rows = engine.list_runs(limit)
    finally:
        engine.close()
    for row in rows:
        overall = f"{row['overall']:.1f}" if row["overall"] is not None else "-"
        mode = "vault" if row["retrieval_enabled"] else "baseline"
        click.echo(
            f"{row['run_id']}  {row['created_at']}  {mode:8}  overall={overall:6}"
            f"  {row['verdict'] or '-'}"
        )


@runs.command("show")
@click.argument("run_id")
@click.pass_context
def runs_show(ctx, run_id) -> None:
    engine = _engine(ctx)
    try:
        data = engine.get_run(run_id)
    finally:
        engine.close()
    click.echo(json.dumps(data, indent=2))


@runs.command("trace")
@click.argument("run_id")
@click.option("--validate", is_flag=True, help="Replay the trace against the graph.")
@click.pass_context
def runs_trace(ctx, run_id, validate) -> None:
    engine = _engine(ctx)
    try:
        events = engine.trace(run_id)
    finally:
        engine.close()
    for event in events:
        click.echo(json.dumps(event))
    if validate:
        summary = replay_trace(events)
        click.echo(json.dumps({"validation": summary}))


@cli.command("render")
@click.argument("run_id")
@click.option("--format", "render_format", default="txt",
              type=click.Choice(["txt", "html", "markdown"]), show_default=True)
@click.pass_context
def render_cmd(ctx, run_id, render_format) -> None:
    engine = _engine(ctx)
    try:
        rendered = engine.render(run_id, render_format)
    finally:
        engine.close()
    click.echo(rendered, nl=False)


@cli.command("approve")
@click.argument("run_id")
@click.pass_context
def approve_cmd(ctx, run_id) -> None:
    engine = _engine(ctx)
    try:
        result = engine.approve(run_id)
    finally:
        engine.close()
    click.echo(json.dumps(result))


@cli.group()
def experiment() -> None:
    """Retrieval ablation experiments."""


@experiment.command("compare")
@click.option("--resume", "resume_path", required=True)
@click.option("--jd", "jd_path", required=True)
@click.option("--resume-format", default="markdown", type=click.Choice(["markdown", "plaintext"]))
@click.pass_context
def experiment_compare(ctx, resume_path, jd_path, resume_format) -> None:
    engine = _engine(ctx)
    try:
        result = engine.compare(
            resume_text=_read(resume_path),
            jd_text=_read(jd_path),
            resume_format=resume_format,
        )
    finally:
        engine.close()
    click.echo(result["markdown"])
    click.echo(json.dumps({k: v for k, v in result.items() if k != "markdown"}))


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.pass_context
def serve_cmd(ctx, host, port) -> None:
    import uvicorn

    from resume_tailor.service import create_app

    params = ctx.obj
    config = RunConfig(gateway_profile=params["profile"], seed=params["seed"])
    app = create_app(data_dir=params["data_dir"], config=config)
    uvicorn.run(app, host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    """Run the CLI; returns an exit code instead of raising SystemExit."""
    try:
        cli.main(args=argv, prog_name="tailor", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except _PIPELINE_ERRORS as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        return EXIT_PIPELINE
    except _STORE_ERRORS as exc:
        click.echo(f"store error: {exc}", err=True)
        return EXIT_STORE
    except _INPUT_ERRORS as exc:
        click.echo(f"input error: {exc}", err=True)
        return EXIT_INPUT
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
